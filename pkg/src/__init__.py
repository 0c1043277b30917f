"""cogtask: semantic skill selection and activation-spreading execution for a tabletop robot."""

__version__ = "0.1.0"
