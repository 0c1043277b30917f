"""cogtask command-line interface - utterance-driven skill selection on a simulated table.

Usage:
    python src/main.py run --utterance "It is cold outside" --scenario data/scenarios/tea_1.toml
    python src/main.py repl
    python src/main.py score cold hungry --scenario data/scenarios/table_items.toml
    python src/main.py validate

Exit codes: 0 skill finished, 1 configuration or input error, 2 no association
between the utterance and the table, 3 deadlock or timeout.
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TextIO

from models import Decision, EventKind, ExecutionTrace, RunConfig
from services.interaction import (
    Intent,
    InteractionResult,
    ResponseTemplate,
    handle_utterance,
    load_templates,
)
from services.knowledge import KnowledgeBase, load_kb, normalize_label
from services.lexicon import Lexicon, load_lexicon
from services.recipe import SkillLibrary, load_skills
from services.similarity import score_matrix
from services.world import WorldState, load_scenario

logger = logging.getLogger("cogtask")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_ASSOCIATION = 2
EXIT_STALLED = 3

EXIT_FOR_OUTCOME = {
    "done": EXIT_OK,
    "no_association": EXIT_NO_ASSOCIATION,
    "deadlock": EXIT_STALLED,
    "timeout": EXIT_STALLED,
}

REPL_HELP = """\
Type an utterance, or one of:
  :world   show the table
  :reset   reload the scenario
  :quit    leave the session"""


# ============================================================================
# Runtime
# ============================================================================


@dataclass(slots=True)
class Runtime:
    """Everything loaded from a RunConfig."""

    config: RunConfig
    kb: KnowledgeBase
    lexicon: Lexicon
    lib: SkillLibrary
    world: WorldState
    templates: dict[Intent, ResponseTemplate]

    @classmethod
    def load(cls, config: RunConfig) -> "Runtime":
        return cls(
            config=config,
            kb=load_kb(config.kb),
            lexicon=load_lexicon(config.lexicon),
            lib=load_skills(config.skills),
            world=load_scenario(config.scenario, seed=config.seed),
            templates=load_templates(config.templates),
        )

    def handle(self, text: str) -> InteractionResult:
        return handle_utterance(
            text, self.kb, self.world, self.lib, self.config, self.lexicon, self.templates
        )


# ============================================================================
# Output helpers
# ============================================================================


def format_decision(decision: Decision) -> str:
    lines = [
        f"utterance: {decision.utterance}",
        f"words: {', '.join(decision.tagged_words) or '-'}",
        f"object: {decision.winning_object} ({decision.score:.7f})",
        f"skill: {decision.chosen_skill}",
        "shares:",
    ]
    width = max((len(name) for name in decision.shares), default=0)
    lines += [f"  {name:<{width}}  {share:6.2f}%" for name, share in decision.shares.items()]
    return "\n".join(lines)


def format_trace(trace: ExecutionTrace) -> str:
    """One line per completed action plus the terminal event."""
    lines = [
        f"  t={e.tick:<3} {e.robot}: {e.detail['object']} done"
        for e in trace.of(EventKind.ACTION_DONE)
    ]
    for e in trace.of(EventKind.DEADLOCK, EventKind.TIMEOUT):
        lines.append(f"  t={e.tick:<3} {e.event}: {e.detail}")
    lines.append(f"  outcome: {trace.outcome or 'none'}")
    return "\n".join(lines)


def print_result(result: InteractionResult, out: TextIO) -> None:
    if result.decision is not None:
        print(format_decision(result.decision), file=out)
    print(f"response: {result.response}", file=out)


# ============================================================================
# Commands
# ============================================================================


def cmd_run(config: RunConfig, utterance: str | None, out: TextIO = sys.stdout) -> int:
    """Handle one utterance, print the decision and write the JSONL trace."""
    try:
        if utterance is None:
            raise ValueError("run needs --utterance")
        runtime = Runtime.load(config)
        result = runtime.handle(utterance)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    print_result(result, out)
    result.trace.write(config.out)
    print(f"trace: {config.out} ({len(result.trace.events)} events)", file=out)
    print(format_trace(result.trace), file=out)
    return EXIT_FOR_OUTCOME[result.outcome]


def cmd_repl(config: RunConfig, stdin: TextIO = sys.stdin, out: TextIO = sys.stdout) -> int:
    """Read utterances line by line until ``:quit`` or end of input."""
    try:
        runtime = Runtime.load(config)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    interactive = stdin.isatty()
    print(REPL_HELP, file=out)
    while True:
        if interactive:
            print("> ", end="", file=out, flush=True)
        line = stdin.readline()
        if not line:
            break
        text = line.strip()
        if not text:
            continue

        match text:
            case ":quit" | ":q" | ":exit":
                break
            case ":world":
                print(runtime.world.describe(), file=out)
            case ":reset":
                runtime.world.reset()
                print("world reset", file=out)
            case _ if text.startswith(":"):
                print(f"unknown command {text}", file=out)
                print(REPL_HELP, file=out)
            case _:
                try:
                    result = runtime.handle(text)
                except ValueError as e:
                    print(f"error: {e}", file=out)
                    continue
                print_result(result, out)
                print(format_trace(result.trace), file=out)
    return EXIT_OK


def cmd_score(config: RunConfig, words: Sequence[str], out: TextIO = sys.stdout) -> int:
    """Print the word x perceived-item score matrix as TSV."""
    try:
        kb = load_kb(config.kb)
        world = load_scenario(config.scenario, seed=config.seed)
        items = [p.name for p in world.perceive()]
        table = score_matrix(
            kb,
            [normalize_label(w) for w in words],
            items,
            config.radius,
            config.exclude_categories,
        )
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    out.write(table.to_tsv())
    return EXIT_OK


def cmd_validate(config: RunConfig, out: TextIO = sys.stdout) -> int:
    """Load every artifact without running anything."""

    def describe_kb() -> str:
        nodes, edges, categories = load_kb(config.kb).stats()
        return f"{nodes} nodes, {edges} relations, {categories} categories"

    def describe_lexicon() -> str:
        lexicon = load_lexicon(config.lexicon)
        return f"{len(lexicon.tags)} tags, {len(lexicon.stopwords)} stopwords"

    def describe_skills() -> str:
        lib = load_skills(config.skills)
        return ", ".join(lib.names) or "no skills"

    def describe_scenario() -> str:
        world = load_scenario(config.scenario)
        return f"{len(world.objects)} objects, {len(world.robots)} robots"

    def describe_templates() -> str:
        return f"{len(load_templates(config.templates))} intents"

    checks = [
        ("kb", config.kb, describe_kb),
        ("lexicon", config.lexicon, describe_lexicon),
        ("skills", config.skills, describe_skills),
        ("scenario", config.scenario, describe_scenario),
        ("templates", config.templates, describe_templates),
    ]
    failed = 0
    for name, path, check in checks:
        try:
            print(f"✓ {name}: {path} ({check()})", file=out)
        except (ValueError, OSError) as e:
            failed += 1
            print(f"✗ {name}: {e}", file=out)
    return EXIT_OK if failed == 0 else EXIT_CONFIG


# ============================================================================
# Argument parsing
# ============================================================================


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kb", help="knowledge TSV file")
    common.add_argument("--skills", help="directory of *.recipe files")
    common.add_argument("--scenario", help="scenario TOML file")
    common.add_argument("--lexicon", help="lexicon directory")
    common.add_argument("--templates", help="response template TSV")
    common.add_argument("--radius", type=int, help="signature radius in hops")
    common.add_argument("--threshold", type=float, help="activation threshold in (0, 1]")
    common.add_argument("--seed", type=int, help="seed for action jitter")
    common.add_argument("--out", help="trace output path")
    common.add_argument("--max-ticks", type=int, dest="max_ticks", help="tick budget")
    common.add_argument("--aggregate", choices=["max", "sum"], help="per-item word score")
    common.add_argument(
        "--exclude-category",
        action="append",
        dest="exclude_categories",
        help="relation category to skip (repeatable)",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="cogtask", description="Semantic skill selection and task execution"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", parents=[common], help="handle one utterance")
    run.add_argument("--utterance", "-u", help="what the human says")

    commands.add_parser("repl", parents=[common], help="interactive session")

    score = commands.add_parser("score", parents=[common], help="print a score matrix")
    score.add_argument("words", nargs="*", help="tagged words (rows)")

    commands.add_parser("validate", parents=[common], help="lint data files")
    return parser


CONFIG_FIELDS = (
    "kb",
    "skills",
    "scenario",
    "lexicon",
    "templates",
    "radius",
    "threshold",
    "seed",
    "out",
    "max_ticks",
    "aggregate",
    "exclude_categories",
)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    cli = {name: getattr(args, name) for name in CONFIG_FIELDS}
    try:
        config = RunConfig.from_sources({**cli, "mode": args.command})
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    logger.debug("Config: %s", config)

    match args.command:
        case "run":
            return cmd_run(config, args.utterance, sys.stdout)
        case "repl":
            return cmd_repl(config, sys.stdin, sys.stdout)
        case "score":
            return cmd_score(config, args.words, sys.stdout)
        case _:
            return cmd_validate(config, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
