#!/usr/bin/env python3
"""Tests for the command-line interface: exit codes, traces, REPL, score and validate."""

import io

import pytest
from conftest import KB_PATH, SCENARIOS_DIR

from main import (
    EXIT_CONFIG,
    EXIT_NO_ASSOCIATION,
    EXIT_OK,
    EXIT_STALLED,
    cmd_repl,
    main,
)
from models import EventKind, ExecutionTrace, RunConfig

KITCHEN = str(SCENARIOS_DIR / "kitchen.toml")
TABLE_ITEMS = str(SCENARIOS_DIR / "table_items.toml")

NO_CUP = """
[[robots]]
id = "baxter"
speed = 0.25

[[objects]]
name = "Tea"
tag = 1
x = 0.6
y = 0.3

[[objects]]
name = "Sugar"
tag = 2
x = 0.7
y = 0.3
"""


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in RunConfig.model_fields:
        monkeypatch.delenv(f"COGTASK_{name.upper()}", raising=False)


def run_cli(tmp_path, utterance, scenario=KITCHEN, *extra, out="trace.jsonl"):
    argv = ["run", "-u", utterance, "--scenario", scenario, "--out", str(tmp_path / out)]
    return main([*argv, *extra])


# ============================================================================
# run
# ============================================================================


def test_run_finishes_and_writes_trace(tmp_path, capsys):
    assert run_cli(tmp_path, "It is cold outside") == EXIT_OK

    stdout = capsys.readouterr().out
    assert "skill: TeaMaking" in stdout
    assert "response: Starting Tea Making Skill. Finished Tea Making Skill." in stdout
    assert "outcome: done" in stdout

    trace = ExecutionTrace.from_jsonl((tmp_path / "trace.jsonl").read_text(encoding="utf-8"))
    assert trace.events[0].event == EventKind.SKILL_CHOSEN
    assert trace.completed_objects() == ["Cup", "Tea", "Sugar"]


def test_unrelated_utterance_exits_2(tmp_path, capsys):
    assert run_cli(tmp_path, "the sky is blue") == EXIT_NO_ASSOCIATION
    assert "could not relate" in capsys.readouterr().out
    assert (tmp_path / "trace.jsonl").read_text(encoding="utf-8") == ""


def test_missing_object_exits_3(tmp_path, capsys):
    scenario = tmp_path / "no_cup.toml"
    scenario.write_text(NO_CUP, encoding="utf-8")
    assert run_cli(tmp_path, "It is cold outside", str(scenario)) == EXIT_STALLED
    assert "I cannot find the Cup." in capsys.readouterr().out


def test_timeout_exits_3(tmp_path):
    assert run_cli(tmp_path, "It is cold outside", KITCHEN, "--max-ticks", "2") == EXIT_STALLED


def test_bad_configuration_exits_1(tmp_path, capsys):
    assert run_cli(tmp_path, "It is cold", str(tmp_path / "nope.toml")) == EXIT_CONFIG
    assert "scenario path does not exist" in capsys.readouterr().err

    assert main(["run", "--scenario", KITCHEN, "--out", str(tmp_path / "t")]) == EXIT_CONFIG
    assert "--utterance" in capsys.readouterr().err

    assert run_cli(tmp_path, "It is cold", KITCHEN, "--threshold", "0") == EXIT_CONFIG


def test_empty_utterance_exits_1(tmp_path, capsys):
    assert run_cli(tmp_path, "   ") == EXIT_CONFIG
    assert capsys.readouterr().err.startswith("error:")


def test_traces_are_byte_identical(tmp_path):
    run_cli(tmp_path, "I am hungry", KITCHEN, "--seed", "5", out="a.jsonl")
    run_cli(tmp_path, "I am hungry", KITCHEN, "--seed", "5", out="b.jsonl")
    first = (tmp_path / "a.jsonl").read_bytes()
    assert first
    assert first == (tmp_path / "b.jsonl").read_bytes()


# ============================================================================
# repl
# ============================================================================


def repl(tmp_path, script: str) -> str:
    config = RunConfig(mode="repl", scenario=KITCHEN, out=tmp_path / "trace.jsonl")
    out = io.StringIO()
    assert cmd_repl(config, io.StringIO(script), out) == EXIT_OK
    return out.getvalue()


def test_repl_session(tmp_path):
    output = repl(
        tmp_path,
        ":world\nIt is cold outside\nIt is cold outside\n:reset\nIt is cold outside\n"
        ":dance\n:quit\nI am hungry\n",
    )
    assert "clock: 0" in output
    assert output.count("Finished Tea Making Skill.") == 2
    assert output.count("could not relate") == 1
    assert "world reset" in output
    assert "unknown command :dance" in output
    assert "Sandwich" not in output


def test_repl_stops_at_end_of_input(tmp_path):
    output = repl(tmp_path, "\nI am hungry\n")
    assert "Finished Sandwich Making Skill." in output


def test_repl_with_missing_kb_is_config_error(tmp_path):
    config = RunConfig(mode="validate", kb=tmp_path / "missing.tsv")
    assert cmd_repl(config, io.StringIO(""), io.StringIO()) == EXIT_CONFIG


# ============================================================================
# score & validate
# ============================================================================


def test_score_prints_tsv(capsys):
    assert main(["score", "cold", "hungry", "--scenario", TABLE_ITEMS]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "\tBread\tCheese\tCup\tLettuce\tMeat\tSugar\tTea\tTeapot"
    cold = lines[1].split("\t")
    assert cold[0] == "cold"
    assert cold[7] == "0.1578947"
    assert lines[2].split("\t")[5] == "0.0625000"


def test_score_without_words_prints_header_only(capsys):
    assert main(["score", "--scenario", TABLE_ITEMS]) == EXIT_OK
    assert capsys.readouterr().out.splitlines() == [
        "\tBread\tCheese\tCup\tLettuce\tMeat\tSugar\tTea\tTeapot"
    ]


def test_validate_shipped_data(capsys):
    assert main(["validate"]) == EXIT_OK
    output = capsys.readouterr().out
    assert "✓ kb" in output
    assert "144 nodes, 213 relations, 17 categories" in output
    assert "SandwichMaking, TeaMaking" in output
    assert "✗" not in output


def test_validate_reports_each_broken_file(tmp_path, capsys):
    bad_kb = tmp_path / "kb.tsv"
    bad_kb.write_text("tea\tIS_A\n", encoding="utf-8")
    assert main(["validate", "--kb", str(bad_kb), "--skills", str(tmp_path)]) == EXIT_CONFIG
    output = capsys.readouterr().out
    assert "✗ kb" in output
    assert "✓ lexicon" in output
    assert "✗ skills" not in output
    assert "✓ skills" in output


# ============================================================================
# Configuration
# ============================================================================


def test_cli_beats_env_beats_default(tmp_path):
    env = {"COGTASK_RADIUS": "2", "COGTASK_SEED": "9", "COGTASK_OUT": str(tmp_path / "e.jsonl")}
    config = RunConfig.from_sources({"radius": 3, "seed": None}, env)
    assert config.radius == 3
    assert config.seed == 9
    assert config.out == tmp_path / "e.jsonl"
    assert config.threshold == 0.5


def test_env_category_list_is_split():
    config = RunConfig.from_sources({}, {"COGTASK_EXCLUDE_CATEGORIES": "RelatedTo, Antonym"})
    assert config.exclude_categories == ["RelatedTo", "Antonym"]


def test_env_is_read_by_main(tmp_path, monkeypatch):
    monkeypatch.setenv("COGTASK_MAX_TICKS", "2")
    assert run_cli(tmp_path, "It is cold outside") == EXIT_STALLED


def test_invalid_env_value_is_a_config_error(tmp_path, monkeypatch):
    monkeypatch.setenv("COGTASK_RADIUS", "0")
    assert run_cli(tmp_path, "It is cold outside") == EXIT_CONFIG


def test_default_paths_exist():
    config = RunConfig()
    assert config.kb == KB_PATH
    assert config.skills.is_dir()
