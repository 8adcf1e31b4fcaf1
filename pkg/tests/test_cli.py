"""CLI contract: dispatch, exit codes, schema, determinism, word parsing."""

import json
import subprocess
import sys

import pytest

from conjcoarse.cli import BadSpec, RunConfig, main, parse_word, parse_words, run
from conjcoarse.verdicts import Budget
from conjcoarse.zoo import GroupSpec, make_group

DINF_SPEC = GroupSpec.make("dinf")
ZK2_SPEC = GroupSpec.make("zk", k=2)

REPORT_KEYS = {
    "check",
    "group",
    "status",
    "witnesses",
    "certificate",
    "budget",
    "elapsed_ms",
}


def test_word_parser():
    d = make_group(DINF_SPEC)
    assert parse_word(d, "e") == d.identity
    assert parse_word(d, "t^3") == (0, 3)
    assert parse_word(d, "r*t^-2") == (1, -2)
    assert parse_words(d, "e,t,r") == [d.identity, (0, 1), (1, 0)]
    with pytest.raises(BadSpec):
        parse_word(d, "q")
    with pytest.raises(BadSpec):
        parse_word(d, "t^x")


def test_run_holds_exit_zero():
    report, code = run(RunConfig(check="is_discrete", spec=ZK2_SPEC, budget=Budget(radius=4, cap=80)))
    assert code == 0 and report["status"] == "holds"
    assert set(report) == REPORT_KEYS
    assert report["elapsed_ms"] == 0


def test_run_fails_exit_one():
    report, code = run(
        RunConfig(
            check="is_discrete",
            spec=DINF_SPEC,
            entourage="e,t",
            budget=Budget(radius=20),
        )
    )
    assert code == 1 and report["status"] == "fails"
    assert len(report["witnesses"]) >= 10


def test_run_unknown_exit_two():
    report, code = run(
        RunConfig(
            check="component",
            spec=GroupSpec.make("heisenberg"),
            element="y",
            budget=Budget(rounds=30),
        )
    )
    assert code == 2 and report["status"] == "unknown"


def test_run_requires_spec_for_checks():
    with pytest.raises(BadSpec):
        run(RunConfig(check="is_discrete", spec=None))


def test_suite_dispatch_and_determinism():
    r1, c1 = run(RunConfig(check="theorem10", seed=0))
    r2, c2 = run(RunConfig(check="theorem10", seed=0))
    assert c1 == 0
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)
    assert r1["certificate"]["suite"] == "theorem10"


def test_main_exit_codes_and_json(capsys):
    code = main(
        [
            "--check",
            "is_discrete",
            "--spec",
            '{"family":"zk","params":{"k":2}}',
            "--radius",
            "4",
            "--cap",
            "80",
        ]
    )
    out = capsys.readouterr().out
    report = json.loads(out)
    assert code == 0 and report["status"] == "holds"
    assert set(report) == REPORT_KEYS


def test_main_text_format(capsys):
    code = main(
        [
            "--check",
            "hamiltonian",
            "--spec",
            '{"family":"quaternion","params":{}}',
            "--format",
            "text",
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    assert "status:    holds" in out
    assert "check:     hamiltonian" in out


def test_main_bad_inputs_exit_three(capsys):
    assert main(["--check", "nonsense", "--spec", '{"family":"zk","params":{}}']) == 3
    assert main(["--check", "is_discrete", "--spec", "{broken"]) == 3
    assert main(["--check", "is_discrete", "--spec", '{"family":"wat","params":{}}']) == 3
    assert (
        main(["--check", "dedekind", "--spec", '{"family":"heisenberg","params":{}}'])
        == 3
    )  # infinite group cannot be materialized
    capsys.readouterr()


def test_spec_from_file(tmp_path, capsys):
    path = tmp_path / "spec.json"
    path.write_text('{"family": "quaternion", "params": {}}')
    code = main(["--check", "dedekind", "--spec", f"@{path}"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0 and report["certificate"]["dedekind"] is True


def test_cli_subprocess_roundtrip():
    cmd = [
        sys.executable,
        "-m",
        "conjcoarse",
        "--check",
        "subgroup_space_discrete",
        "--spec",
        '{"family":"dinf","params":{}}',
        "--entourage",
        "e,t",
    ]
    first = subprocess.run(cmd, capture_output=True, text=True)
    second = subprocess.run(cmd, capture_output=True, text=True)
    assert first.returncode == 1
    assert first.stdout == second.stdout  # byte-identical across processes
    report = json.loads(first.stdout)
    assert report["status"] == "fails"
