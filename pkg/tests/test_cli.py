import os
import subprocess
import sys

import pytest

from cftc.cli import main
from conftest import MODELS

ECHO, UNUSED, RELAY = (str(MODELS / n) for n in ("echo.cft", "unused_port.cft", "relay.cft"))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dnf(capsys):
    code, text, _ = run(capsys, "dnf", "--formula", "p.value | (r.exists & s.value)")
    assert code == 0
    assert text.splitlines() == ["CLAUSE ~p.value&~r.exists", "CLAUSE ~p.value&~s.value"]


def test_check_exit_codes(capsys):
    assert run(capsys, "check", "--model", ECHO, "--cft", "echo_q")[0] == 0
    code, text, _ = run(capsys, "check", "--model", UNUSED, "--cft", "blame_r", "--depth", "3")
    assert code == 1
    assert text.startswith("VERDICT clause=~r.exists result=refuted\n")


def test_check_text_format(capsys):
    code, text, _ = run(capsys, "check", "--model", UNUSED, "--cft", "blame_r", "--format", "text")
    assert code == 1 and "clause ~r.exists / q.value: Refuted" in text


def test_usage_and_parse_errors(capsys, tmp_path):
    broken = tmp_path / "broken.cft"
    broken.write_text("component c {\n in p : {0} ;\n init s ;\n s -- x?0 --> s ; }\n")
    code, _, err = run(capsys, "check", "--model", str(broken), "--cft", "k")
    assert code == 2 and "line 4" in err
    assert run(capsys, "check", "--model", ECHO, "--cft", "missing")[0] == 2
    assert run(capsys, "dnf", "--formula", "p.value &")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["check", "--model", ECHO])
    assert info.value.code == 2


def test_compose(capsys):
    code, text, _ = run(capsys, "compose", "--model", RELAY, "--system", "relay_ok", "--strict")
    assert code == 0
    assert "cft echo_q_strict on echo_relay { output q.value ; formula p.value | x.value ; }" in text
    assert text.splitlines()[-1] == "CLAUSE ~p.value&~x.value"


def test_simplify(capsys):
    code, text, _ = run(capsys, "simplify", "--model", UNUSED, "--cft", "blame_r")
    assert code == 1 and text.startswith("SIMPLIFIED clause=~r.exists\n")


def test_validate_theorem_on_model(capsys):
    code, text, _ = run(capsys, "validate-theorem", "--model", ECHO, "--system", "pipeline")
    assert code == 0 and text.splitlines()[-1].startswith("STATUS Validated")
    code, text, _ = run(capsys, "validate-theorem", "--model", RELAY, "--system", "relay_wrong")
    assert code == 0 and "STATUS PremisesFailed transfer=1/1" in text


def test_validate_theorem_random(capsys):
    code, text, _ = run(capsys, "validate-theorem", "--random", "--trials", "3", "--seed", "9")
    assert code == 0
    lines = text.splitlines()
    assert [line.split()[1] for line in lines[:3]] == ["id=0", "id=1", "id=2"]
    assert lines[-1].startswith("SUMMARY trials=3 ") and "violations=0" in lines[-1]


def cli(args, jobs):
    env = dict(os.environ, CFTC_JOBS=str(jobs))
    return subprocess.run([sys.executable, "-m", "cftc.cli", *args], capture_output=True, env=env, check=False)


COMMANDS = [
    ["dnf", "--formula", "p.value | (r.exists & s.value)"],
    ["check", "--model", UNUSED, "--cft", "echo_q"],
    ["check", "--model", UNUSED, "--cft", "blame_r"],
    ["compose", "--model", RELAY, "--system", "relay_wrong"],
    ["simplify", "--model", UNUSED, "--cft", "blame_r"],
    ["validate-theorem", "--model", RELAY, "--system", "relay_ok"],
    ["validate-theorem", "--random", "--trials", "8", "--seed", "4"],
]


@pytest.mark.parametrize("args", COMMANDS, ids=lambda a: a[0])
def test_output_is_identical_for_any_worker_count(args):
    one, many = cli(args, 1), cli(args, 4)
    assert one.returncode == many.returncode
    assert one.stdout == many.stdout and one.stdout
