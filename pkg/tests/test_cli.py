import json

import pytest
from click.testing import CliRunner

from conftest import KEY
from oracles import rc4_reference, rc4_schedule
from rc4fault.cli import EXIT_HALTED, EXIT_USAGE, main


@pytest.fixture
def cli():
    runner = CliRunner()
    return lambda *args: runner.invoke(main, list(args))


def test_keystream(cli):
    r = cli("keystream", "--key", "0102030405", "--bytes", "16")
    assert r.exit_code == 0
    assert r.output.strip() == rc4_reference(KEY, 16).hex()
    assert len(r.output.strip()) == 32


def test_keystream_short_key(cli):
    r = cli("keystream", "--key", "01", "--bytes", "16")
    assert r.exit_code == EXIT_USAGE
    assert "key length" in r.output


def test_keystream_bad_hex(cli):
    assert cli("keystream", "--key", "xyz", "--bytes", "4").exit_code == EXIT_USAGE


def test_keystream_zero_bytes(cli):
    r = cli("keystream", "--key", "0102030405", "--bytes", "0")
    assert r.exit_code == 0
    assert r.output.strip() == ""


def test_keystream_no_checkers(cli):
    a = cli("keystream", "--key", "0102030405", "--bytes", "40")
    b = cli("keystream", "--key", "0102030405", "--bytes", "40", "--no-checkers")
    assert a.output == b.output


def test_inject_halt(cli, tmp_path):
    i, _, _ = rc4_schedule(KEY, 16)[262]
    trace = tmp_path / "trace.csv"
    r = cli("inject", "--key", "0102030405", "--bytes", "16",
            "--fault", f"sbox:{i}:01:262:falling", "--trace-out", str(trace))
    assert r.exit_code == EXIT_HALTED
    assert "status=HALTED" in r.output
    assert "halted_at=262:falling" in r.output
    assert "offending=crc" in r.output
    last = trace.read_text().splitlines()[-1].split(",")
    assert last[:2] == ["262", "falling"]
    assert last[4] == "0"


def test_inject_empty_plan_matches_keystream(cli):
    r = cli("inject", "--key", "0102030405", "--bytes", "16")
    assert r.exit_code == 0
    assert f"keystream={rc4_reference(KEY, 16).hex()}" in r.output
    assert "status=DONE" in r.output


def test_inject_undetected_addition(cli):
    r = cli("inject", "--key", "0102030405", "--bytes", "16", "--fault", "adder:0:03:260:rising")
    assert r.exit_code == 0
    stream = next(l for l in r.output.splitlines() if l.startswith("keystream=")).split("=")[1]
    assert stream != rc4_reference(KEY, 16).hex()


def test_inject_fault_file(cli, tmp_path):
    f = tmp_path / "plan.txt"
    f.write_text("# one counter fault\ncounter_slot:1:01:2:rising\n")
    r = cli("inject", "--key", "0102030405", "--bytes", "4", "--fault-file", str(f))
    assert r.exit_code == EXIT_HALTED
    assert "offending=counter" in r.output


def test_inject_malformed(cli, tmp_path):
    assert cli("inject", "--key", "0102030405", "--fault", "sbox:1:00:2:rising").exit_code == EXIT_USAGE
    f = tmp_path / "plan.txt"
    f.write_text("garbage\n")
    assert cli("inject", "--key", "0102030405", "--fault-file", str(f)).exit_code == EXIT_USAGE


def test_report_addition_csv(cli):
    r = cli("report", "--checker", "addition", "--format", "csv")
    assert r.exit_code == 0
    assert "255,192,63" in r.output.splitlines()[-1]


def test_report_counter_json(cli):
    r = cli("report", "--checker", "counter", "--format", "json")
    (rep,) = json.loads(r.output)
    assert rep["efficiency_percent"] == pytest.approx(87.8)
    assert round(rep["efficiency_percent"]) == 88


def test_report_crc_text(cli):
    r = cli("report", "--checker", "crc")
    assert r.exit_code == 0
    assert "delta" in r.output and "219/36" in r.output


def test_report_unknown_checker(cli):
    assert cli("report", "--checker", "parity").exit_code == EXIT_USAGE


def test_output_determinism(cli):
    args = ("inject", "--key", "0a0b0c0d0e0f", "--bytes", "32", "--fault", "adder:1:03:270:rising")
    assert cli(*args).output == cli(*args).output
    assert cli("report", "--format", "json").output == cli("report", "--format", "json").output
