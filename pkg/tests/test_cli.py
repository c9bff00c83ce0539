import csv
import io
import json
import subprocess
import sys

import pytest

from zerosum.cli import EXIT_CAPPED, EXIT_FAIL, EXIT_OK, EXIT_USAGE, ResultCache, UsageError, main, parse_args
from zerosum.groups import make_group
from zerosum.search import InvariantResult, eta


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_examples():
    cfg = parse_args(["compute", "--group", "2,4", "--invariant", "eta", "--format", "json"])
    assert (cfg.command, cfg.group, cfg.invariant, cfg.fmt) == ("compute", make_group([2, 4]), "eta", "json")
    cfg = parse_args(["verify", "--group", "3,3", "--suite", "all", "--threads", "4"])
    assert (cfg.groups, cfg.suite, cfg.threads) == ([make_group([3, 3])], "all", 4)


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--group", "0,4", "--invariant", "eta"],
        ["compute", "--group", "2,4"],
        ["compute", "--group", "2,4", "--invariant", "zeta", "--i", "9"],
        ["compute", "--group", "2,4", "--spec", "range:4"],
        ["verify"],
        ["verify", "--group", "2,4", "--threads", "0"],
        ["frobnicate"],
        ["compute", "--group", "2,4", "--invariant", "eta", "--bogus"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(UsageError):
        parse_args(argv)
    code, _, err = run(argv, capsys)
    assert code == EXIT_USAGE
    assert "error" in err


def test_compute_with_oracle_note(capsys):
    code, out, _ = run(["compute", "--group", "3,9", "--invariant", "eta"], capsys)
    assert code == EXIT_OK
    assert " 13 " in out
    assert "Thm main: 2D−n = 13" in out


def test_compute_json_roundtrip(capsys):
    code, out, _ = run(["compute", "--group", "2,4", "--invariant", "eta", "--format", "json"], capsys)
    assert code == EXIT_OK
    rec = json.loads(out)
    assert InvariantResult.from_record(rec).payload() == eta(make_group([2, 4])).payload()


def test_compute_csv(capsys):
    code, out, _ = run(["compute", "--group", "3", "--spec", "resup:2", "--format", "csv"], capsys)
    assert code == EXIT_OK
    [row] = list(csv.DictReader(io.StringIO(out)))
    assert row["value"] == "4" and row["spec"] == "resup:2"


def test_threads_do_not_change_payload(capsys):
    payloads = []
    for t in ("1", "2", "4"):
        _, out, _ = run(["compute", "--group", "2,2,4", "--invariant", "eta", "--format", "json", "--threads", t], capsys)
        rec = json.loads(out)
        rec.pop("stats")
        payloads.append(rec)
    assert payloads[0] == payloads[1] == payloads[2]


def test_capped_exit(capsys):
    code, out, _ = run(["compute", "--group", "2,2,2,2", "--invariant", "egz", "--cap", "8"], capsys)
    assert code == EXIT_CAPPED
    assert "False" in out


def test_verify_exit_zero(capsys):
    code, out, _ = run(["verify", "--group", "2,4"], capsys)
    assert code == EXIT_OK
    assert "fail" not in out.replace("fail 0", "")


def test_hunt(capsys):
    code, out, _ = run(["hunt", "--group", "2,4", "--ell", "2"], capsys)
    assert code == EXIT_OK
    assert "no counterexample at length 9" in out


def test_cache_and_report(tmp_path, capsys):
    cache = str(tmp_path)
    argv = ["compute", "--group", "2,4", "--invariant", "egz", "--cache", cache, "--format", "json"]
    _, first, _ = run(argv, capsys)
    stored = ResultCache(tmp_path).get(make_group([2, 4]), "exact:4")
    assert stored is not None and stored.value == 9
    _, second, _ = run(argv, capsys)
    assert json.loads(first) == json.loads(second)  # served from cache, stats included

    fresh = json.loads(run(argv + ["--no-cache"], capsys)[1])
    fresh.pop("stats")
    cached = json.loads(first)
    cached.pop("stats")
    assert fresh == cached

    assert run(["verify", "--group", "2,2", "--group", "3", "--cache", cache], capsys)[0] == EXIT_OK
    code, out, _ = run(["report", "--cache", cache, "--format", "csv"], capsys)
    assert code == EXIT_OK
    rows = {r["group"]: r for r in csv.DictReader(io.StringIO(out))}
    assert (rows["2,2"]["D"], rows["2,2"]["eta"], rows["2,2"]["s"]) == ("3", "4", "5")
    assert rows["3"]["status"] == "pass"


def test_report_reads_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ZEROSUM_CACHE_DIR", str(tmp_path))
    run(["verify", "--group", "3"], capsys)
    code, out, _ = run(["report"], capsys)
    assert code == EXIT_OK and out.splitlines()[1].startswith("3 ")


def test_report_exit_on_fail(tmp_path, capsys):
    rec = {"group": "3", "status": "fail", "values": {},
           "entries": [{"check": "x", "anchor": "", "status": "fail", "details": "", "counterexample": None}]}
    (tmp_path / "reports").mkdir()
    (tmp_path / "reports" / "3.json").write_text(json.dumps(rec))
    assert run(["report", "--cache", str(tmp_path)], capsys)[0] == EXIT_FAIL


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "zerosum", "compute", "--group", "5", "--invariant", "egz"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert " 9 " in out.stdout
