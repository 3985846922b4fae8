import json
import subprocess
import sys

import numpy as np
import pytest

from bscident import bitio
from bscident.cli import CliError, main, parse_grid
from oracles import h


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line]


def test_parse_grid():
    g = parse_grid("0.01:0.99:0.01")
    assert len(g) == 99 and g[0] == 0.01 and g[-1] == 0.99
    assert parse_grid("0.1:0.3:0.1") == [0.1, 0.2, 0.3]
    for bad in ("0.1:0.2", "a:b:c", "0.5:0.1:0.1", "0:1:0"):
        with pytest.raises(CliError):
            parse_grid(bad)


def test_identity_point(capsys):
    code, out, _ = run(capsys, "identity", "size2", "--p", "0.7", "--format", "json-lines")
    (rec,) = jsonl(out)
    assert code == 0
    assert rec["lhs"] == pytest.approx(2 * h(0.7), abs=1e-14)
    assert rec["lhs"] == pytest.approx(1.7626, abs=1e-4)
    assert rec["abs_diff"] < 1e-12


def test_identity_general(capsys):
    code, out, _ = run(capsys, "identity", "general", "--p", "0.7", "--n", "5", "--format", "json-lines")
    (rec,) = jsonl(out)
    assert code == 0
    assert rec["H_Z_given_Y"] + rec["H_X_given_YZ"] == pytest.approx(5 * h(0.7), abs=1e-10)


def test_identity_grid(capsys):
    code, out, _ = run(capsys, "identity", "size2", "--grid", "0.01:0.99:0.01", "--format", "json-lines")
    recs = jsonl(out)
    assert code == 0 and len(recs) == 99
    assert all(r["abs_diff"] < 1e-12 for r in recs)


@pytest.mark.parametrize("name", ["size3", "capacity", "refine"])
def test_identity_other_names(capsys, name):
    code, out, _ = run(capsys, "identity", name, "--p", "0.9", "--format", "json-lines")
    assert code == 0 and jsonl(out)[0]["abs_diff"] < 1e-10


def test_identity_addition(capsys):
    code, out, _ = run(capsys, "identity", "addition", "--p", "0.7", "--p2", "0.9", "--format", "json-lines")
    assert code == 0 and jsonl(out)[0]["abs_diff"] < 1e-12
    code, out, _ = run(capsys, "identity", "addition", "--ps", "0.7,0.8,0.9", "--format", "json-lines")
    assert code == 0 and jsonl(out)[0]["abs_diff"] < 1e-10
    code, _, err = run(capsys, "identity", "addition", "--p", "0.7")
    assert code == 2 and "--p2" in err


def test_identity_tolerance_failure_sets_exit_status(capsys):
    code, _, _ = run(capsys, "identity", "size3", "--p", "0.3", "--tolerance", "-1")
    assert code == 1


def test_identity_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["identity", "bogus", "--p", "0.5"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "identity", "size2", "--grid", "oops")
    assert code == 2 and "malformed grid" in err
    code, _, err = run(capsys, "identity", "size2", "--p", "1.0")
    assert code == 2 and "degenerate" in err


def test_channel(capsys):
    code, out, _ = run(capsys, "channel", "--p", "0.7", "--n", "3", "--brute-force", "--format", "json-lines")
    (rec,) = jsonl(out)
    assert code == 0
    assert rec["H_X_given_Y"]["analytic"] == pytest.approx(3 * h(0.7), abs=1e-14)
    assert rec["H_X_given_Y"]["abs_diff"] < 1e-10
    code, out, _ = run(capsys, "channel", "--p", "0.5", "--n", "4", "--format", "json-lines")
    assert jsonl(out)[0]["capacity"]["analytic"] == 0.0
    code, out, _ = run(capsys, "channel", "--p", "0.7", "--n", "100", "--format", "json-lines")
    rec = jsonl(out)[0]
    assert rec["analytic_only"] and rec["capacity"]["analytic"] == pytest.approx(11.87, abs=0.01)
    code, _, err = run(capsys, "channel", "--p", "0.7", "--n", "9", "--brute-force")
    assert code == 2 and "n <= 8" in err


def test_reconcile_worked_example(capsys):
    code, out, _ = run(capsys, "reconcile", "--n", "100", "--p", "0.7", "--schedule", "2",
                       "--seed", "1", "--format", "json-lines")
    rnd, summary = jsonl(out)
    assert code == 0
    assert rnd["record"] == "round" and rnd["t"] == 2 and rnd["n_in"] == 100
    assert rnd["expected_blocks_kept"] == pytest.approx(29.0, abs=1e-9)
    assert rnd["info_before_analytic"] == pytest.approx(11.87, abs=0.01)
    assert summary["record"] == "summary" and summary["final_length"] == rnd["n_out"]


def test_reconcile_empty(capsys):
    code, out, _ = run(capsys, "reconcile", "--n", "0", "--p", "0.7", "--schedule", "2", "--format", "json-lines")
    assert code == 0
    assert jsonl(out) == [{"record": "summary", "initial_length": 0, "rounds": 0,
                           "final_length": 0, "residual_disagreements": 0}]


def test_reconcile_adaptive_reproducible(capsys):
    argv = ["reconcile", "--n", "100000", "--p", "0.7", "--adaptive", "--seed", "7", "--format", "json-lines"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert jsonl(first)[-1]["residual_disagreements"] == 0


def test_reconcile_errors(capsys):
    code, _, err = run(capsys, "reconcile", "--n", "100", "--p", "0.7")
    assert code == 2
    code, _, err = run(capsys, "reconcile", "--n", "100", "--p", "0.7", "--schedule", "2,x")
    assert code == 2 and "malformed" in err
    code, _, err = run(capsys, "reconcile", "--n", "100", "--p", "0.7", "--schedule", "1")
    assert code == 2


def test_reconcile_hex_io(capsys, tmp_path):
    code, out, _ = run(capsys, "reconcile", "--hex-a", "ff00", "--hex-b", "ff01", "--schedule", "2",
                       "--emit-keys", "--format", "json-lines")
    summary = jsonl(out)[-1]
    assert code == 0
    assert summary["final_length"] == 7 and summary["key_a"] == summary["key_b"]


def test_reconcile_binary_files(capsys, tmp_path):
    rng = np.random.default_rng(0)
    a = rng.integers(0, 2, 4096, dtype=np.uint8)
    b = a ^ (rng.random(4096) > 0.9).astype(np.uint8)
    bitio.write_bits(tmp_path / "a.bin", a)
    bitio.write_bits(tmp_path / "b.bin", b)
    code, out, _ = run(capsys, "reconcile", "--in-a", str(tmp_path / "a.bin"), "--in-b",
                       str(tmp_path / "b.bin"), "--p", "0.9", "--adaptive", "--out-a",
                       str(tmp_path / "ka.bin"), "--out-b", str(tmp_path / "kb.bin"),
                       "--format", "json-lines")
    summary = jsonl(out)[-1]
    assert code == 0 and summary["initial_length"] == 4096
    ka = bitio.read_bits(tmp_path / "ka.bin", summary["final_length"])
    kb = bitio.read_bits(tmp_path / "kb.bin", summary["final_length"])
    assert int((ka != kb).sum()) == summary["residual_disagreements"]


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize", "--p", "0.7", "--tmax", "8", "--format", "json-lines")
    recs = jsonl(out)
    assert code == 0 and [r["t"] for r in recs] == list(range(2, 9))
    assert recs[0]["rate"] == pytest.approx(0.1096, abs=5e-4) and recs[0]["best"]
    code, out, _ = run(capsys, "optimize", "--p", "0.99", "--tmax", "16", "--format", "json-lines")
    assert code == 0 and sum(r["best"] for r in jsonl(out)) == 1
    code, _, err = run(capsys, "optimize", "--p", "0.4")
    assert code == 2 and "0.5" in err


@pytest.mark.parametrize("fmt", ["table", "csv"])
def test_other_formats(capsys, fmt):
    code, out, _ = run(capsys, "identity", "size3", "--grid", "0.1:0.3:0.1", "--format", fmt)
    assert code == 0
    lines = out.strip().splitlines()
    assert "abs_diff" in lines[0]
    assert len(lines) == (5 if fmt == "table" else 4)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "identity", "size2", "--p", "0.6", "--format", "json-lines", "--out", str(target))
    assert code == 0 and out == ""
    assert jsonl(target.read_text())[0]["p"] == 0.6


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "bscident.cli", "optimize", "--p", "0.4"],
                         capture_output=True, text=True)
    assert res.returncode == 2 and res.stderr
