"""Tests for the command-line interface: reports, files and exit codes."""

import csv
import json
from pathlib import Path

from pencilranks.cli import main
from pencilranks.io import parse_document

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_jordan_report(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "j3_1.pencil"))
    assert code == 0
    assert "minimal ranks: (3, 2)" in out
    assert "family: R3,2 (a = 1)" in out
    assert "tensor rank: 4" in out
    assert "multilinear rank: (3, 3, 2)" in out
    assert "attaining transform:" in out


def test_analyze_out_of_catalog(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "wide5.pencil"))
    assert code == 0
    assert "out of catalog" in out
    assert "minimal ranks: (4, 4)" in out


def test_analyze_float_defaults_tolerance_and_warns(capsys, tmp_path):
    text = DATA.joinpath("float_noise.pencil").read_text()
    stripped = "\n".join(line for line in text.splitlines()
                         if not line.startswith("tolerance"))
    path = tmp_path / "noisy.pencil"
    path.write_text(stripped + "\n")
    code, out, err = run(capsys, "analyze", str(path))
    assert code == 0
    assert "defaulting to 1e-08" in err
    assert "minimal ranks: (2, 1)" in out


def test_analyze_complex_field(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "q2.pencil"),
                       "--field", "complex")
    assert code == 0
    assert "minimal ranks: (1, 1)" in out


def test_analyze_polynomial(capsys):
    code, out, _ = run(capsys, "analyze", str(DATA / "cubic.pencil"))
    assert code == 0
    assert "minimal ranks: (1, 1, 1)" in out


def test_canonical_writes_document(capsys, tmp_path):
    out_file = tmp_path / "q.pencil"
    code, _, _ = run(capsys, "canonical", "R2,2", "--params", "a=0,b=1",
                     "-o", str(out_file))
    assert code == 0
    doc = parse_document(out_file.read_text())
    from pencilranks import blocks

    assert doc.to_pencil() == blocks.q_pencil(1, 0, 1)


def test_canonical_to_stdout(capsys):
    code, out, _ = run(capsys, "canonical", "S1,1")
    assert code == 0
    assert out.startswith("pencil 1 2")


def test_exit_codes():
    assert main(["analyze"]) == 1                       # usage
    assert main(["canonical", "NOPE"]) == 2             # unknown family
    assert main(["canonical", "R2,2", "--params", "a=0,b=0"]) == 2
    assert main(["analyze", "/does/not/exist.pencil"]) == 2
    assert main(["approx", str(DATA / "q2.pencil"), "--ranks", "9,9"]) == 2


def test_exit_code_parse_error(tmp_path):
    bad = tmp_path / "bad.pencil"
    bad.write_text("pencil 2 2\nA\n1 oops\n")
    assert main(["analyze", str(bad)]) == 2


def test_approx_writes_csv_and_summary(capsys, tmp_path):
    csv_path, sum_path = tmp_path / "log.csv", tmp_path / "summary.json"
    code, out, _ = run(capsys, "approx", str(DATA / "q2.pencil"),
                       "--ranks", "2,2", "--iters", "50",
                       "--csv", str(csv_path), "--summary", str(sum_path))
    assert code == 0
    summary = json.loads(sum_path.read_text())
    assert summary["ranks"] == [2, 2]
    assert summary["best_objective"] <= 1e-8  # exact membership at (2, 2)
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:3] == ["trial", "iter", "objective"]
    assert len(rows) == 51


def test_sequence_zp(capsys, tmp_path):
    code, out, _ = run(capsys, "sequence", "zp", "--k", "1", "--a", "0",
                       "--p", "1,10,100", "--output-dir", str(tmp_path))
    assert code == 0
    with open(tmp_path / "zp_distances.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert [r[1] for r in rows[1:]] == ["1/1", "1/10", "1/100"]
    member = parse_document((tmp_path / "zp_k1_p10.pencil").read_text())
    assert (member.m, member.n) == (2, 2)


def test_sequence_pn_tight_flags_condition(capsys, tmp_path):
    code, out, _ = run(capsys, "sequence", "pn", "--tight", "--n", "1,10",
                       "--output-dir", str(tmp_path))
    assert code == 0
    assert "existence condition holds: False" in out
    assert (tmp_path / "pn_n10.pencil").exists()
    assert (tmp_path / "pn_limit.pencil").exists()


def test_sequence_usage_errors(tmp_path):
    assert main(["sequence", "zp", "--output-dir", str(tmp_path)]) == 1
    assert main(["sequence", "pn", "--output-dir", str(tmp_path)]) == 1
    assert main(["sequence", "zp", "--k", "1", "--p", "0",
                 "--output-dir", str(tmp_path)]) == 2
