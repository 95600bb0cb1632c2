import subprocess
import sys

import pytest

from pgsearch.cli import main
from pgsearch.textio import read_pairs, read_sequences, write_pairs, write_sequences


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose(capsys):
    assert run(capsys, "decompose", 50)[1] == "0 10\n6 8\n"
    assert run(capsys, "decompose", 14)[1] == ""


def test_verify_pg90(capsys, pg90_path):
    code, out, _ = run(capsys, "verify", pg90_path)
    assert code == 0 and out.strip() == "2/2 valid"


def test_filter_one_orbit(capsys, tmp_path):
    f = tmp_path / "orbit.txt"
    write_pairs(f, [((1, 1, 1, -1), (1, 1, 1, -1)), ((1, 1, -1, 1), (-1, 1, 1, 1)),
                    ((-1, -1, -1, 1), (1, 1, 1, -1))])
    code, out, _ = run(capsys, "filter", f, "--out", tmp_path / "o.txt")
    assert code == 0 and out.strip() == "# classes=1 input=3"
    assert len(read_pairs(tmp_path / "o.txt")) == 1
    code, out, _ = run(capsys, "filter", f, "--partial", "shift")
    assert out.splitlines()[0] == "# classes=2 input=3"


def test_generate_report(capsys, tmp_path):
    code, out, err = run(capsys, "generate", "-d", 4, "--strategy", "orderly")
    assert code == 0 and len(out.splitlines()) == 6
    assert err.strip() == "# generated=6 strategy=orderly d=4 m=1"
    out_file = tmp_path / "g.txt"
    run(capsys, "generate", "-d", 10, "--rowsums", "2,4", "--strategy", "partition",
        "--out", out_file)
    assert len(read_sequences(out_file)) == 330
    assert (tmp_path / "g.txt.report").read_text() == "# generated=330 strategy=partition d=10 m=1\n"


def test_match_and_uncompress(capsys, tmp_path):
    a = tmp_path / "a.txt"
    write_sequences(a, [(1, 1)])
    b = tmp_path / "b.txt"
    write_sequences(b, [(1, -1), (1, 1)])
    code, out, _ = run(capsys, "match", "-v", 2, a, b)
    assert out.splitlines() == ["# matched=1 spurious_rejected=0", "1 1 | 1 -1"]
    w = tmp_path / "w.txt"
    write_sequences(w, [(0, 2)])
    code, out, _ = run(capsys, "uncompress", w, "-e", 2)
    assert out.splitlines()[1:] == ["-1 1 1 1", "1 1 -1 1"]


def test_analyze_command(capsys, tmp_path, census):
    f = tmp_path / "pg20.txt"
    write_pairs(f, census(20))
    code, out, _ = run(capsys, "analyze", f, "--zero-paf", 5)
    lines = out.splitlines()
    assert lines[1] == "20 (2,6) 21 13 0"
    assert lines[2].startswith("# zero_paf d=5 count=")


def test_search_command(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "-v", 10, "--workers", 1, "--out", tmp_path)
    assert code == 0 and "# classes=1 input=" in out
    assert (tmp_path / "pg10_classes.txt").exists()


def test_search_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"v = 8\nworkers = 1\nout = {tmp_path / 'o'}\nschedule = 4,2,1\n")
    code, out, _ = run(capsys, "search", "--config", cfg, "--schedule", "2,1")
    assert code == 0 and "schedule=2,1" in out and "# classes=2" in out


def test_malformed_input_exit_code(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("1 1 | 1 -1\n1  1 | 1 -1\n")
    code, _, err = run(capsys, "verify", f)
    assert code == 2
    assert f"{f}:2:" in err


def test_contract_violation_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "search", "-v", 20, "--schedule", "8,4,2,1", "--out", tmp_path)
    assert code == 1 and "does not divide" in err


def test_entry_point_module():
    r = subprocess.run([sys.executable, "-m", "pgsearch.cli", "decompose", "68"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "6 10\n"
