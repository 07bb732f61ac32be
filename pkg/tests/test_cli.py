import pytest
from fixtures import XOR_TEXT

from pfcircuit.cli import main


@pytest.fixture
def xor_file(tmp_path):
    p = tmp_path / "xor.pfc"
    p.write_text(XOR_TEXT)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_eval_and_brute(capsys, xor_file):
    assert run(capsys, "eval", xor_file) == (0, "2", "")
    assert run(capsys, "brute", xor_file) == (0, "2", "")


def test_eval_file_order_missing(capsys, xor_file):
    code, _, err = run(capsys, "eval", xor_file, "--order", "file")
    assert code == 2 and "pos" in err


def test_check(capsys, xor_file):
    code, out, _ = run(capsys, "check", xor_file)
    assert code == 0
    assert out.startswith("ok: 4 nodes, 3 edges, planar")
    assert "realized" in out


def test_fit(capsys, tmp_path):
    p = tmp_path / "nae.txt"
    p.write_text("gate; edges=[1, 2, 3]\nterm 100 1\nterm 010 1\nterm 001 1\nterm 110 1\nterm 101 1\nterm 011 1\n")
    code, out, _ = run(capsys, "fit", str(p))
    assert code == 1 and "MixedParity" in out
    code, out, _ = run(capsys, "fit", str(p), "--basis", "hadamard")
    assert code == 0 and out.startswith("gate, scalar 6")
    assert "entry 1 2 -1/3" in out


def test_paths(capsys, tmp_path):
    assert run(capsys, "paths", "--grid", "3x3") == (0, "20", "")
    assert run(capsys, "paths", "--grid", "2x1", "--policy", "general") == (0, "4", "")
    assert run(capsys, "paths", "--grid", "2x1", "--policy", "loops") == (0, "4", "")
    region = tmp_path / "region.txt"
    region.write_text("0 0\n1 0  # second box\n")
    assert run(capsys, "paths", "--region", str(region), "--start", "0,0", "--end", "2,1") == (0, "3", "")
    code, _, err = run(capsys, "paths")
    assert code == 2 and "error" in err


def test_tutte(capsys):
    assert run(capsys, "tutte", "--upper", "NNEE", "--lower", "EENN") == (0, "x^2 + y^2 + 2*x + 2*y", "")
    code, _, err = run(capsys, "tutte", "--upper", "EN", "--lower", "NE")
    assert code == 2 and "InvalidRegion" in err


def test_xmatch(capsys, tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("a r:2 s:3\n")
    assert run(capsys, "xmatch", str(p)) == (0, "-6", "")


def test_missing_file(capsys):
    code, _, err = run(capsys, "eval", "/nonexistent/file.pfc")
    assert code == 2 and "error" in err
