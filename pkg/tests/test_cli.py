import io
import json
import subprocess
import sys

import pytest

from skeingram import cli
from skeingram.exact_algebra import RationalFunc


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_det_both_agree():
    code, text = run("det", "--n", "3", "--h", "1", "--method", "both", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["agree"]
    assert data["methods"]["closed"] == data["methods"]["eliminate"]
    assert data["factored"] == {"delta_h_power": 2, "ratio_powers": [[1, 1], [2, 1]]}


def test_det_text_and_point():
    code, text = run("det", "--n", "4", "--h", "0", "--method", "both", "--at", "3/2")
    assert code == 0
    assert "agree: yes" in text and "at A=3/2" in text


def test_det_mismatch_fails(monkeypatch):
    monkeypatch.setattr(cli, "det_closed", lambda n, h: RationalFunc(7))
    code, text = run("det", "--n", "3", "--h", "1", "--method", "both")
    assert code == 1 and "agree: NO" in text


def test_alpha_enumerate():
    assert run("alpha", "--n", "4", "--h", "0", "--k", "1", "--method", "enumerate") == (0, "3\n")


def test_alpha_all_methods():
    code, text = run("alpha", "--n", "9", "--h", "3", "--k", "2", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["agree"]
    assert set(data["values"]) == {"formula", "enumerate", "gf", "bijection"}


def test_paths_stream_and_json():
    code, text = run("paths", "--n", "4", "--h", "0", "--k", "1")
    assert code == 0
    assert text.splitlines() == ["UUDD  1-down: [3]", "UDUD  1-down: [1, 3]", "# 2 paths"]
    code, text = run("paths", "--n", "3", "--h", "1", "--format", "json")
    assert json.loads(text)["paths"] == [{"steps": "UUD"}, {"steps": "UDU"}]


def test_gram_and_out_file(tmp_path):
    target = tmp_path / "g.json"
    code, text = run("gram", "--n", "4", "--h", "2", "--basis", "S", "--out", str(target))
    assert code == 0 and text.startswith("S matrix")
    data = json.loads(target.read_text())
    assert data["meta"] == {"convention": "all_loops"}
    assert len(data["labels"]) == 3


def test_gram_point_restricted_to_b_and_d():
    code, _ = run("gram", "--n", "4", "--h", "2", "--basis", "T", "--at", "2")
    assert code == 2


def test_series_table():
    code, text = run("series", "--k", "1", "--order", "4")
    lines = text.splitlines()
    assert code == 0
    assert lines[-1].split() == ["4", "0", "1", "1"]


def test_bijection_check():
    code, text = run("bijection-check", "--max-n", "6", "--format", "json")
    data = json.loads(text)
    assert code == 0
    assert data["passing"] == ["leftmost"]
    assert data["results"]["rightmost"]["witness"]


def test_verify_small():
    code, text = run("verify", "--max-n", "5", "--no-numeric")
    assert code == 0 and text.rstrip().endswith("overall: PASS")


@pytest.mark.parametrize(
    "argv",
    [
        ["det", "--n", "3", "--h", "0"],
        ["det", "--n", "0", "--h", "0"],
        ["alpha", "--n", "4", "--h", "0", "--k", "0"],
        ["det", "--n", "3", "--h", "1", "--at", "x"],
        ["series", "--k", "0", "--order", "4"],
        ["nope"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2


def test_deterministic_output():
    argv = ("gram", "--n", "5", "--h", "1", "--basis", "D", "--format", "json")
    assert run(*argv) == run(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "skeingram", "alpha", "--n", "4", "--h", "2", "--k", "3", "--method", "formula"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "1\n"
