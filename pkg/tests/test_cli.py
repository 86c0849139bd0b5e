import csv
import json

from symkat import spp
from symkat.cli import main


def test_gen_and_run(tmp_path, capsys):
    out = tmp_path / "line.nkpl"
    assert main(["gen", "topology", "--shape", "line", "--n", "4", "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["run", str(out), "--stats"]) == 0
    text = capsys.readouterr().out
    assert "4/4 checks passed" in text and "states built" in text


def test_run_failure_prints_witness(tmp_path, capsys):
    f = tmp_path / "x.nkpl"
    assert main(["gen", "slices", "--n", "2", "--crossing", "--out", str(f)]) == 0
    assert main(["run", str(f)]) == 1
    text = capsys.readouterr().out
    assert "counter-example packet" in text and "FAIL" in text


def test_run_json(tmp_path, capsys):
    f = tmp_path / "x.nkpl"
    f.write_text("check dup == bot\n")
    assert main(["run", str(f), "--json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["exit"] == 1 and data["statements"][0]["passed"] is False


def test_run_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.nkpl"
    f.write_text("check (dup == bot\n")
    assert main(["run", str(f)]) == 2
    assert "error" in capsys.readouterr().err


def test_field_order_and_star_cap(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(spp, "STAR_CAP", spp.STAR_CAP)
    f = tmp_path / "inc.nkpl"
    main(["gen", "combinatorial", "--kind", "inc", "--n", "3", "--out", str(f)])
    assert main(["run", str(f), "--fields", "x3,x2,x1"]) == 0
    assert main(["run", str(f), "--star-cap", "1"]) == 2


def test_gen_stdout(capsys):
    assert main(["gen", "combinatorial", "--kind", "flip", "--n", "2"]) == 0
    assert "check dom ; flip ; flip == dom" in capsys.readouterr().out


def test_fuzz(capsys):
    assert main(["fuzz", "--seed", "2", "--cases", "30", "--exp-cases", "30"]) == 0
    assert "no failures" in capsys.readouterr().out


def test_bench_csv(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--only", "flip,inc", "--n", "3", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert sorted(r["name"] for r in rows) == ["flip", "inc"]
    assert set(rows[0]) == {"name", "n", "wall_ms", "states", "spp_nodes", "exit"}
