import json

import pytest

from anticross.cli import OUTPUT_ENV, main
from anticross.graphs import read_edge_list


def test_generate_grk(tmp_path, capsys):
    out = tmp_path / "g.txt"
    assert main(["generate", "grk", "--r", "3", "--l", "3", "--k", "3", "-o", str(out)]) == 0
    g = read_edge_list(out)
    assert g.n_nodes == 18
    text = out.read_text()
    assert "# config:" in text and "# sha256:" in text


def test_generate_stdout_and_bad_cycle(capsys):
    assert main(["generate", "cycle", "--n", "6"]) == 0
    assert capsys.readouterr().out.startswith("# n=6\n")
    assert main(["generate", "cycle", "--n", "5"]) == 1
    assert "even" in capsys.readouterr().err


def test_generate_kab(capsys):
    assert main(["generate", "kab", "--a", "3", "--b", "3"]) == 0
    assert capsys.readouterr().out.count("\n") == 1 + 2 + 9


@pytest.mark.parametrize("spec,regime", [("cycle:6", "NO_AC"), ("grk:3,3,3", "AC"),
                                         ("kab:3,3", "NO_AC")])
def test_analyze(tmp_path, capsys, spec, regime):
    out = tmp_path / "r.json"
    assert main(["analyze", spec, "--out", str(out)]) == 0
    assert f"regime: {regime}" in capsys.readouterr().out
    rep = json.loads(out.read_text())
    assert rep["verdict"]["regime"] == regime
    assert rep["config"]["graph"] == spec
    assert len(rep["graph"]["sha256"]) == 64
    assert "valid" in rep["verdict"]["validity"]


def test_analyze_from_file_with_fixed_node(tmp_path, capsys):
    g = tmp_path / "g.txt"
    main(["generate", "grk", "--r", "3", "--l", "3", "--k", "3", "-o", str(g)])
    assert main(["analyze", str(g), "--fixed-node", "6", "--out-dir", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "g_analyze.json").read_text())
    assert rep["graph"]["fixed_node"] == 6
    assert rep["verdict"]["regime"] == "AC"


def test_gapscan_outputs(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    assert main(["gapscan", "edge", "--grid", "21"]) == 0
    side = json.loads((tmp_path / "edge_gapscan.json").read_text())
    assert side["s_min"] == pytest.approx(0.8, abs=1e-4)
    assert side["gap_min"] == pytest.approx(2 / 5 ** 0.5, abs=1e-9)
    lines = (tmp_path / "edge_gapscan.csv").read_text().splitlines()
    assert lines[0].startswith("# config:") and lines[1] == "s,e0,e1,gap"
    first = (tmp_path / "edge_gapscan.csv").read_bytes()
    assert main(["gapscan", "edge", "--grid", "21"]) == 0
    assert (tmp_path / "edge_gapscan.csv").read_bytes() == first


def test_gapscan_grid_one_fails(tmp_path, capsys):
    assert main(["gapscan", "edge", "--grid", "1", "--out-dir", str(tmp_path)]) == 1
    assert not list(tmp_path.iterdir())


def test_evolve_and_overlaps(tmp_path, capsys):
    assert main(["evolve", "edge", "--t-max", "1e-6", "50", "--out-dir", str(tmp_path)]) == 0
    lines = (tmp_path / "edge_evolve.csv").read_text().splitlines()
    assert lines[1] == "t_max,p_gs,norm_drift" and len(lines) == 4
    assert float(lines[3].split(",")[1]) >= 0.99
    assert main(["overlaps", "cycle:6", "--grid", "5", "--out-dir", str(tmp_path)]) == 0
    rows = (tmp_path / "cycle_6_overlaps.csv").read_text().splitlines()
    assert rows[1] == "s,g0,g1" and len(rows) == 7


def test_evolve_failure_writes_nothing(tmp_path, capsys):
    assert main(["evolve", "cycle:6", "--t-max", "1", "5", "--dt", "0.5",
                 "--out-dir", str(tmp_path)]) == 1
    assert not list(tmp_path.glob("*.csv"))


def test_sweep(tmp_path, capsys):
    assert main(["sweep", "--vary", "k", "--values", "1", "2", "3", "--r", "2", "--l", "2",
                 "--grid", "11", "--workers", "1", "--out-dir", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "sweep_grk_k.json").read_text())
    assert summary["fit"]["r_squared"] <= 1.0
    rows = (tmp_path / "sweep_grk_k.csv").read_text().splitlines()
    assert rows[1].startswith("r,l,k,n_nodes") and len(rows) == 5
    assert "[3/3]" in capsys.readouterr().err


def test_unknown_graph_spec(capsys):
    assert main(["analyze", "nosuchthing:3"]) == 1
