import json
import subprocess
import sys

import pytest

from colorclass.cli import main
from colorclass.lattice import build
from colorclass.strata import Coloring, random_coloring


def test_euler_density_example(capsys):
    assert main(["euler-density", "--d", "3", "--k", "2", "--probs", "0.5,0.5", "--colorset", "0"]) == 0
    assert "-0.125" in capsys.readouterr().out


def test_euler_density_csv_embeds_config(tmp_path):
    out = tmp_path / "d.csv"
    assert main(["euler-density", "--d", "2", "--k", "2", "--probs", "1/3,2/3", "--colorset", "0",
                 "--trials", "20", "--n", "5", "--seed", "3", "--out", str(out)]) == 0
    first, header = out.read_text().splitlines()[:2]
    assert first.startswith("# config: ") and json.loads(first[10:])["seed"] == 3
    assert header.startswith("d,k,colorset")


def test_sample_knots_records(tmp_path):
    out, summary = tmp_path / "k.jsonl", tmp_path / "s.csv"
    assert main(["sample-knots", "--n", "4", "--trials", "1000", "--out", str(out),
                 "--summary", str(summary)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1001
    assert json.loads(lines[0])["config"]["n"] == 4
    trials = [json.loads(x)["trial"] for x in lines[1:]]
    assert trials == list(range(1000))
    row = summary.read_text().splitlines()[2].split(",")
    assert row[:2] == ["4", "1000"]


def test_sample_knots_threads_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    base = ["sample-knots", "--n", "5", "--trials", "400", "--seed", "12"]
    assert main(base + ["--out", str(a)]) == 0
    assert main(base + ["--out", str(b), "--threads", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_percolation_sweep_csv(capsys):
    assert main(["percolation-sweep", "--d", "2", "--n", "4", "--probs", "0.9,0.1;0.1,0.9",
                 "--trials", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# config: ") and len(lines) == 4


def test_realize_link_writes_coloring_and_report(tmp_path, capsys):
    out = tmp_path / "trefoil.coloring"
    assert main(["realize-link", "--stock", "trefoil", "--out", str(out)]) == 0
    rep = json.loads((tmp_path / "trefoil.coloring.json").read_text())
    assert rep["matches"] and rep["realized"]["determinant"] == 3
    assert Coloring.load(out).complex.family == "sphere"


def test_genus_search_outputs(tmp_path):
    b = tmp_path / "b.coloring"
    random_coloring(build("sphere", 3, 3), (1 / 3, 1 / 3, 1 / 3), 4).save(b)
    out = tmp_path / "run"
    assert main(["genus-search", "--boundary", str(b), "--iters", "2000", "--restarts", "2",
                 "--check-every", "500", "--trace-every", "100", "--out", str(out)]) == 0
    cert = json.loads((out / "certificate.json").read_text())
    assert cert["valid"] and cert["genus"] == cert["search"]["best_genus"]
    assert all(r["checks_agree"] for r in cert["search"]["runs"])
    assert Coloring.load(out / "best.coloring").complex.family == "ball"
    trace = (out / "trace.csv").read_text().splitlines()
    assert trace[0].startswith("# config: ") and trace[1] == "iteration,T,objective,best"


def test_validate_command(tmp_path):
    out = tmp_path / "v.json"
    assert main(["validate", "--family", "torus", "--d", "3", "--n", "3", "--k", "3",
                 "--trials", "3", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["failures"] == [] and rep["checks"] > 0
    assert main(["validate", "--family", "ball", "--d", "3", "--n", "4", "--k", "3",
                 "--trials", "3", "--beach-ball"]) == 0


@pytest.mark.parametrize("argv", [
    ["sample-knots", "--n", "4"],
    ["sample-knots", "--n", "4", "--trials", "10", "--bogus"],
    ["realize-link"],
    ["realize-link", "--stock", "trefoil", "--diagram", "x.tiles"],
    ["euler-density", "--d", "3", "--k", "2", "--probs", "0.5,0.5", "--colorset", "0", "--seed", "-1"],
    ["validate", "--family", "torus", "--d", "3", "--n", "3", "--k", "3", "--beach-ball"],
    ["nonsense"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


@pytest.mark.parametrize("argv", [
    ["euler-density", "--d", "3", "--k", "2", "--probs", "0.5,0.7", "--colorset", "0"],
    ["realize-link", "--stock", "seven_four"],
    ["genus-search", "--boundary", "/nonexistent/b.coloring", "--out", "/tmp/x"],
    ["percolation-sweep", "--d", "2", "--n", "4", "--probs", "0.5,0.5", "--i", "7"],
])
def test_domain_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "error:" in capsys.readouterr().err


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "colorclass.cli", "--version"], capture_output=True,
                       text=True)
    assert r.returncode == 0 and r.stdout.strip()
