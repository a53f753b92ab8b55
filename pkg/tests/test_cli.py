import json
import subprocess
import sys

import pytest

from tourney.census import census
from tourney.cli import run
from tourney.constructions import random_tournament
from tourney.core import read_tour


def _json(argv):
    code, out = run(argv + ["--no-metadata"])
    assert code == 0
    return json.loads(out)


def test_construct_then_count(tmp_path):
    path = tmp_path / "r.tour"
    doc = _json(["construct", "random", "--n", "30", "--seed", "4", "-o", str(path)])
    assert doc["result"]["output"] == str(path)
    assert read_tour(path) == [random_tournament(30, 4)]
    res = _json(["count", "--input", str(path), "--pattern", "c3plus"])["result"]["results"][0]
    assert res["counts"]["c3plus"] == census(random_tournament(30, 4)).c3plus == res["pattern"]["count"]


def test_count_bruteforce_agrees(tmp_path):
    path = tmp_path / "c.tour"
    _json(["construct", "carousel-class", "--n", "8", "-o", str(path)])
    fast = _json(["count", "--input", str(path)])["result"]["results"]
    slow = _json(["count", "--input", str(path), "--bruteforce"])["result"]["results"]
    assert fast == slow and len(fast) == 2


def test_iterated_sidecar(tmp_path):
    path = tmp_path / "b.tour"
    doc = _json(["construct", "iterated", "--n", "200", "--seed", "1", "-o", str(path)])["result"]
    side = json.loads((tmp_path / "b.tour.levels.json").read_text())
    assert side["level_sizes"] == doc["level_sizes"]
    assert len(side["levels"]) == 200


def test_output_is_deterministic_without_metadata():
    argv = ["maximize", "--pattern", "C4", "--n", "9", "--local", "--restarts", "3", "--seed", "2", "--no-metadata"]
    assert run(argv) == run(argv)


def test_metadata_block():
    code, out = run(["optimize-alpha"])
    doc = json.loads(out)
    assert code == 0
    assert set(doc["metadata"]) == {"timestamp", "elapsed_s", "threads"}
    assert abs(doc["result"]["alpha_error"]) < 1e-7


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("TOURNEY_THREADS", "3")
    doc = json.loads(run(["enumerate", "--n", "4"])[1])
    assert doc["metadata"]["threads"] == 3
    assert doc["result"]["classes"] == 4


def test_maximize_range_csv():
    code, out = run(["maximize", "--pattern", "C4", "--n", "4..6", "--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,best_count,density,approx"
    assert [l.split(",")[:2] for l in lines[1:]] == [["4", "1"], ["5", "5"], ["6", "12"]]


def test_maximize_emits_witnesses(tmp_path):
    _json(["maximize", "--pattern", "C4", "--n", "6", "--emit-witnesses", str(tmp_path)])
    assert len(read_tour(tmp_path / "c4_n6.tour")) == 2


def test_diagnose_csv(tmp_path):
    path = tmp_path / "r.tour"
    _json(["construct", "random", "--n", "50", "-o", str(path)])
    code, out = run(["diagnose", "--input", str(path), "--format", "csv"])
    assert code == 0 and out.startswith("bin,bin_low,count\n")


def test_malformed_file_exit_1(tmp_path, capsys):
    path = tmp_path / "bad.tour"
    path.write_text("# tour/1\nt 3 10\n")
    assert run(["count", "--input", str(path)]) == (1, "")
    assert "line 2:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--input", "/nonexistent.tour"],
        ["maximize", "--pattern", "C9", "--n", "5"],
        ["maximize", "--pattern", "C4", "--n", "12"],
        ["construct", "carousel", "--n", "2"],
        ["construct", "iterated", "--n", "10", "--alpha", "1.5"],
    ],
)
def test_domain_errors_exit_1(argv, capsys):
    assert run(argv)[0] == 1
    assert "error:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [[], ["frobnicate"], ["construct", "random"], ["maximize", "--pattern", "C4", "--n", "x..y"], ["construct", "random", "--n", "5", "--alpha", "big"]],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "tourney.cli", "construct", "transitive", "--n", "4", "--no-metadata"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["result"]["tournaments"] == ["111111"]
    bad = subprocess.run([sys.executable, "-m", "tourney.cli", "count"], capture_output=True, text=True)
    assert bad.returncode == 2
