import json
import subprocess
import sys

import pytest

from motifest import cli

TOP_KEYS = {"mode", "count", "estimate", "W", "valid_rate", "invalid",
            "tree", "timings", "seed"}


@pytest.fixture()
def fixture_files(tmp_path):
    graph = tmp_path / "graph.txt"
    graph.write_bytes(b"1 2 10\n2 3 15\n2 3 20\n3 1 25\n")
    motif = tmp_path / "motif.txt"
    motif.write_bytes(b"0 1\n1 2\n2 0\n")
    return str(graph), str(motif)


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_exact_fixture(fixture_files, capsys):
    graph, motif = fixture_files
    code, report = run_cli(["exact", "--graph", graph, "--motif", motif,
                            "--delta", "20"], capsys)
    assert code == 0
    assert report["mode"] == "exact"
    assert report["count"] == 2
    assert TOP_KEYS <= set(report)


def test_estimate_schema(fixture_files, capsys):
    graph, motif = fixture_files
    code, report = run_cli(["estimate", "--graph", graph, "--motif", motif,
                            "--delta", "20", "--samples", "2000",
                            "--seed", "11"], capsys)
    assert code == 0
    assert TOP_KEYS <= set(report)
    assert set(report["invalid"]) == {"vertex_map", "delta_interval",
                                      "edge_order"}
    assert set(report["timings"]) == {"preprocess", "sample"}
    total = report["valid_rate"] + sum(report["invalid"].values())
    assert abs(total - 1.0) < 1e-9
    assert abs(report["estimate"] - 2.0) < 0.5
    assert report["seed"] == 11


def test_trees_lists_six_rooted_trees(fixture_files, capsys):
    _, motif = fixture_files
    code, report = run_cli(["trees", "--motif", motif], capsys)
    assert code == 0
    assert len(report["trees"]) == 6
    assert {t["looseness"] for t in report["trees"]} == {0, 1}
    assert TOP_KEYS <= set(report)


def test_trees_with_graph_reports_weights(fixture_files, capsys):
    graph, motif = fixture_files
    code, report = run_cli(["trees", "--motif", motif, "--graph", graph,
                            "--delta", "20"], capsys)
    assert code == 0
    assert all("W" in t for t in report["trees"])
    assert min(t["W"] for t in report["trees"]) >= 0


def test_tree_override_index(fixture_files, capsys):
    graph, motif = fixture_files
    code, report = run_cli(["estimate", "--graph", graph, "--motif", motif,
                            "--delta", "20", "--samples", "500",
                            "--tree", "4"], capsys)
    assert code == 0
    assert report["tree"] == {"edges": [1, 2], "center": 1, "looseness": 0}


def test_dump_weights_flag(fixture_files, capsys):
    graph, motif = fixture_files
    code, report = run_cli(["estimate", "--graph", graph, "--motif", motif,
                            "--delta", "20", "--samples", "100",
                            "--dump-weights"], capsys)
    assert code == 0
    assert isinstance(report["window_weights"], list)
    assert sum(report["window_weights"]) == report["W"]


def test_usage_errors_exit_one(fixture_files, capsys):
    graph, motif = fixture_files
    for argv in (
        ["estimate", "--graph", graph, "--motif", motif, "--delta", "20",
         "--samples", "0"],
        ["estimate", "--graph", graph, "--motif", motif, "--delta", "-5",
         "--samples", "10"],
        ["estimate", "--graph", graph, "--motif", motif, "--delta", "20",
         "--samples", "10", "--tree", "99"],
        ["trees", "--motif", motif, "--graph", graph],
        ["bogus-subcommand"],
    ):
        assert cli.main(argv) == 1, argv
        capsys.readouterr()


def test_input_errors_exit_two(fixture_files, tmp_path, capsys):
    graph, motif = fixture_files
    bad_motif = tmp_path / "bad.txt"
    bad_motif.write_bytes(b"0 1\n2 3\n")
    for argv in (
        ["exact", "--graph", "/does/not/exist", "--motif", motif,
         "--delta", "5"],
        ["exact", "--graph", graph, "--motif", str(bad_motif), "--delta", "5"],
    ):
        assert cli.main(argv) == 2, argv
        capsys.readouterr()


def test_seed_fixed_reports_identical(fixture_files, capsys, monkeypatch):
    # wall-clock timings are the one nondeterministic report field; pin the
    # clock and the whole document must be byte-identical run to run
    graph, motif = fixture_files
    tick = [0.0]

    def fake_clock():
        tick[0] += 0.001
        return tick[0]

    monkeypatch.setattr("time.perf_counter", fake_clock)
    argv = ["estimate", "--graph", graph, "--motif", motif, "--delta", "20",
            "--samples", "3000", "--seed", "21", "--threads", "2"]
    assert cli.main(argv) == 0
    first = capsys.readouterr().out
    tick[0] = 0.0
    assert cli.main(argv) == 0
    second = capsys.readouterr().out
    assert first == second


def test_subprocess_entry_point(fixture_files):
    graph, motif = fixture_files
    proc = subprocess.run(
        [sys.executable, "-m", "motifest.cli", "exact", "--graph", graph,
         "--motif", motif, "--delta", "20"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 2
