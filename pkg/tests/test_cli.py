import re
import subprocess
import sys

import pytest

TRI2_MTX = """%%MatrixMarket matrix coordinate pattern symmetric
6 6 6
2 1
3 1
3 2
5 4
6 4
6 5
"""


def run_cli(*args, **kwargs):
    return subprocess.run(
        [sys.executable, "-m", "labelprop", *args],
        capture_output=True,
        text=True,
        **kwargs,
    )


@pytest.fixture()
def tri2(tmp_path):
    path = tmp_path / "tri2.mtx"
    path.write_text(TRI2_MTX)
    return path


def parse_tsv(text):
    rows = [line.split("\t") for line in text.strip().splitlines()]
    return {int(v): int(c) for v, c in rows}


class TestDetect:
    def test_emits_partition_and_summary(self, tri2):
        proc = run_cli(
            "detect", "--algorithm", "rak", "--input", str(tri2),
            "--tolerance", "0.05", "--strict", "--seed", "1",
        )
        assert proc.returncode == 0
        assignment = parse_tsv(proc.stdout)
        assert sorted(assignment) == list(range(6))
        assert len(set(assignment.values())) == 2
        assert assignment[0] == assignment[1] == assignment[2]
        assert assignment[3] == assignment[4] == assignment[5]
        assert re.search(r"iterations=\d+ elapsed_ms=[\d.]+ modularity=", proc.stderr)

    def test_writes_output_file(self, tri2, tmp_path):
        out = tmp_path / "communities.tsv"
        proc = run_cli(
            "detect", "--algorithm", "slpa", "--input", str(tri2),
            "--memory-size", "8", "--seed", "2", "--output", str(out),
        )
        assert proc.returncode == 0
        assert len(parse_tsv(out.read_text())) == 6

    def test_missing_input_flag_exits_2(self):
        proc = run_cli("detect", "--algorithm", "rak")
        assert proc.returncode == 2
        assert "usage" in proc.stderr.lower()

    def test_unknown_algorithm_exits_2(self, tri2):
        proc = run_cli("detect", "--algorithm", "bogus", "--input", str(tri2))
        assert proc.returncode == 2

    def test_unreadable_file_exits_nonzero(self):
        proc = run_cli("detect", "--algorithm", "rak", "--input", "no_such_file.mtx")
        assert proc.returncode == 1
        assert "no_such_file" in proc.stderr


class TestScore:
    def test_all_one_community_scores_zero(self, tri2, tmp_path):
        tsv = tmp_path / "one.tsv"
        tsv.write_text("".join(f"{v}\t0\n" for v in range(6)))
        proc = run_cli("score", "--input", str(tri2), "--assignment", str(tsv))
        assert proc.returncode == 0
        assert proc.stdout.strip() == "0.000000"

    def test_triangle_partition_without_self_loops(self, tri2, tmp_path):
        tsv = tmp_path / "tri.tsv"
        tsv.write_text("".join(f"{v}\t{v // 3}\n" for v in range(6)))
        proc = run_cli(
            "score", "--input", str(tri2), "--assignment", str(tsv), "--no-self-loops"
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == "0.500000"

    def test_missing_vertex_named(self, tri2, tmp_path):
        tsv = tmp_path / "partial.tsv"
        tsv.write_text("0\t0\n1\t0\n2\t0\n")
        proc = run_cli("score", "--input", str(tri2), "--assignment", str(tsv))
        assert proc.returncode == 1
        assert "vertex 3" in proc.stderr

    def test_duplicate_vertex_named(self, tri2, tmp_path):
        tsv = tmp_path / "dup.tsv"
        tsv.write_text("0\t0\n0\t1\n")
        proc = run_cli("score", "--input", str(tri2), "--assignment", str(tsv))
        assert proc.returncode == 1
        assert "vertex 0" in proc.stderr

    def test_round_trip_reproduces_reported_modularity(self, tri2, tmp_path):
        out = tmp_path / "rt.tsv"
        detect = run_cli(
            "detect", "--algorithm", "rak", "--input", str(tri2),
            "--strict", "--seed", "1", "--output", str(out),
        )
        reported = float(re.search(r"modularity=([-\d.]+)", detect.stderr).group(1))
        score = run_cli("score", "--input", str(tri2), "--assignment", str(out))
        rescored = float(re.search(r"modularity=([-\d.]+)", score.stderr).group(1))
        assert abs(reported - rescored) <= 1e-9


class TestSweep:
    def test_row_count_matches_grid_product(self, tri2):
        proc = run_cli(
            "sweep", "--algorithm", "rak", "--input", str(tri2),
            "--workers-grid", "1", "--repetitions", "1",
        )
        lines = proc.stdout.strip().splitlines()
        assert lines[0].startswith("graph,algorithm,mode,")
        assert len(lines) - 1 == 5 * 2  # tolerances x modes

    def test_empty_graph_list_emits_header_only(self):
        proc = run_cli("sweep", "--algorithm", "rak")
        assert proc.returncode == 0
        assert proc.stdout.strip().splitlines() == [
            "graph,algorithm,mode,tolerance,max_labels,memory_size,workers,seed,iterations,elapsed_ms,modularity"
        ]

    def test_repetitions_use_consecutive_seeds(self, tri2):
        proc = run_cli(
            "sweep", "--algorithm", "rak", "--input", str(tri2),
            "--tolerances", "0.05", "--modes", "non-strict",
            "--repetitions", "3", "--seed", "7",
        )
        seeds = [int(line.split(",")[7]) for line in proc.stdout.strip().splitlines()[1:]]
        assert seeds == [7, 8, 9]

    def test_unloadable_graph_warns_and_continues(self, tri2, tmp_path):
        bad = tmp_path / "bad.mtx"
        bad.write_text("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n9 9\n")
        proc = run_cli(
            "sweep", "--algorithm", "rak", "--input", str(bad), str(tri2),
            "--tolerances", "0.05", "--modes", "strict",
        )
        assert proc.returncode == 0
        assert "skipping" in proc.stderr
        rows = proc.stdout.strip().splitlines()[1:]
        assert len(rows) == 1
        assert rows[0].startswith(str(tri2))

    def test_copra_grid_uses_max_labels(self, tri2):
        proc = run_cli(
            "sweep", "--algorithm", "copra", "--input", str(tri2),
            "--tolerances", "0.01", "--max-labels-grid", "1,8",
        )
        rows = proc.stdout.strip().splitlines()[1:]
        assert len(rows) == 2
        assert [r.split(",")[4] for r in rows] == ["1", "8"]

    def test_slpa_grid_uses_memory_sizes_and_modes(self, tri2):
        proc = run_cli(
            "sweep", "--algorithm", "slpa", "--input", str(tri2),
            "--memory-sizes", "4,8",
        )
        rows = proc.stdout.strip().splitlines()[1:]
        assert len(rows) == 4
        assert {r.split(",")[5] for r in rows} == {"4", "8"}


class TestInfo:
    def test_reports_counts_and_average_degree(self, tri2):
        proc = run_cli("info", str(tri2))
        assert proc.returncode == 0
        lines = proc.stdout.strip().splitlines()
        assert lines[0] == "graph\tvertices\tedges\tavg_degree"
        name, v, e, d = lines[1].split("\t")
        assert (v, e, d) == ("6", "12", "2.00")

    def test_bad_path_sets_status(self, tri2):
        proc = run_cli("info", "nope.mtx", str(tri2))
        assert proc.returncode == 1
        assert len(proc.stdout.strip().splitlines()) == 2  # header + tri2
