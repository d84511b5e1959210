import numpy as np
import pytest

import labelprop as lp
from labelprop.slpa import _detect_full
from conftest import partition_matches, requires_jit


class TestDetect:
    def test_isolated_vertices_fall_back_to_own_label(self):
        g = lp.gnp(6, 0.0)
        labels, iterations, _, slots, filled = _detect_full(
            g, lp.SlpaParams(memory_size=8, seed=3)
        )
        assert np.array_equal(labels, np.arange(6))
        # every append was the fallback: the owner's current modal label
        for v in range(6):
            assert set(slots[v, : filled[v]].tolist()) == {v}

    def test_memory_size_two_forces_single_iteration(self, two_triangles):
        labels, iterations, _, slots, filled = _detect_full(
            two_triangles, lp.SlpaParams(memory_size=2, seed=1)
        )
        assert iterations == 1
        assert set(filled.tolist()) == {2}

    def test_memory_law(self, two_triangles):
        for ms in (2, 5, 20):
            _, iterations, _, _, filled = _detect_full(
                two_triangles, lp.SlpaParams(memory_size=ms, tolerance=0.001, seed=1)
            )
            assert iterations <= ms - 1
            assert set((filled - 1).tolist()) == {iterations}

    def test_two_triangles_recovered(self, two_triangles):
        result = lp.slpa_detect(two_triangles, lp.SlpaParams(memory_size=20, strict=True, seed=2))
        assert partition_matches(result.assignment, 2, 3)

    def test_appended_labels_were_spoken_or_own(self, two_triangles):
        g = two_triangles
        labels, iterations, _, slots, filled = _detect_full(
            g, lp.SlpaParams(memory_size=10, tolerance=0.001, seed=4)
        )
        neighbors = [
            set(g.neighbors[g.offsets[v]:g.offsets[v + 1]].tolist()) - {v}
            for v in range(g.vertex_count)
        ]
        for v in range(g.vertex_count):
            for t in range(1, filled[v]):
                spoken_pool = set()
                for u in neighbors[v]:
                    spoken_pool.update(slots[u, : t + 1].tolist())
                own_pool = set(slots[v, :t].tolist())
                assert slots[v, t] in spoken_pool | own_pool

    def test_strict_sequential_is_deterministic(self):
        g = lp.gnp(400, 0.02, seed=4)
        a = lp.slpa_detect(g, lp.SlpaParams(memory_size=12, strict=True, seed=7)).assignment
        b = lp.slpa_detect(g, lp.SlpaParams(memory_size=12, strict=True, seed=7)).assignment
        assert a.tobytes() == b.tobytes()

    def test_labels_stay_in_range(self):
        g = lp.gnp(300, 0.03, seed=6)
        result = lp.slpa_detect(g, lp.SlpaParams(memory_size=8, seed=1))
        assert result.assignment.min() >= 0
        assert result.assignment.max() < 300

    def test_parallel_quality_close_to_sequential(self):
        g = lp.gnp(2000, 0.01, seed=3)
        seq = lp.slpa_detect(g, lp.SlpaParams(memory_size=10, seed=1))
        for workers in (2, 4):
            par = lp.slpa_detect(g, lp.SlpaParams(memory_size=10, seed=1, workers=workers))
            assert abs(par.modularity - seq.modularity) <= 0.05

    @requires_jit
    def test_runtime_grows_with_memory_size(self, warm_kernels):
        g = lp.gnp(2000, 2 * 10_500 / (2000 * 1999), seed=5)
        assert (g.edge_count - 2000) // 2 >= 10_000
        params = dict(tolerance=1e-9, strict=True, seed=1)
        lp.slpa_detect(g, lp.SlpaParams(memory_size=5, **params))  # warm this shape
        fast = lp.slpa_detect(g, lp.SlpaParams(memory_size=5, **params)).elapsed
        slow = lp.slpa_detect(g, lp.SlpaParams(memory_size=40, **params)).elapsed
        assert slow > fast

    def test_asymmetric_graph_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            lp.slpa_detect(lp.from_arcs(2, [0], [1], [1.0]))


class TestMostPopularLabel:
    def test_majority(self):
        assert lp.most_popular_label([5, 5, 3]) == 5

    def test_tie_takes_smallest_id(self):
        assert lp.most_popular_label([5, 3]) == 3

    def test_single_entry(self):
        assert lp.most_popular_label([7]) == 7

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            lp.most_popular_label([])


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            lp.SlpaParams(memory_size=1)
        with pytest.raises(ValueError):
            lp.SlpaParams(tolerance=0.0)
        with pytest.raises(ValueError):
            lp.SlpaParams(workers=0)
