"""COPRA: multi-label propagation with belonging coefficients.

Each vertex carries up to ``max_labels`` (label, belonging) pairs whose
belongings sum to 1.  An update collects neighbors' labels scaled by arc
weight and by the neighbor's belonging, excluding the vertex's own labels
(its current set contributes nothing and its self-loop arc is skipped),
normalizes, keeps the labels whose normalized belonging reaches
``1 / max_labels``, renormalizes, and caches the best label.  If nothing
reaches the threshold a single random maximum-belonging label is kept with
belonging 1; a vertex with no contributing neighbors rejoins its own
community.  Updates are asynchronous; the run stops when the fraction of
vertices whose best label changed drops to the tolerance.

The disjoint projection is each vertex's best label (maximum belonging,
ties to the smallest label id).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._backend import PAD, effective_workers, get_thread_id, njit, prange, thread_pool
from .graph import Graph, check_symmetric
from .prng import XorShift32, draw_bounded, worker_states
from .quality import modularity
from .result import DetectionResult

CHUNK = 1024


@dataclass(frozen=True)
class CopraParams:
    tolerance: float = 0.01
    max_labels: int = 8
    max_iterations: int = 100
    workers: int = 1
    seed: int = 1

    def __post_init__(self):
        if not 0.0 < self.tolerance <= 1.0:
            raise ValueError("tolerance must be in (0, 1]")
        if self.max_labels < 1:
            raise ValueError("max_labels must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@njit(cache=True)
def _select_labels(touched, tally, count, max_labels, states, slot, out_labels, out_bel):
    # Keep labels whose normalized share reaches 1/max_labels (compared as
    # tally * max_labels >= total to avoid per-label division), renormalize
    # the kept ones, and store them sorted by label id.  Falls back to one
    # random maximum label with belonging 1 when nothing qualifies.
    total = 0.0
    for i in range(count):
        total += tally[touched[i]]
    k = 0
    kept = 0.0
    for i in range(count):
        lab = touched[i]
        w = tally[lab]
        if w * max_labels >= total and k < max_labels:
            out_labels[k] = lab
            out_bel[k] = w
            kept += w
            k += 1
    if k == 0:
        best_w = -1.0
        for i in range(count):
            w = tally[touched[i]]
            if w > best_w:
                best_w = w
        ties = 0
        for i in range(count):
            if tally[touched[i]] == best_w:
                ties += 1
        j = 0
        if ties > 1:
            j = draw_bounded(states, slot, ties)
        for i in range(count):
            lab = touched[i]
            if tally[lab] == best_w:
                if j == 0:
                    out_labels[0] = lab
                    out_bel[0] = 1.0
                    return 1
                j -= 1
        return 1  # unreachable
    inv = 1.0 / kept
    for i in range(k):
        out_bel[i] *= inv
    # insertion sort by label id (k <= max_labels, small)
    for i in range(1, k):
        lab = out_labels[i]
        b = out_bel[i]
        j = i - 1
        while j >= 0 and out_labels[j] > lab:
            out_labels[j + 1] = out_labels[j]
            out_bel[j + 1] = out_bel[j]
            j -= 1
        out_labels[j + 1] = lab
        out_bel[j + 1] = b
    return k


@njit(cache=True)
def _best_of_row(labels_row, bel_row, k):
    # rows are sorted by label id, so a strict comparison keeps the
    # smallest id among belonging ties
    best = labels_row[0]
    best_b = bel_row[0]
    for j in range(1, k):
        if bel_row[j] > best_b:
            best_b = bel_row[j]
            best = labels_row[j]
    return best


@njit(cache=True)
def _copra_seq(
    offsets, neighbors, weights, labs, bels, sizes, best, tolerance, max_labels,
    max_iterations, states, tally, touched, check, stats
):
    n = sizes.shape[0]
    iterations = 0
    while iterations < max_iterations:
        iterations += 1
        changed = 0
        for v in range(n):
            count = 0
            for e in range(offsets[v], offsets[v + 1]):
                u = neighbors[e]
                if u == v:
                    continue  # own labels never feed the accumulator
                w = weights[e]
                for j in range(sizes[u]):
                    lab = labs[u, j]
                    if tally[lab] == 0.0:
                        touched[count] = lab
                        count += 1
                    tally[lab] += bels[u, j] * w
            if count == 0:
                labs[v, 0] = v
                bels[v, 0] = 1.0
                sizes[v] = 1
                newbest = v
            else:
                k = _select_labels(
                    touched, tally, count, max_labels, states, 0, labs[v], bels[v]
                )
                sizes[v] = k
                for i in range(count):
                    tally[touched[i]] = 0.0
                newbest = _best_of_row(labs[v], bels[v], k)
            if check == 1:
                s = 0.0
                for j in range(sizes[v]):
                    s += bels[v, j]
                err = abs(s - 1.0)
                if err > stats[0]:
                    stats[0] = err
                if sizes[v] < stats[1]:
                    stats[1] = sizes[v]
                if sizes[v] > stats[2]:
                    stats[2] = sizes[v]
            if newbest != best[v]:
                best[v] = newbest
                changed += 1
        if changed <= tolerance * n:
            break
    return iterations


@njit(cache=True, parallel=True)
def _copra_par(
    offsets, neighbors, weights, labs, bels, sizes, cur, best, tolerance, max_labels,
    max_iterations, states, tallies, touches, chunk
):
    # labs/bels/sizes carry two buffers per vertex; cur[v] names the
    # published one.  A writer fills the spare buffer completely, then
    # flips cur[v], so concurrent readers always see a whole snapshot.
    n = cur.shape[0]
    n_chunks = (n + chunk - 1) // chunk
    iterations = 0
    while iterations < max_iterations:
        iterations += 1
        changed = 0
        for c in prange(n_chunks):
            tid = get_thread_id()
            tally = tallies[tid]
            touched = touches[tid]
            local = 0
            hi = (c + 1) * chunk
            if hi > n:
                hi = n
            for v in range(c * chunk, hi):
                count = 0
                for e in range(offsets[v], offsets[v + 1]):
                    u = neighbors[e]
                    if u == v:
                        continue
                    w = weights[e]
                    bu = cur[u]
                    for j in range(sizes[bu, u]):
                        lab = labs[bu, u, j]
                        if tally[lab] == 0.0:
                            touched[count] = lab
                            count += 1
                        tally[lab] += bels[bu, u, j] * w
                nb = 1 - cur[v]
                if count == 0:
                    labs[nb, v, 0] = v
                    bels[nb, v, 0] = 1.0
                    sizes[nb, v] = 1
                    newbest = v
                else:
                    k = _select_labels(
                        touched, tally, count, max_labels, states, tid,
                        labs[nb, v], bels[nb, v],
                    )
                    sizes[nb, v] = k
                    for i in range(count):
                        tally[touched[i]] = 0.0
                    newbest = _best_of_row(labs[nb, v], bels[nb, v], k)
                cur[v] = nb
                if newbest != best[v]:
                    best[v] = newbest
                    local += 1
            changed += local
        if changed <= tolerance * n:
            break
    return iterations


def _detect_full(graph: Graph, params: CopraParams, check_invariants: bool = False):
    """Run COPRA and return the full final state (used by tests)."""
    if __debug__:
        check_symmetric(graph)
    n = graph.vertex_count
    L = params.max_labels
    stats = np.array([0.0, np.inf, -np.inf])
    if n == 0:
        empty = np.zeros((0, L))
        return np.zeros(0, dtype=np.int64), 0, 0.0, stats, empty.astype(np.int64), empty, np.zeros(0, dtype=np.int64)
    best = np.arange(n, dtype=np.int64)
    check = 1 if check_invariants else 0
    start = time.perf_counter()
    if params.workers == 1:
        labs = np.zeros((n, L), dtype=np.int64)
        bels = np.zeros((n, L), dtype=np.float64)
        labs[:, 0] = np.arange(n)
        bels[:, 0] = 1.0
        sizes = np.ones(n, dtype=np.int64)
        states = worker_states(params.seed, 1)
        tally = np.zeros(n, dtype=np.float64)
        touched = np.empty(n, dtype=np.int64)
        iterations = _copra_seq(
            graph.offsets, graph.neighbors, graph.weights, labs, bels, sizes, best,
            params.tolerance, L, params.max_iterations, states, tally, touched,
            check, stats,
        )
    else:
        workers = effective_workers(params.workers)
        labs2 = np.zeros((2, n, L), dtype=np.int64)
        bels2 = np.zeros((2, n, L), dtype=np.float64)
        labs2[:, :, 0] = np.arange(n)
        bels2[:, :, 0] = 1.0
        sizes2 = np.ones((2, n), dtype=np.int64)
        cur = np.zeros(n, dtype=np.int64)
        states = worker_states(params.seed, workers)
        tallies = np.zeros((workers, n + PAD), dtype=np.float64)
        touches = np.empty((workers, n + PAD), dtype=np.int64)
        with thread_pool(workers):
            iterations = _copra_par(
                graph.offsets, graph.neighbors, graph.weights, labs2, bels2, sizes2,
                cur, best, params.tolerance, L, params.max_iterations, states,
                tallies, touches, CHUNK,
            )
        pick = cur[np.newaxis, :, np.newaxis]
        labs = np.take_along_axis(labs2, pick, axis=0)[0]
        bels = np.take_along_axis(bels2, pick, axis=0)[0]
        sizes = sizes2[cur, np.arange(n)]
    elapsed = time.perf_counter() - start
    return best, int(iterations), elapsed, stats, labs, bels, sizes


def copra_detect(graph: Graph, params: CopraParams | None = None) -> DetectionResult:
    """Run COPRA on a preprocessed graph; the assignment is each best label."""
    if params is None:
        params = CopraParams()
    best, iterations, elapsed, _, _, _, _ = _detect_full(graph, params)
    return DetectionResult(best, iterations, elapsed, modularity(graph, best))


def collect_and_threshold(labels, weights, max_labels: int, rng: XorShift32):
    """Apply the normalize/threshold/fallback/renormalize step to one tally.

    ``labels``/``weights`` give the accumulated (label, weight) pairs in
    scan order.  Returns (labels, belongings) sorted by label id, with
    belongings summing to 1.
    """
    labs = np.asarray(labels, dtype=np.int64)
    wts = np.asarray(weights, dtype=np.float64)
    if labs.size == 0:
        raise ValueError("empty tally: callers handle neighborless vertices")
    if max_labels < 1:
        raise ValueError("max_labels must be >= 1")
    dense = np.zeros(int(labs.max()) + 1, dtype=np.float64)
    touched = np.empty(labs.size, dtype=np.int64)
    count = 0
    for lab, w in zip(labs, wts):
        if dense[lab] == 0.0:
            touched[count] = lab
            count += 1
        dense[lab] += w
    out_l = np.zeros(max_labels, dtype=np.int64)
    out_b = np.zeros(max_labels, dtype=np.float64)
    k = _select_labels(touched, dense, count, max_labels, rng._state, 0, out_l, out_b)
    return out_l[:k].copy(), out_b[:k].copy()


def best_label(labels, belongings) -> int:
    """Maximum-belonging label; ties break to the smallest label id."""
    labs = np.asarray(labels, dtype=np.int64)
    bels = np.asarray(belongings, dtype=np.float64)
    if labs.size == 0:
        raise ValueError("empty label set")
    top = bels.max()
    return int(labs[bels == top].min())
