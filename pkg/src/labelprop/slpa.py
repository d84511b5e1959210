"""SLPA: speaker-listener propagation over fixed label memories.

Every vertex owns an append-only memory of ``memory_size`` slots, seeded
with its own id.  Each speaking iteration (at most ``memory_size - 1`` of
them) has every neighbor of a listener speak one uniformly random label
from its filled slots; the listener tallies the spoken labels by arc
weight and appends the winner (strict: first maximum in neighbor scan
order; non-strict: random among maxima).  Self-loops do not speak, and a
listener with no speaking neighbors appends its own current most popular
label.  The run stops early once enough vertices append the same label
they appended in the previous iteration.

The disjoint projection is the modal label of each memory, frequency ties
broken by the smallest label id.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._backend import PAD, effective_workers, get_thread_id, njit, prange, thread_pool
from .graph import Graph, check_symmetric
from .prng import draw_bounded, worker_states
from .quality import modularity
from .rak import _pick_from_tally
from .result import DetectionResult

CHUNK = 1024


@dataclass(frozen=True)
class SlpaParams:
    memory_size: int = 20
    tolerance: float = 0.05
    strict: bool = False
    workers: int = 1
    seed: int = 1

    def __post_init__(self):
        if self.memory_size < 2:
            raise ValueError("memory_size must be >= 2")
        if not 0.0 < self.tolerance <= 1.0:
            raise ValueError("tolerance must be in (0, 1]")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@njit(cache=True)
def _modal_label(slots_row, filled):
    # most frequent label; frequency ties go to the smallest id.
    # O(filled^2), fine for the small memories used here.
    best = -1
    best_count = 0
    for i in range(filled):
        lab = slots_row[i]
        c = 0
        for j in range(filled):
            if slots_row[j] == lab:
                c += 1
        if c > best_count or (c == best_count and lab < best):
            best = lab
            best_count = c
    return best


@njit(cache=True)
def _listen(offsets, neighbors, weights, slots, filled, v, strict, states, slot, tally, touched):
    count = 0
    for e in range(offsets[v], offsets[v + 1]):
        u = neighbors[e]
        if u == v:
            continue  # self-loops do not speak
        j = draw_bounded(states, slot, filled[u])
        lab = slots[u, j]
        if tally[lab] == 0.0:
            touched[count] = lab
            count += 1
        tally[lab] += weights[e]
    if count == 0:
        # no speakers: fall back to the listener's own most popular label
        return _modal_label(slots[v], filled[v])
    lab = _pick_from_tally(touched, tally, count, strict, states, slot)
    for i in range(count):
        tally[touched[i]] = 0.0
    return lab


@njit(cache=True)
def _slpa_seq(offsets, neighbors, weights, slots, filled, prev, strict, tolerance, states, tally, touched):
    n = filled.shape[0]
    memory_size = slots.shape[1]
    iterations = 0
    for t in range(1, memory_size):
        iterations += 1
        repeats = 0
        for v in range(n):
            lab = _listen(
                offsets, neighbors, weights, slots, filled, v, strict, states, 0,
                tally, touched,
            )
            slots[v, filled[v]] = lab
            filled[v] += 1  # publish only after the slot is written
            if lab == prev[v]:
                repeats += 1
            prev[v] = lab
        if t >= 2 and repeats >= (1.0 - tolerance) * n:
            break
    return iterations


@njit(cache=True, parallel=True)
def _slpa_par(offsets, neighbors, weights, slots, filled, prev, strict, tolerance, states, tallies, touches, chunk):
    n = filled.shape[0]
    memory_size = slots.shape[1]
    n_chunks = (n + chunk - 1) // chunk
    iterations = 0
    for t in range(1, memory_size):
        iterations += 1
        repeats = 0
        for c in prange(n_chunks):
            tid = get_thread_id()
            tally = tallies[tid]
            touched = touches[tid]
            local = 0
            hi = (c + 1) * chunk
            if hi > n:
                hi = n
            for v in range(c * chunk, hi):
                lab = _listen(
                    offsets, neighbors, weights, slots, filled, v, strict, states, tid,
                    tally, touched,
                )
                slots[v, filled[v]] = lab
                filled[v] += 1
                if lab == prev[v]:
                    local += 1
                prev[v] = lab
            repeats += local
        if t >= 2 and repeats >= (1.0 - tolerance) * n:
            break
    return iterations


@njit(cache=True)
def _project(slots, filled, labels):
    for v in range(labels.shape[0]):
        labels[v] = _modal_label(slots[v], filled[v])


def _detect_full(graph: Graph, params: SlpaParams):
    """Run SLPA and return (labels, iterations, elapsed, slots, filled)."""
    if __debug__:
        check_symmetric(graph)
    n = graph.vertex_count
    if n == 0:
        return np.zeros(0, dtype=np.int64), 0, 0.0, np.zeros((0, params.memory_size), dtype=np.int64), np.zeros(0, dtype=np.int64)
    slots = np.zeros((n, params.memory_size), dtype=np.int64)
    slots[:, 0] = np.arange(n)
    filled = np.ones(n, dtype=np.int64)
    prev = np.full(n, -1, dtype=np.int64)
    start = time.perf_counter()
    if params.workers == 1:
        states = worker_states(params.seed, 1)
        tally = np.zeros(n, dtype=np.float64)
        touched = np.empty(n, dtype=np.int64)
        iterations = _slpa_seq(
            graph.offsets, graph.neighbors, graph.weights, slots, filled, prev,
            params.strict, params.tolerance, states, tally, touched,
        )
    else:
        workers = effective_workers(params.workers)
        states = worker_states(params.seed, workers)
        tallies = np.zeros((workers, n + PAD), dtype=np.float64)
        touches = np.empty((workers, n + PAD), dtype=np.int64)
        with thread_pool(workers):
            iterations = _slpa_par(
                graph.offsets, graph.neighbors, graph.weights, slots, filled, prev,
                params.strict, params.tolerance, states, tallies, touches, CHUNK,
            )
    labels = np.empty(n, dtype=np.int64)
    _project(slots, filled, labels)
    elapsed = time.perf_counter() - start
    return labels, int(iterations), elapsed, slots, filled


def slpa_detect(graph: Graph, params: SlpaParams | None = None) -> DetectionResult:
    """Run SLPA on a preprocessed graph; the assignment is each modal label."""
    if params is None:
        params = SlpaParams()
    labels, iterations, elapsed, _, _ = _detect_full(graph, params)
    return DetectionResult(labels, iterations, elapsed, modularity(graph, labels))


def most_popular_label(memory) -> int:
    """Modal label of a memory; frequency ties break to the smallest id."""
    arr = np.asarray(memory, dtype=np.int64)
    if arr.size == 0:
        raise ValueError("empty memory")
    return int(_modal_label(arr, arr.size))
