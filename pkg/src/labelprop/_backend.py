"""Kernel backend selection: numba JIT by default, interpreter on request.

Every hot loop in this package is written once, as a plain Python function
over numpy arrays, and decorated with :func:`njit` from this module.  By
default that is numba's ``@njit`` and the loops run compiled (the parallel
variants on numba's thread pool).  Setting ``LABELPROP_DISABLE_NUMBA=1``
in the environment before import turns the decorator into a no-op, so the
identical source runs through the interpreter instead -- same results,
drastically slower.  ``benchmarks/backend_bench.py`` compares the two.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

_TRUTHY = ("1", "true", "yes", "on")

JIT_ENABLED = os.environ.get("LABELPROP_DISABLE_NUMBA", "").lower() not in _TRUTHY

if JIT_ENABLED:
    try:
        import numba
        from numba import njit, prange
        from numba import get_num_threads, get_thread_id, set_num_threads

        MAX_THREADS = int(numba.config.NUMBA_NUM_THREADS)
    except ImportError:  # pragma: no cover - numba is a declared dependency
        JIT_ENABLED = False

if not JIT_ENABLED:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap

    prange = range
    MAX_THREADS = 1

    def get_thread_id():
        return 0

    def get_num_threads():
        return 1

    def set_num_threads(n):
        pass


# Per-worker scratch rows are padded by this many 8-byte slots so that two
# workers never write to the same cache line.
PAD = 8


def effective_workers(requested: int) -> int:
    """Clamp a requested worker count to what the thread pool can run."""
    return max(1, min(int(requested), MAX_THREADS))


@contextmanager
def thread_pool(workers: int):
    """Temporarily size the kernel thread pool to ``workers`` threads."""
    if not JIT_ENABLED:
        yield
        return
    previous = get_num_threads()
    set_num_threads(effective_workers(workers))
    try:
        yield
    finally:
        set_num_threads(previous)
