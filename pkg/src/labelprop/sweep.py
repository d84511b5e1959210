"""Parameter sweeps over the three detectors.

A sweep crosses, per graph, the grids that apply to the chosen algorithm:

* ``rak``:   tolerance x mode x workers x repetitions
* ``copra``: tolerance x max_labels x workers x repetitions
* ``slpa``:  memory_size x mode x workers x repetitions (tolerance fixed)

Repetition r runs with seed ``seed + r`` so non-strict runs differ.
Records stream out as runs finish; grid fields that do not apply to an
algorithm are left empty in the CSV.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .copra import CopraParams, copra_detect
from .graph import Graph
from .rak import RakParams, rak_detect
from .slpa import SlpaParams, slpa_detect

CSV_HEADER = "graph,algorithm,mode,tolerance,max_labels,memory_size,workers,seed,iterations,elapsed_ms,modularity"

DEFAULT_TOLERANCES = (0.1, 0.05, 0.01, 0.001, 0.0001)
DEFAULT_MAX_LABELS = (1, 2, 4, 8, 16, 32)
DEFAULT_MEMORY_SIZES = (4, 8, 16, 32)


@dataclass(frozen=True)
class SweepSpec:
    algorithm: str
    graphs: tuple = ()
    tolerances: tuple = DEFAULT_TOLERANCES
    max_labels: tuple = DEFAULT_MAX_LABELS
    memory_sizes: tuple = DEFAULT_MEMORY_SIZES
    modes: tuple = ("strict", "non-strict")
    workers: tuple = (1,)
    repetitions: int = 1
    seed: int = 1
    slpa_tolerance: float = 0.05

    def __post_init__(self):
        if self.algorithm not in ("rak", "copra", "slpa"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        for grid, name in (
            (self.tolerances, "tolerances"),
            (self.max_labels, "max_labels"),
            (self.memory_sizes, "memory_sizes"),
            (self.modes, "modes"),
            (self.workers, "workers"),
        ):
            if len(grid) == 0:
                raise ValueError(f"{name} grid must be non-empty")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")

    def combos_per_graph(self) -> int:
        reps = self.repetitions * len(self.workers)
        if self.algorithm == "rak":
            return len(self.tolerances) * len(self.modes) * reps
        if self.algorithm == "copra":
            return len(self.tolerances) * len(self.max_labels) * reps
        return len(self.memory_sizes) * len(self.modes) * reps


@dataclass(frozen=True)
class RunRecord:
    graph: str
    algorithm: str
    mode: str
    tolerance: Optional[float]
    max_labels: Optional[int]
    memory_size: Optional[int]
    workers: int
    seed: int
    iterations: int
    elapsed_ms: float
    modularity: float

    def csv_row(self) -> str:
        def cell(x):
            return "" if x is None else str(x)

        return ",".join(
            [
                self.graph,
                self.algorithm,
                cell(self.mode or None),
                cell(self.tolerance),
                cell(self.max_labels),
                cell(self.memory_size),
                str(self.workers),
                str(self.seed),
                str(self.iterations),
                f"{self.elapsed_ms:.3f}",
                f"{self.modularity:.9f}",
            ]
        )


def run_one(
    algorithm: str,
    graph: Graph,
    *,
    mode: str = "non-strict",
    tolerance: Optional[float] = None,
    max_labels: Optional[int] = None,
    memory_size: Optional[int] = None,
    workers: int = 1,
    seed: int = 1,
    max_iterations: int = 100,
):
    """Dispatch one detection run; returns a DetectionResult."""
    strict = mode == "strict"
    if algorithm == "rak":
        return rak_detect(graph, RakParams(
            tolerance=tolerance if tolerance is not None else 0.05,
            strict=strict, max_iterations=max_iterations, workers=workers, seed=seed,
        ))
    if algorithm == "copra":
        return copra_detect(graph, CopraParams(
            tolerance=tolerance if tolerance is not None else 0.01,
            max_labels=max_labels if max_labels is not None else 8,
            max_iterations=max_iterations, workers=workers, seed=seed,
        ))
    if algorithm == "slpa":
        return slpa_detect(graph, SlpaParams(
            memory_size=memory_size if memory_size is not None else 20,
            tolerance=tolerance if tolerance is not None else 0.05,
            strict=strict, workers=workers, seed=seed,
        ))
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _combos(spec: SweepSpec) -> Iterator[dict]:
    if spec.algorithm == "rak":
        for tol in spec.tolerances:
            for mode in spec.modes:
                yield {"mode": mode, "tolerance": tol, "max_labels": None, "memory_size": None}
    elif spec.algorithm == "copra":
        for tol in spec.tolerances:
            for ml in spec.max_labels:
                yield {"mode": "", "tolerance": tol, "max_labels": ml, "memory_size": None}
    else:
        for ms in spec.memory_sizes:
            for mode in spec.modes:
                yield {"mode": mode, "tolerance": spec.slpa_tolerance, "max_labels": None, "memory_size": ms}


def run_sweep(spec: SweepSpec, graphs: Sequence[tuple[str, Graph]]) -> Iterator[RunRecord]:
    """Yield one RunRecord per (graph x combo x workers x repetition)."""
    for name, graph in graphs:
        for combo in _combos(spec):
            for workers in spec.workers:
                for rep in range(spec.repetitions):
                    seed = spec.seed + rep
                    result = run_one(
                        spec.algorithm, graph,
                        mode=combo["mode"] or "non-strict",
                        tolerance=combo["tolerance"],
                        max_labels=combo["max_labels"],
                        memory_size=combo["memory_size"],
                        workers=workers, seed=seed,
                    )
                    yield RunRecord(
                        graph=name,
                        algorithm=spec.algorithm,
                        mode=combo["mode"],
                        tolerance=combo["tolerance"],
                        max_labels=combo["max_labels"],
                        memory_size=combo["memory_size"],
                        workers=workers,
                        seed=seed,
                        iterations=result.iterations,
                        elapsed_ms=result.elapsed * 1000.0,
                        modularity=result.modularity,
                    )
