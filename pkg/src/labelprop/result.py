"""Shared result type for the three detectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DetectionResult:
    """Outcome of one detection run.

    ``elapsed`` covers the detection loop only (graph loading and scoring
    excluded); ``modularity`` is computed on the final assignment.
    """

    assignment: np.ndarray
    iterations: int
    elapsed: float
    modularity: float
