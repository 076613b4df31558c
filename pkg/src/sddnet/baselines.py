"""Reference estimators: plain inverse difference and its hard-thresholded version.

The inverse difference here inverts the smoothed periodograms directly. It is
not regularised, so it fails when a spectral estimate is singular (for
example when ``2M + 1 < p``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .dtrace import DifferenceEstimate
from .errors import DegeneratePathError, InputError, SingularityError
from .realspace import STRUCTURE_TOL, as_array, block_deviation, project_block_structure
from .tuning import PathResult, TuningRecord, count_edges, ebic, select_tau

MIN_EIGENVALUE = 1e-10


@dataclass(frozen=True)
class ThresholdPath:
    thresholds: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.thresholds, dtype=float)
        if t.ndim != 1 or t.size == 0 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise InputError("thresholds must be positive and strictly increasing")
        object.__setattr__(self, "thresholds", t)

    def __iter__(self):
        return iter(self.thresholds)

    def __len__(self):
        return self.thresholds.size


def _structured(S: np.ndarray) -> bool:
    return S.shape[0] % 2 == 0 and block_deviation(S) <= STRUCTURE_TOL * max(1.0, np.abs(S).max())


def _inverse(S: np.ndarray, name: str) -> np.ndarray:
    S = 0.5 * (S + S.T)
    e, V = np.linalg.eigh(S)
    if e[0] <= MIN_EIGENVALUE:
        raise SingularityError(f"{name} is singular (min eigenvalue {e[0]:.3g})")
    return (V / e) @ V.T


def naive_difference(S1, S2) -> DifferenceEstimate:
    """``inv(S1) - inv(S2)``, with no pseudo-inverse fallback."""
    S1, S2 = as_array(S1), as_array(S2)
    if S1.shape != S2.shape:
        raise InputError(f"incompatible shapes {S1.shape} and {S2.shape}")
    D = _inverse(S1, "S1") - _inverse(S2, "S2")
    structured = _structured(S1) and _structured(S2)
    if structured:
        D = project_block_structure(D).matrix
    D = 0.5 * (D + D.T)
    return DifferenceEstimate.from_expanded(D, structured)


def _with_matrix(D: DifferenceEstimate, M: np.ndarray) -> DifferenceEstimate:
    return DifferenceEstimate.from_expanded(M, D.delta_complex is not None, tau=D.tau)


def hard_threshold(D: DifferenceEstimate, t: float) -> DifferenceEstimate:
    """Zero every entry with ``|value| <= t``."""
    if t < 0:
        raise InputError("threshold must be non-negative")
    M = D.delta_expanded.copy()
    M[np.abs(M) <= t] = 0.0
    return _with_matrix(D, M)


def threshold_path(D: DifferenceEstimate, k: int = 20) -> ThresholdPath:
    """``k`` log-spaced thresholds between the smallest and largest nonzero ``|entry|``."""
    if k < 2:
        raise InputError("path needs at least 2 points")
    mags = np.abs(D.delta_expanded)
    mags = mags[mags > 0]
    if mags.size == 0:
        raise DegeneratePathError("all-zero estimate: no threshold path")
    lo, hi = mags.min(), mags.max()
    if lo == hi:
        raise DegeneratePathError("all nonzero entries have equal magnitude")
    t = np.geomspace(lo, hi, k)
    t[0], t[-1] = lo, hi
    return ThresholdPath(t)


def tune_hard_threshold(S1, S2, n1: int, n2: int, k: int = 20, gamma: float = 0.5,
                        p: Optional[int] = None) -> PathResult:
    """Threshold the inverse difference along :func:`threshold_path`, pick by eBIC.

    Records store the threshold in the ``tau`` field.
    """
    base = naive_difference(S1, S2)
    records: List[TuningRecord] = []
    estimates: List[DifferenceEstimate] = []
    for t in threshold_path(base, k):
        est = hard_threshold(base, float(t))
        estimates.append(est)
        records.append(TuningRecord(float(t), count_edges(est), ebic(est, S1, S2, n1, n2, gamma, p)))
    return PathResult(records, estimates, select_tau(records))
