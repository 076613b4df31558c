"""Penalty paths, edge counting and extended-BIC model selection."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .dtrace import DifferenceEstimate, DTraceProblem, SolverOptions
from .errors import DegeneratePathError, InputError
from .realspace import as_array

log = logging.getLogger(__name__)

EDGE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class TuningRecord:
    tau: float
    edge_count: int
    ebic: float
    converged: bool = True


def tau_max(S1, S2) -> float:
    """Twice the largest absolute entry of ``S1 - S2``."""
    return 2.0 * float(np.abs(as_array(S1) - as_array(S2)).max())


def penalty_path(S1, S2, k: int = 20) -> np.ndarray:
    """``k`` log-spaced penalties from ``tau_max`` down to ``0.001 * tau_max``."""
    if k < 2:
        raise InputError("path needs at least 2 points")
    top = tau_max(S1, S2)
    if top == 0.0:
        raise DegeneratePathError("S1 == S2: the penalty path is degenerate (tau_max = 0)")
    path = np.geomspace(top, 1e-3 * top, k)
    path[0], path[-1] = top, 1e-3 * top
    return path


def count_edges(D, threshold: float = EDGE_THRESHOLD) -> int:
    """Unique edges of an expanded difference.

    Counts entries above ``threshold`` in the upper triangles (diagonal
    included) of the ``[:p, :p]`` and ``[:p, p:]`` blocks. Those two regions
    hold every free parameter of a symmetric block-structured matrix exactly
    once.
    """
    D = D.delta_expanded if isinstance(D, DifferenceEstimate) else as_array(D)
    p = D.shape[0] // 2
    iu = np.triu_indices(p)
    big = np.abs(D) > threshold
    return int(big[:p, :p][iu].sum() + big[:p, p:][iu].sum())


def ebic(D, S1, S2, n1: int, n2: int, gamma: float = 0.5, p: Optional[int] = None,
         threshold: float = EDGE_THRESHOLD) -> float:
    """Extended BIC of an expanded estimate.

    ``min(n1, n2) * max|(S1 D S2 + S2 D S1)/2 - S2 + S1|
    + log(min(n1, n2)) |E| + 4 gamma |E| log(p)``

    The fit term is the max-norm of the D-trace gradient at ``D``, so it
    vanishes at the unpenalised minimiser. ``p`` is the channel count of the
    original complex problem and defaults to half the expanded dimension.
    """
    if n1 < 2 or n2 < 2:
        raise InputError("sample sizes must be >= 2")
    D = D.delta_expanded if isinstance(D, DifferenceEstimate) else as_array(D)
    S1, S2 = as_array(S1), as_array(S2)
    p = D.shape[0] // 2 if p is None else p
    n = min(n1, n2)
    fit = 0.5 * (S1 @ D @ S2 + S2 @ D @ S1) - S2 + S1
    edges = count_edges(D, threshold)
    return float(n * np.abs(fit).max() + np.log(n) * edges + 4.0 * gamma * edges * np.log(p))


def select_tau(records: Sequence[TuningRecord], include_nonconverged: bool = False) -> TuningRecord:
    """Record with the smallest eBIC; ties go to the larger penalty.

    Non-converged records are ignored unless ``include_nonconverged`` is set
    or no record converged, in which case all are considered and a warning
    is logged.
    """
    if not records:
        raise InputError("no tuning records to select from")
    pool = list(records)
    if not include_nonconverged:
        ok = [r for r in pool if r.converged]
        if ok:
            pool = ok
        else:
            log.warning("no path point converged; selecting among non-converged fits")
    return min(pool, key=lambda r: (r.ebic, -r.tau))


@dataclass
class PathResult:
    records: List[TuningRecord]
    estimates: List[DifferenceEstimate]
    selected: TuningRecord

    @property
    def best(self) -> DifferenceEstimate:
        return self.estimates[self.records.index(self.selected)]


def tune_sdd(S1, S2, n1: int, n2: int, k: int = 20, gamma: float = 0.5,
             opts: Optional[SolverOptions] = None, p: Optional[int] = None) -> PathResult:
    """Solve along the penalty path (warm-started) and pick the eBIC minimiser."""
    taus = penalty_path(S1, S2, k)
    prob = DTraceProblem(S1, S2)
    estimates, records = [], []
    for t in taus:
        est = prob.solve(float(t), opts, warm_start=True)
        estimates.append(est)
        records.append(TuningRecord(
            float(t), count_edges(est), ebic(est, S1, S2, n1, n2, gamma, p), bool(est.converged),
        ))
    return PathResult(records, estimates, select_tau(records))


def write_trace(records: Sequence[TuningRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("tau,edge_count,ebic,converged\n")
        for r in records:
            fh.write(f"{r.tau:.17g},{r.edge_count},{r.ebic:.17g},{int(r.converged)}\n")
