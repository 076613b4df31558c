"""Support recovery and estimation error against a known difference.

Edges here are entries of the full expanded ``2p x 2p`` matrices whose
magnitude exceeds ``edge_tol``; accuracy therefore has denominator ``4p^2``.
This differs on purpose from :func:`sddnet.tuning.count_edges`, which counts
unique parameters for the information criterion.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .dtrace import DifferenceEstimate
from .errors import InputError, NumericalError
from .realspace import as_array

EDGE_TOL = 1e-6
METRICS = ("precision", "recall", "accuracy", "rrmse")


class UndefinedMetricError(NumericalError):
    pass


@dataclass
class MetricsReport:
    """Metrics for one frequency, or their mean over frequencies.

    ``None`` marks an undefined value: precision with no estimated edges,
    recall with no true edges, RRMSE with an all-zero truth. For aggregated
    reports the scalar fields hold means, ``se`` holds standard errors and
    ``skipped`` counts frequencies left out of each mean.
    """

    precision: Optional[float]
    recall: Optional[float]
    accuracy: float
    rrmse: Optional[float]
    n_true_edges: float
    n_est_edges: float
    tp: float = 0
    fp: float = 0
    tn: float = 0
    fn: float = 0
    freq_index: Optional[int] = None
    se: Dict[str, float] = field(default_factory=dict)
    skipped: Dict[str, int] = field(default_factory=dict)
    per_frequency: List["MetricsReport"] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["per_frequency"] = [r.to_dict() for r in self.per_frequency]
        return d

    def formatted(self, key: str, digits: int = 2, undefined_as_zero: bool = True) -> str:
        """``"mean (se)"`` for one field."""
        v = getattr(self, key)
        if v is None:
            if not undefined_as_zero:
                return "-"
            v = 0.0
        s = self.se.get(key, 0.0)
        return f"{v:.{digits}f} ({s:.{digits}f})"


def _matrix(x) -> np.ndarray:
    return x.delta_expanded if isinstance(x, DifferenceEstimate) else as_array(x)


def score(estimate, truth, edge_tol: float = EDGE_TOL, freq_index: Optional[int] = None,
          strict: bool = False) -> MetricsReport:
    """Compare an expanded estimate with the expanded truth.

    With ``strict`` an all-zero truth raises :class:`UndefinedMetricError`;
    otherwise the undefined metrics are reported as ``None``.
    """
    D, T = _matrix(estimate), _matrix(truth)
    if D.shape != T.shape:
        raise InputError(f"estimate shape {D.shape} != truth shape {T.shape}")
    est = np.abs(D) > edge_tol
    tru = np.abs(T) > edge_tol
    tp = int(np.sum(est & tru))
    fp = int(np.sum(est & ~tru))
    fn = int(np.sum(~est & tru))
    tn = int(np.sum(~est & ~tru))
    energy = float(np.sum(T**2))
    if strict and not tru.any():
        raise UndefinedMetricError("truth has no entries above edge_tol; RRMSE and recall undefined")
    return MetricsReport(
        precision=tp / (tp + fp) if tp + fp else None,
        recall=tp / (tp + fn) if tp + fn else None,
        accuracy=(tp + tn) / D.size,
        rrmse=float(np.sqrt(np.sum((D - T) ** 2) / energy)) if tru.any() else None,
        n_true_edges=tp + fn,
        n_est_edges=tp + fp,
        tp=tp, fp=fp, tn=tn, fn=fn,
        freq_index=freq_index,
    )


def aggregate(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Mean and standard error (sample SD / sqrt(count)) of each metric."""
    if not reports:
        raise InputError("nothing to aggregate")
    means, ses, skipped = {}, {}, {}
    keys = METRICS + ("n_true_edges", "n_est_edges", "tp", "fp", "tn", "fn")
    for key in keys:
        vals = np.array([getattr(r, key) for r in reports if getattr(r, key) is not None], dtype=float)
        skipped[key] = len(reports) - vals.size
        if vals.size == 0:
            means[key], ses[key] = None, 0.0
            continue
        means[key] = float(vals.mean())
        ses[key] = float(vals.std(ddof=1) / np.sqrt(vals.size)) if vals.size > 1 else 0.0
    return MetricsReport(
        **means,
        se=ses,
        skipped={k: v for k, v in skipped.items() if v},
        per_frequency=list(reports),
    )


def write_json(report: MetricsReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2)


_CSV_FIELDS = ["freq_index", *METRICS, "n_true_edges", "n_est_edges", "tp", "fp", "tn", "fn"]


def write_csv(report: MetricsReport, path, label: str = "") -> None:
    """One row per frequency followed by a ``summary`` row of means."""
    rows = report.per_frequency or [report]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "row", *_CSV_FIELDS])
        for r in rows:
            w.writerow([label, "frequency", *("" if getattr(r, f) is None else getattr(r, f) for f in _CSV_FIELDS)])
        if report.per_frequency:
            w.writerow([label, "summary", *("" if getattr(report, f) is None else getattr(report, f) for f in _CSV_FIELDS)])
