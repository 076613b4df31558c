"""Lasso-penalized D-trace estimator of a difference of inverses.

For symmetric positive semidefinite ``S1`` and ``S2`` the D-trace loss

    L(D) = 1/4 (<S2 D, D S1> + <S1 D, D S2>) - <D, S2 - S1>,   <X, Y> = tr(X Y^T)

is a convex quadratic with gradient ``(S2 D S1 + S1 D S2)/2 - (S2 - S1)`` and
Hessian ``(S1 (x) S2 + S2 (x) S1)/2``. When both inputs are positive definite
its unique minimiser is ``inv(S1) - inv(S2)``. The estimator minimises
``L(D) + tau * sum |D_ij|`` over all entries, diagonal included.

Solver
------
The quadratic is split into its two one-sided halves

    f1(X) = 1/4 <S2 X S1, X> - 1/2 <X, C>,   f2(X) = 1/4 <S1 X S2, X> - 1/2 <X, C>

with ``C = S2 - S1``, and consensus ADMM is run on ``f1(X1) + f2(X2) +
tau |Z|_1`` subject to ``X1 = X2 = Z``. Each half has a single Kronecker
Hessian, so its proximal step is an elementwise division in the product
eigenbasis of ``S1`` and ``S2``. Both eigendecompositions are computed once
per problem; an iteration costs a handful of ``2p x 2p`` matrix products.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .errors import InputError
from .realspace import (
    STRUCTURE_TOL,
    ExpandedMatrix,
    as_array,
    block_deviation,
    project_block_structure,
    recover,
)

log = logging.getLogger(__name__)

ZERO_CUTOFF = 1e-10
PSD_TOL = 1e-8


@dataclass(frozen=True)
class SolverOptions:
    """ADMM settings.

    Tolerances are absolute max-norms of the primal residual ``|X_k - Z|`` and
    the dual residual ``rho |Z - Z_prev|``. A solve only counts as converged
    once the KKT residual of the returned point is also below
    ``kkt_factor * primal_tol``.
    """

    rho: float = 1.0
    max_iters: int = 2000
    primal_tol: float = 1e-7
    dual_tol: float = 1e-7
    symmetrize: bool = True
    adaptive_rho: bool = True
    kkt_factor: float = 10.0
    record_objective: bool = False

    def __post_init__(self):
        if not self.rho > 0:
            raise InputError("rho must be positive")
        if self.max_iters < 1:
            raise InputError("max_iters must be >= 1")
        if not (self.primal_tol > 0 and self.dual_tol > 0):
            raise InputError("tolerances must be positive")


@dataclass
class DifferenceEstimate:
    """Estimated difference of inverse spectral densities at one frequency.

    ``delta_expanded`` is the real ``2p x 2p`` estimate and ``delta_complex``
    its complex ``p x p`` counterpart (``None`` when the inputs were generic
    real matrices without the block pattern). Solver diagnostics are ``None``
    for estimates that did not come from the ADMM solver.
    """

    delta_expanded: np.ndarray
    delta_complex: Optional[np.ndarray]
    tau: Optional[float] = None
    iterations: Optional[int] = None
    converged: Optional[bool] = None
    kkt_residual: Optional[float] = None
    objective_history: List[float] = field(default_factory=list, repr=False)

    @property
    def p(self) -> int:
        return self.delta_expanded.shape[0] // 2

    @classmethod
    def from_expanded(cls, D, structured: bool = True, **diagnostics) -> "DifferenceEstimate":
        D = as_array(D)
        return cls(D, recover(D) if structured else None, **diagnostics)


def _pair(S1, S2):
    S1, S2 = as_array(S1), as_array(S2)
    if S1.ndim != 2 or S1.shape[0] != S1.shape[1] or S1.shape != S2.shape:
        raise InputError(f"incompatible shapes {S1.shape} and {S2.shape}")
    return S1, S2


def _check_conformable(D, S1):
    if D.shape != S1.shape:
        raise InputError(f"D has shape {D.shape}, expected {S1.shape}")


def dtrace_loss(D, S1, S2) -> float:
    S1, S2 = _pair(S1, S2)
    D = np.asarray(D, dtype=float)
    _check_conformable(D, S1)
    quad = np.sum((S2 @ D) * (D @ S1)) + np.sum((S1 @ D) * (D @ S2))
    return float(0.25 * quad - np.sum(D * (S2 - S1)))


def dtrace_gradient(D, S1, S2) -> np.ndarray:
    S1, S2 = _pair(S1, S2)
    D = np.asarray(D, dtype=float)
    _check_conformable(D, S1)
    return 0.5 * (S2 @ D @ S1 + S1 @ D @ S2) - (S2 - S1)


def hessian_action(E, S1, S2) -> np.ndarray:
    """Hessian of the loss applied to a direction ``E``."""
    S1, S2 = _pair(S1, S2)
    return 0.5 * (S1 @ E @ S2 + S2 @ E @ S1)


def penalized_objective(D, S1, S2, tau: float) -> float:
    return dtrace_loss(D, S1, S2) + tau * float(np.abs(D).sum())


def kkt_residual(D, S1, S2, tau: float) -> float:
    """Max-norm violation of the subgradient optimality conditions."""
    D = np.asarray(D, dtype=float)
    g = dtrace_gradient(D, S1, S2)
    nz = D != 0
    res = np.where(nz, np.abs(g + tau * np.sign(D)), np.maximum(0.0, np.abs(g) - tau))
    return float(res.max(initial=0.0))


def soft_threshold(X: np.ndarray, t: float) -> np.ndarray:
    return np.sign(X) * np.maximum(np.abs(X) - t, 0.0)


@dataclass
class _State:
    Z: np.ndarray
    U1: np.ndarray
    U2: np.ndarray
    rho: float


class DTraceProblem:
    """Pre-factored D-trace problem for one pair ``(S1, S2)``.

    Reuse one instance across a penalty path: the eigendecompositions are
    computed here once and :meth:`solve` can warm-start from the previous
    solution.
    """

    def __init__(self, S1, S2):
        S1, S2 = _pair(S1, S2)
        self.S1 = 0.5 * (S1 + S1.T)
        self.S2 = 0.5 * (S2 + S2.T)
        self.e1, self.W1 = np.linalg.eigh(self.S1)
        self.e2, self.W2 = np.linalg.eigh(self.S2)
        for name, e in (("S1", self.e1), ("S2", self.e2)):
            if e[0] < -PSD_TOL:
                raise InputError(f"{name} is not positive semidefinite (min eigenvalue {e[0]:.3g})")
        self.e1 = np.clip(self.e1, 0.0, None)
        self.e2 = np.clip(self.e2, 0.0, None)
        self.C = self.S2 - self.S1
        self.structured = self.dim % 2 == 0 and all(
            block_deviation(S) <= STRUCTURE_TOL * max(1.0, np.abs(S).max())
            for S in (self.S1, self.S2)
        )
        # Hessian spectra of the two halves, in their respective product bases
        self._h1 = 0.5 * np.outer(self.e2, self.e1)
        self._h2 = 0.5 * np.outer(self.e1, self.e2)
        self._state: Optional[_State] = None

    @property
    def dim(self) -> int:
        return self.S1.shape[0]

    @property
    def tau_zero(self) -> float:
        """Smallest penalty for which ``D = 0`` is optimal."""
        return float(np.abs(self.C).max())

    def loss(self, D) -> float:
        return dtrace_loss(D, self.S1, self.S2)

    def gradient(self, D) -> np.ndarray:
        return dtrace_gradient(D, self.S1, self.S2)

    def objective(self, D, tau) -> float:
        return penalized_objective(D, self.S1, self.S2, tau)

    def _finish(self, Z: np.ndarray, symmetrize: bool) -> np.ndarray:
        D = project_block_structure(Z).matrix if self.structured else Z.copy()
        if symmetrize:
            D = 0.5 * (D + D.T)
        D[np.abs(D) < ZERO_CUTOFF] = 0.0
        return D

    def solve(self, tau: float, opts: Optional[SolverOptions] = None, warm_start: bool = False):
        """Minimise the penalised loss at penalty ``tau``.

        With ``warm_start`` the iteration resumes from this problem's previous
        solve (useful along a decreasing penalty path).
        """
        opts = opts or SolverOptions()
        if not tau > 0:
            raise InputError("tau must be positive")
        n2 = self.dim

        if self.tau_zero <= tau:
            # zero satisfies the optimality conditions exactly
            Z = np.zeros((n2, n2))
            self._state = _State(Z, Z.copy(), Z.copy(), opts.rho)
            return DifferenceEstimate.from_expanded(
                Z, self.structured, tau=tau, iterations=0, converged=True,
                kkt_residual=kkt_residual(Z, self.S1, self.S2, tau),
            )
        return self._admm(tau, opts, warm_start)

    def _admm(self, tau, opts, warm_start):
        n2 = self.dim
        W1, W2, C = self.W1, self.W2, self.C
        if warm_start and self._state is not None:
            st = self._state
            Z, U1, U2, rho = st.Z.copy(), st.U1.copy(), st.U2.copy(), st.rho
        else:
            Z = np.zeros((n2, n2))
            U1 = np.zeros((n2, n2))
            U2 = np.zeros((n2, n2))
            rho = opts.rho

        kkt_tol = opts.kkt_factor * opts.primal_tol
        history: List[float] = []
        best_obj = np.inf
        best_Z = Z
        converged = False
        kkt = np.inf
        it = 0
        halfC = 0.5 * C
        for it in range(1, opts.max_iters + 1):
            # X1: (1/2) S2 X S1 + rho X = C/2 + rho (Z - U1), solved in the (W2, W1) basis
            R = halfC + rho * (Z - U1)
            X1 = W2 @ ((W2.T @ R @ W1) / (self._h1 + rho)) @ W1.T
            R = halfC + rho * (Z - U2)
            X2 = W1 @ ((W1.T @ R @ W2) / (self._h2 + rho)) @ W2.T

            Z_old = Z
            Z = soft_threshold(0.5 * (X1 + U1 + X2 + U2), tau / (2.0 * rho))
            U1 += X1 - Z
            U2 += X2 - Z

            r = max(np.abs(X1 - Z).max(), np.abs(X2 - Z).max())
            s = rho * np.abs(Z - Z_old).max()

            if opts.record_objective:
                obj = self.objective(Z, tau)
                if obj <= best_obj:
                    best_obj, best_Z = obj, Z
                    history.append(obj)

            if r <= opts.primal_tol and s <= opts.dual_tol:
                D = self._finish(Z, opts.symmetrize)
                kkt = kkt_residual(D, self.S1, self.S2, tau)
                if kkt <= kkt_tol:
                    converged = True
                    break

            if opts.adaptive_rho and it % 5 == 0:
                if r > 10.0 * s:
                    rho *= 2.0
                    U1 /= 2.0
                    U2 /= 2.0
                elif s > 10.0 * r:
                    rho /= 2.0
                    U1 *= 2.0
                    U2 *= 2.0

        self._state = _State(Z, U1, U2, rho)
        if not converged:
            final = best_Z if opts.record_objective else Z
            D = self._finish(final, opts.symmetrize)
            kkt = kkt_residual(D, self.S1, self.S2, tau)
            log.warning("ADMM stopped at max_iters=%d (tau=%.3g, kkt=%.3g)", opts.max_iters, tau, kkt)
        return DifferenceEstimate.from_expanded(
            D, self.structured, tau=tau, iterations=it, converged=converged, kkt_residual=kkt,
            objective_history=history,
        )


def solve_sdd(S1, S2, tau: float, opts: Optional[SolverOptions] = None) -> DifferenceEstimate:
    """Sparse estimate of ``inv(S1) - inv(S2)`` at penalty ``tau``.

    Parameters
    ----------
    S1, S2 : ExpandedMatrix or ndarray
        Symmetric positive semidefinite ``2p x 2p`` matrices.
    tau : float
        Positive l1 penalty weight.
    opts : SolverOptions, optional

    Returns
    -------
    DifferenceEstimate
        Block structured, symmetric, with entries below ``1e-10`` zeroed.
        Hitting ``max_iters`` is reported through ``converged=False`` rather
        than an exception.
    """
    return DTraceProblem(S1, S2).solve(tau, opts)


def solve_path(S1, S2, taus: Sequence[float], opts: Optional[SolverOptions] = None) -> List[DifferenceEstimate]:
    """Solve along a penalty path, warm-starting each point from the previous one.

    ``taus`` is processed in the given order; pass it largest-first.
    """
    prob = DTraceProblem(S1, S2)
    return [prob.solve(t, opts, warm_start=True) for t in taus]


def count_nonzeros(D) -> int:
    return int(np.count_nonzero(as_array(D)))


__all__ = [
    "DifferenceEstimate",
    "DTraceProblem",
    "ExpandedMatrix",
    "SolverOptions",
    "count_nonzeros",
    "dtrace_gradient",
    "dtrace_loss",
    "hessian_action",
    "kkt_residual",
    "penalized_objective",
    "soft_threshold",
    "solve_path",
    "solve_sdd",
]
