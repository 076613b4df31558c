"""VAR(1) simulation with closed-form spectral densities.

``x_t = A x_{t-1} + e_t`` with ``e_t ~ N(0, I)`` has spectral density

    f(lambda) = (1/2pi) inv(I - A e^{-i lambda}) inv(I - A e^{-i lambda})^H

so ``inv(f(lambda)) = 2pi (I - A e^{-i lambda})^H (I - A e^{-i lambda})``. Block
diagonal transition matrices give block diagonal spectra, which is how the
benchmark settings control the sparsity of the true difference.

Random streams
--------------
All randomness goes through :class:`numpy.random.Generator` (PCG64) seeded by
:class:`numpy.random.SeedSequence`. :func:`build_setting` draws from
``SeedSequence([seed, 0])``; :func:`condition_seeds` derives per-condition
simulation seeds from ``SeedSequence([seed, 1]).spawn(2)``. Results are
bit-reproducible across platforms for a given numpy version.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from .errors import GenerationError, InputError
from .realspace import ExpandedMatrix, expand
from .timeseries_io import TimeSeriesPanel

log = logging.getLogger(__name__)

SETTING1_BLOCK = np.array([[0.5, 0.9, 0.0], [0.0, 0.5, 0.9], [0.0, 0.0, 0.5]])
STABILITY_LIMIT = 0.99
MAX_RETRIES = 100
RESCALE_RADIUS = 0.9

# density of the large block (settings 2 and 3) and of the small 3x3 block
LARGE_BLOCK_DENSITY = {2: 0.40, 3: 0.05}
SMALL_BLOCK_DENSITY = 0.60

# Seeds whose 3x3 block gives the benchmark truth sizes at generic
# frequencies: 14 nonzero expanded entries (setting 2) and 28 (setting 3).
# Setting 1 is deterministic (22 entries).
DEFAULT_SEEDS = {1: 0, 2: 33, 3: 1}


def spectral_radius(A: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvals(A)).max(initial=0.0))


@dataclass(frozen=True, eq=False)
class VarModel:
    """Stable VAR(1) model with identity noise covariance."""

    transition: np.ndarray

    def __post_init__(self):
        A = np.array(self.transition, dtype=float, copy=True)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InputError(f"transition must be square, got {A.shape}")
        rho = spectral_radius(A)
        if rho >= 1.0:
            raise InputError(f"unstable transition matrix (spectral radius {rho:.4f})")
        A.setflags(write=False)
        object.__setattr__(self, "transition", A)

    @property
    def p(self) -> int:
        return self.transition.shape[0]

    @property
    def noise_cov(self) -> np.ndarray:
        return np.eye(self.p)


@dataclass(frozen=True)
class SimSetting:
    id: int
    rng_seed: int = 0
    p: int = 54

    def __post_init__(self):
        if self.id not in (1, 2, 3):
            raise InputError(f"unknown setting {self.id}")
        if self.p < 6 or self.p % 3:
            raise InputError("p must be a multiple of 3 and at least 6")


def _signed_uniform(rng: np.random.Generator, k: int) -> np.ndarray:
    return rng.uniform(0.2, 0.5, k) * rng.choice([-1.0, 1.0], k)


def _sparse_block(rng, m: int, count: int) -> np.ndarray:
    B = np.zeros(m * m)
    pos = rng.choice(m * m, size=count, replace=False)
    B[pos] = _signed_uniform(rng, count)
    return B.reshape(m, m)


def _small_block(rng) -> np.ndarray:
    mask = rng.random((3, 3)) < SMALL_BLOCK_DENSITY
    return np.where(mask, _signed_uniform(rng, 9).reshape(3, 3), 0.0)


def _draw_stable(draw, what: str) -> np.ndarray:
    for attempt in range(MAX_RETRIES):
        B = draw()
        if spectral_radius(B) < STABILITY_LIMIT:
            if attempt:
                log.info("%s: stable draw after %d retries", what, attempt)
            return B
    return None


def build_setting(setting: SimSetting) -> Tuple[VarModel, VarModel]:
    """Transition matrices for the two conditions of a benchmark setting.

    Setting 1 tiles the fixed upper-triangular 3x3 block down the diagonal.
    Settings 2 and 3 use one random ``(p-3) x (p-3)`` block with exactly
    ``ceil(density * (p-3)**2)`` nonzeros (density 0.40 and 0.05) and a random
    3x3 block whose entries are nonzero with probability 0.6; nonzero values
    are ``+-Uniform(0.2, 0.5)``. In every setting the second condition negates
    the final 3x3 block.

    Draws with spectral radius >= 0.99 are redrawn up to 100 times. A large
    block that is still unstable (always the case at density 0.40) is rescaled
    to spectral radius 0.9.
    """
    p = setting.p
    if setting.id == 1:
        A1 = np.kron(np.eye(p // 3), SETTING1_BLOCK)
    else:
        rng = np.random.default_rng(np.random.SeedSequence([setting.rng_seed, 0]))
        m = p - 3
        count = int(np.ceil(LARGE_BLOCK_DENSITY[setting.id] * m * m))
        big = _draw_stable(lambda: _sparse_block(rng, m, count), f"setting {setting.id} large block")
        if big is None:
            big = _sparse_block(rng, m, count)
            r = spectral_radius(big)
            log.warning(
                "setting %d: large block unstable after %d draws, rescaling radius %.3f -> %.2f",
                setting.id, MAX_RETRIES, r, RESCALE_RADIUS,
            )
            big *= RESCALE_RADIUS / r

        def small_draw():
            B = _small_block(rng)
            # a zero block would make the two conditions identical
            return B if np.any(B) else np.full((3, 3), np.inf)

        small = _draw_stable(small_draw, f"setting {setting.id} small block")
        if small is None:
            raise GenerationError(f"setting {setting.id}: no stable 3x3 block in {MAX_RETRIES} draws")
        A1 = linalg.block_diag(big, small)

    A2 = A1.copy()
    A2[-3:, -3:] *= -1.0
    return VarModel(A1), VarModel(A2)


def condition_seeds(seed: int) -> Tuple[int, int]:
    """Independent simulation seeds for the two conditions."""
    children = np.random.SeedSequence([seed, 1]).spawn(2)
    return tuple(int(c.generate_state(1, dtype=np.uint64)[0]) for c in children)


def simulate_var1(
    model: VarModel, n: int, burn_in: int = 1000, seed: int = 0, label: str = ""
) -> TimeSeriesPanel:
    """Simulate ``n`` observations after ``burn_in`` discarded steps from ``x_0 = 0``."""
    if not isinstance(model, VarModel):
        model = VarModel(model)
    if n < 2:
        raise InputError("n must be >= 2")
    if burn_in < 0:
        raise InputError("burn_in must be >= 0")
    rng = np.random.default_rng(seed)
    A = model.transition
    total = n + burn_in
    eps = rng.standard_normal((total, model.p))
    x = np.zeros((total, model.p))
    prev = np.zeros(model.p)
    for t in range(total):
        prev = A @ prev + eps[t]
        x[t] = prev
    return TimeSeriesPanel(x[burn_in:], condition_label=label)


def transfer_inverse(model: VarModel, lam: float) -> np.ndarray:
    """``I - A e^{-i lambda}``."""
    return np.eye(model.p) - model.transition * np.exp(-1j * lam)


def true_spectral_density(model: VarModel, lam: float) -> np.ndarray:
    T = np.linalg.inv(transfer_inverse(model, lam))
    f = T @ T.conj().T / (2.0 * np.pi)
    return 0.5 * (f + f.conj().T)


def true_inverse_spectral_density(model: VarModel, lam: float) -> np.ndarray:
    G = transfer_inverse(model, lam)
    g = 2.0 * np.pi * (G.conj().T @ G)
    return 0.5 * (g + g.conj().T)


def true_difference(model1: VarModel, model2: VarModel, lam: float) -> ExpandedMatrix:
    """Expanded ``inv(f1(lambda)) - inv(f2(lambda))``.

    Computed from the closed-form inverse spectral densities, which avoids
    inverting the (possibly ill-conditioned) densities themselves.
    """
    if model1.p != model2.p:
        raise InputError("models differ in dimension")
    diff = true_inverse_spectral_density(model1, lam) - true_inverse_spectral_density(model2, lam)
    return expand(diff)


def stationary_covariance(model: VarModel) -> np.ndarray:
    """``Gamma(0)`` solving ``Gamma = A Gamma A^T + I``."""
    return linalg.solve_discrete_lyapunov(model.transition, np.eye(model.p))
