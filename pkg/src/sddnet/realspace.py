"""Real block embedding of complex matrices.

A complex ``p x p`` matrix ``A + iB`` is represented by the real ``2p x 2p``
matrix ``[[A, -B], [B, A]]``. The map is an injective ring homomorphism, so
products and inverses carry over block-wise, and a Hermitian matrix maps to a
symmetric one with every eigenvalue doubled in multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, StructureError

STRUCTURE_TOL = 1e-8


@dataclass(frozen=True)
class ExpandedMatrix:
    matrix: np.ndarray

    @property
    def p(self) -> int:
        return self.matrix.shape[0] // 2

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def as_array(S) -> np.ndarray:
    """Plain ndarray view of an :class:`ExpandedMatrix` or array-like."""
    if isinstance(S, ExpandedMatrix):
        return S.matrix
    return np.asarray(S, dtype=float)


def expand(f) -> ExpandedMatrix:
    f = np.asarray(f, dtype=complex)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise InputError(f"expected a square matrix, got shape {f.shape}")
    A, B = f.real, f.imag
    return ExpandedMatrix(np.block([[A, -B], [B, A]]))


def block_deviation(S: np.ndarray) -> float:
    """Largest violation of the ``[[A, -B], [B, A]]`` pattern."""
    S = as_array(S)
    p = S.shape[0] // 2
    d1 = np.abs(S[:p, :p] - S[p:, p:]).max(initial=0.0)
    d2 = np.abs(S[:p, p:] + S[p:, :p]).max(initial=0.0)
    return float(max(d1, d2))


def _check_even_square(S: np.ndarray) -> int:
    if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
        raise InputError(f"expected an even-sized square matrix, got shape {S.shape}")
    return S.shape[0] // 2


def recover(S, tol: float = STRUCTURE_TOL) -> np.ndarray:
    """Complex matrix from the (1,1) and (2,1) blocks.

    Raises :class:`StructureError` when the input departs from the block
    pattern by more than ``tol`` (absolute, max-norm).
    """
    S = as_array(S)
    p = _check_even_square(S)
    dev = block_deviation(S)
    if dev > tol:
        raise StructureError(
            f"matrix is not block structured: max deviation {dev:.3g} > {tol:g}",
            max_deviation=dev,
        )
    return S[:p, :p] + 1j * S[p:, :p]


def project_block_structure(S) -> ExpandedMatrix:
    """Nearest (Frobenius) block-structured matrix: average the paired blocks."""
    S = as_array(S)
    p = _check_even_square(S)
    A = 0.5 * (S[:p, :p] + S[p:, p:])
    B = 0.5 * (S[p:, :p] - S[:p, p:])
    return ExpandedMatrix(np.block([[A, -B], [B, A]]))
