"""CSV files for real and complex matrices.

Complex ``p x p`` matrices are stored with ``2p`` columns, real and imaginary
parts interleaved per column, under the header ``c0_re,c0_im,c1_re,...``.
Real matrices are stored plainly with header ``c0,c1,...``. Values are written
with 17 significant digits so a read-back is exact.
"""

from __future__ import annotations

import numpy as np

from .errors import StructureError


def write_complex_csv(matrix, path) -> None:
    M = np.asarray(matrix, dtype=complex)
    p = M.shape[1]
    out = np.empty((M.shape[0], 2 * p))
    out[:, 0::2] = M.real
    out[:, 1::2] = M.imag
    header = ",".join(f"c{j}_{part}" for j in range(p) for part in ("re", "im"))
    np.savetxt(path, out, delimiter=",", fmt="%.17g", header=header, comments="")


def read_complex_csv(path) -> np.ndarray:
    raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if raw.shape[1] % 2:
        raise StructureError(f"{path}: odd number of columns for a complex matrix")
    return raw[:, 0::2] + 1j * raw[:, 1::2]


def write_real_csv(matrix, path) -> None:
    M = np.asarray(matrix, dtype=float)
    header = ",".join(f"c{j}" for j in range(M.shape[1]))
    np.savetxt(path, M, delimiter=",", fmt="%.17g", header=header, comments="")


def read_real_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
