"""Periodograms and bandwidth-smoothed spectral density matrices.

Conventions
-----------
Fourier frequencies are ``lambda_j = 2*pi*j/n`` with ``j`` running over
``-floor((n-1)/2) .. floor(n/2)``. The discrete Fourier transform of the panel
is ``d(lambda_j) = sum_{t=1}^{n} x_t exp(-i lambda_j t)`` and the periodogram is
``P(lambda_j) = d d^H / (2 pi n)``. Smoothing averages ``2M+1`` periodograms
centred on ``j`` with the index wrapped modulo ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .errors import BandwidthError, InputError
from .timeseries_io import TimeSeriesPanel


@dataclass(frozen=True)
class FourierGrid:
    n: int
    indices: np.ndarray
    frequencies: np.ndarray


@dataclass(frozen=True)
class SpectralEstimate:
    """Smoothed periodogram at one Fourier frequency."""

    freq_index: int
    matrix: np.ndarray
    bandwidth: int
    n: int

    @property
    def frequency(self) -> float:
        return 2.0 * np.pi * self.freq_index / self.n

    @property
    def p(self) -> int:
        return self.matrix.shape[0]


def fourier_grid(n: int) -> FourierGrid:
    if n < 2:
        raise InputError(f"Fourier grid needs n >= 2, got {n}")
    idx = np.arange(-((n - 1) // 2), n // 2 + 1)
    return FourierGrid(n, idx, 2.0 * np.pi * idx / n)


def default_bandwidth(n: int) -> int:
    """``ceil(n**(2/3))`` computed in exact integer arithmetic."""
    if n < 2:
        raise InputError(f"bandwidth needs n >= 2, got {n}")
    m = int(np.ceil(n ** (2.0 / 3.0)))
    # the smallest m with m**3 >= n**2; guards against float rounding either way
    while m > 1 and (m - 1) ** 3 >= n * n:
        m -= 1
    while m**3 < n * n:
        m += 1
    return m


def nearest_fourier_index(target_hz: float, n: int, sampling_rate_hz: float) -> int:
    """Fourier index whose frequency is closest to ``target_hz``.

    Ties go to the smaller index.
    """
    if sampling_rate_hz <= 0:
        raise InputError("sampling rate must be positive")
    if target_hz < 0 or target_hz > sampling_rate_hz / 2.0:
        raise InputError(
            f"target {target_hz} Hz outside [0, Nyquist={sampling_rate_hz / 2.0}] Hz"
        )
    return _round_half_down(target_hz * n / sampling_rate_hz)


def fourier_index_for_radians(lam: float, n: int) -> int:
    """Nearest Fourier index to an angular frequency in ``[0, pi]``."""
    if lam < 0 or lam > np.pi:
        raise InputError(f"frequency {lam} rad outside [0, pi]")
    return _round_half_down(lam * n / (2.0 * np.pi))


def _round_half_down(x: float) -> int:
    return int(np.ceil(x - 0.5))


def evenly_spaced_indices(n: int, count: int = 100) -> np.ndarray:
    """Fourier indices for ``count`` evenly spaced frequencies in ``[0, pi - 1/n]``.

    When fewer than ``count`` Fourier frequencies fall in that range all of
    them are returned (e.g. 50 for ``n = 100``). Otherwise the evenly spaced
    targets are snapped to the nearest grid index.
    """
    if count < 1:
        raise InputError("count must be positive")
    upper = np.pi - 1.0 / n
    available = np.arange(0, n // 2 + 1)
    available = available[2.0 * np.pi * available / n <= upper]
    if available.size <= count:
        return available
    targets = np.linspace(0.0, upper, count)
    idx = np.array([fourier_index_for_radians(t, n) for t in targets])
    return np.unique(np.clip(idx, available[0], available[-1]))


def dft(panel: TimeSeriesPanel | np.ndarray) -> np.ndarray:
    """``d(lambda_j)`` for every ``j``, stored at row ``j mod n`` (shape ``n x p``)."""
    x = panel.data if isinstance(panel, TimeSeriesPanel) else np.asarray(panel, float)
    n = x.shape[0]
    # time origin t = 1: multiply the numpy transform by exp(-i lambda_j)
    phase = np.exp(-2j * np.pi * np.arange(n) / n)
    return np.fft.fft(x, axis=0) * phase[:, None]


def periodogram_all(panel: TimeSeriesPanel) -> List[tuple]:
    """Raw periodogram at every Fourier frequency.

    Returns a list of ``(j, P(lambda_j))`` pairs ordered by increasing ``j``.
    """
    d = dft(panel)
    n = panel.n
    grid = fourier_grid(n)
    scale = 1.0 / (2.0 * np.pi * n)
    out = []
    for j in grid.indices:
        v = d[j % n]
        out.append((int(j), scale * np.outer(v, v.conj())))
    return out


def _check_bandwidth(n: int, M: int) -> None:
    if M < 1:
        raise BandwidthError(f"bandwidth M must be >= 1, got {M}")
    if 2 * M + 1 > n:
        raise BandwidthError(f"bandwidth 2M+1={2 * M + 1} exceeds n={n}")


def _smooth(d: np.ndarray, j: int, M: int) -> np.ndarray:
    n = d.shape[0]
    rows = d[np.arange(j - M, j + M + 1) % n]
    f = rows.T @ rows.conj()
    f /= 2.0 * np.pi * n * (2 * M + 1)
    # exact Hermitian symmetry; the product is Hermitian only up to rounding
    return 0.5 * (f + f.conj().T)


def smoothed_periodogram(panel: TimeSeriesPanel, freq_index: int, M: int) -> SpectralEstimate:
    """Average of the ``2M+1`` periodograms centred on ``freq_index``."""
    _check_bandwidth(panel.n, M)
    return SpectralEstimate(int(freq_index), _smooth(dft(panel), int(freq_index), M), M, panel.n)


def smoothed_periodograms(
    panel: TimeSeriesPanel, freq_indices: Iterable[int], M: Optional[int] = None
) -> List[SpectralEstimate]:
    """Smoothed periodograms at several frequencies from a single FFT.

    ``M`` defaults to :func:`default_bandwidth` of the panel length.
    """
    M = default_bandwidth(panel.n) if M is None else M
    _check_bandwidth(panel.n, M)
    d = dft(panel)
    return [SpectralEstimate(int(j), _smooth(d, int(j), M), M, panel.n) for j in freq_indices]


def smoothed_periodogram_direct(x: np.ndarray, freq_index: int, M: int) -> np.ndarray:
    """O(n^2) reference computation straight from the defining sums.

    Used as an independent check on the FFT path; avoid for large ``n``.
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    _check_bandwidth(n, M)
    t = np.arange(1, n + 1)
    acc = np.zeros((p, p), dtype=complex)
    for k in range(freq_index - M, freq_index + M + 1):
        lam = 2.0 * np.pi * k / n
        d = (x * np.exp(-1j * lam * t)[:, None]).sum(axis=0)
        acc += np.outer(d, d.conj()) / (2.0 * np.pi * n)
    return acc / (2 * M + 1)


def band_indices(band_hz: Sequence[float], n: int, sampling_rate_hz: float) -> List[int]:
    return [nearest_fourier_index(f, n, sampling_rate_hz) for f in band_hz]


# Frequency lists (Hz) for the standard EEG bands.
BANDS_HZ = {
    "theta": (4, 5, 6, 7, 8),
    "beta": (12, 16, 20, 24, 28),
    "gamma": (30, 40, 50, 60, 70),
    "high-gamma": (80, 95, 110, 125, 140, 150),
}
