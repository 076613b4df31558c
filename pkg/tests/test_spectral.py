import numpy as np
import pytest

from oracles import dft_loop, smoothed_periodogram_loop
from sddnet import BandwidthError, InputError, TimeSeriesPanel
from sddnet.spectral import (
    band_indices,
    default_bandwidth,
    dft,
    evenly_spaced_indices,
    fourier_grid,
    fourier_index_for_radians,
    nearest_fourier_index,
    periodogram_all,
    smoothed_periodogram,
    smoothed_periodogram_direct,
    smoothed_periodograms,
)


def test_fourier_grid():
    g = fourier_grid(4)
    np.testing.assert_array_equal(g.indices, [-1, 0, 1, 2])
    np.testing.assert_allclose(g.frequencies, [-np.pi / 2, 0, np.pi / 2, np.pi])
    np.testing.assert_array_equal(fourier_grid(5).indices, [-2, -1, 0, 1, 2])
    with pytest.raises(InputError):
        fourier_grid(1)


@pytest.mark.parametrize("n,M", [(1000, 100), (200, 35), (100, 22), (8, 4), (27, 9), (2, 2)])
def test_default_bandwidth(n, M):
    assert default_bandwidth(n) == M


def test_dft_matches_direct_sum(rng):
    x = rng.standard_normal((13, 3))
    np.testing.assert_allclose(dft(x), dft_loop(x), atol=1e-10)


def test_cosine_periodogram_concentrates():
    n = 32
    t = np.arange(1, n + 1)
    x = TimeSeriesPanel(np.cos(2 * np.pi * t / n)[:, None])
    P = dict(periodogram_all(x))
    for j, v in P.items():
        if abs(j) not in (0, 1):
            assert abs(v[0, 0]) < 1e-10
    assert P[1][0, 0].real == pytest.approx(n / (8 * np.pi))
    # oracle from the direct-sum DFT
    d = dft_loop(x.data)
    for j in P:
        np.testing.assert_allclose(P[j], np.outer(d[j % n], d[j % n].conj()) / (2 * np.pi * n), atol=1e-12)


def test_zero_panel():
    x = TimeSeriesPanel(np.zeros((10, 2)))
    assert np.all(smoothed_periodogram(x, 2, 2).matrix == 0)


def test_full_averaging_is_frequency_independent(rng):
    n = 9
    x = TimeSeriesPanel(rng.standard_normal((n, 2)))
    mats = [smoothed_periodogram(x, j, 4).matrix for j in range(-4, 5)]
    for m in mats[1:]:
        np.testing.assert_allclose(m, mats[0], atol=1e-12)


def test_bandwidth_too_large(rng):
    x = TimeSeriesPanel(rng.standard_normal((9, 2)))
    with pytest.raises(BandwidthError):
        smoothed_periodogram(x, 0, 5)


def test_smoothed_matches_oracle(rng):
    x = rng.standard_normal((24, 3))
    panel = TimeSeriesPanel(x)
    for j in (0, 3, 12, -5):
        S = smoothed_periodogram(panel, j, 4).matrix
        np.testing.assert_allclose(S, smoothed_periodogram_loop(x, j, 4), atol=1e-10)
        np.testing.assert_allclose(S, smoothed_periodogram_direct(x, j, 4), atol=1e-10)
        np.testing.assert_allclose(S, S.conj().T, atol=1e-14)
        assert np.linalg.eigvalsh(S).min() > -1e-12


def test_batch_matches_single(rng):
    panel = TimeSeriesPanel(rng.standard_normal((40, 2)))
    idx = [0, 5, 20]
    batch = smoothed_periodograms(panel, idx, 3)
    for j, est in zip(idx, batch):
        assert est.freq_index == j and est.bandwidth == 3
        np.testing.assert_allclose(est.matrix, smoothed_periodogram(panel, j, 3).matrix)
    assert batch[1].frequency == pytest.approx(2 * np.pi * 5 / 40)


def test_nearest_fourier_index():
    assert nearest_fourier_index(0, 512, 512) == 0
    assert nearest_fourier_index(8, 512, 512) == 8
    assert nearest_fourier_index(8, 1000, 512) == 16  # 15.625 -> 16
    assert nearest_fourier_index(1.5, 10, 10) == 1  # tie goes down
    with pytest.raises(InputError):
        nearest_fourier_index(300, 512, 512)
    with pytest.raises(InputError):
        fourier_index_for_radians(4.0, 100)
    assert fourier_index_for_radians(np.pi / 2, 100) == 25


def test_band_indices():
    assert band_indices((4, 5, 6, 7, 8), 512, 256) == [8, 10, 12, 14, 16]


def test_evenly_spaced_indices():
    assert len(evenly_spaced_indices(100)) == 50
    idx = evenly_spaced_indices(2000)
    assert len(idx) == 100
    assert idx[0] == 0 and 2 * np.pi * idx[-1] / 2000 <= np.pi - 1 / 2000
    assert np.all(np.diff(idx) > 0)
    assert list(evenly_spaced_indices(2000, 10)) == [0, 111, 222, 333, 444, 555, 667, 778, 889, 999]
