import numpy as np
import pytest

from sddnet import InputError, SimSetting, TimeSeriesPanel, build_setting, estimate_panels, simulate_var1, score
from sddnet.varsim import true_difference


def _panels(n, p=6, seed=0):
    A1, A2 = build_setting(SimSetting(1, p=p))
    return A1, A2, simulate_var1(A1, n, seed=seed), simulate_var1(A2, n, seed=seed + 1)


def test_identical_panels_give_zero():
    _, _, x, _ = _panels(200)
    for res in estimate_panels(x, x, [5, 40], methods=("sdd", "hard")):
        for m in res.methods.values():
            assert m.error is None and np.all(m.estimate.delta_expanded == 0)


def test_small_problem_recovers_support():
    A1, A2, x1, x2 = _panels(4000, seed=3)
    res = estimate_panels(x1, x2, [400], methods=("sdd", "naive", "hard"))[0]
    T = true_difference(A1, A2, res.frequency)
    r = score(res.methods["sdd"].estimate, T)
    assert r.recall == 1.0 and r.rrmse < 0.5
    assert res.methods["sdd"].selected is not None


def test_singular_spectra_are_captured():
    # p = 54 with n = 100: 2M + 1 = 45 periodograms cannot give full rank
    A1, A2 = build_setting(SimSetting(1))
    x1, x2 = simulate_var1(A1, 100, seed=0), simulate_var1(A2, 100, seed=1)
    res = estimate_panels(x1, x2, [10], methods=("naive", "hard"))[0]
    assert "SingularityError" in res.methods["naive"].error
    assert "SingularityError" in res.methods["hard"].error


def test_mismatched_panels():
    a = TimeSeriesPanel(np.zeros((10, 2)))
    with pytest.raises(InputError):
        estimate_panels(a, TimeSeriesPanel(np.zeros((10, 3))), [1])
    with pytest.raises(InputError):
        estimate_panels(a, TimeSeriesPanel(np.zeros((11, 2))), [1])
