import numpy as np
import pytest

from oracles import ebic_oracle, random_hpd
from sddnet import DegeneratePathError, InputError, expand
from sddnet.tuning import (
    TuningRecord,
    count_edges,
    ebic,
    penalty_path,
    select_tau,
    tau_max,
    tune_sdd,
    write_trace,
)


def test_penalty_path():
    S1 = np.eye(2)
    S2 = np.diag([1.0, 1.5])
    assert tau_max(S1, S2) == 1.0
    path = penalty_path(S1, S2)
    assert path.size == 20 and path[0] == 1.0 and path[-1] == 1e-3
    np.testing.assert_allclose(path[:-1] / path[1:], 1000 ** (1 / 19))
    np.testing.assert_array_equal(penalty_path(S1, S2, 2), [1.0, 1e-3])
    with pytest.raises(DegeneratePathError):
        penalty_path(S1, S1)
    with pytest.raises(InputError):
        penalty_path(S1, S2, 1)


def test_count_edges():
    assert count_edges(np.zeros((4, 4))) == 0
    D = expand(np.array([[0.5, 0], [0, 0]])).matrix
    assert count_edges(D) == 1
    assert count_edges(np.full((4, 4), 1e-7)) == 0
    # a complex off-diagonal entry: real and imaginary parts are separate edges
    D = expand(np.array([[0, 1 + 1j], [1 - 1j, 0]])).matrix
    assert count_edges(D) == 2


def test_ebic_zero_estimate():
    S1 = np.eye(2)
    S2 = np.diag([1.0, 1.5])
    # fit term at zero is the max-norm of S1 - S2
    assert ebic(np.zeros((2, 2)), S1, S2, 200, 300) == pytest.approx(200 * 0.5)


def test_ebic_substitution():
    S = np.eye(108)
    D = np.zeros((108, 108))
    D[0, 0] = D[54, 54] = 0.5
    fit = 0.5
    assert ebic(D, S, S, 200, 400, gamma=0.5, p=54) == pytest.approx(200 * fit + np.log(200) + 2 * np.log(54))


def test_ebic_matches_oracle(rng):
    for _ in range(5):
        F1, F2 = random_hpd(rng, 4), random_hpd(rng, 4)
        S1, S2 = expand(F1).matrix, expand(F2).matrix
        G = rng.standard_normal((4, 4)) * (rng.random((4, 4)) < 0.4)
        D = expand(G + G.T).matrix
        got = ebic(D, S1, S2, 150, 170, gamma=0.3, p=54)
        assert got == pytest.approx(ebic_oracle(D, S1, S2, 150, 170, 0.3, 54), abs=1e-10)


def test_select_tau():
    a = TuningRecord(1.0, 0, 10.0)
    assert select_tau([a]) is a
    b = TuningRecord(0.5, 1, 10.0)
    assert select_tau([b, a]) is a
    c = TuningRecord(0.1, 5, 2.0, converged=False)
    assert select_tau([a, b, c]) is a
    assert select_tau([a, b, c], include_nonconverged=True) is c
    d = TuningRecord(0.2, 5, 3.0, converged=False)
    assert select_tau([c, d]) is c
    with pytest.raises(InputError):
        select_tau([])


def test_tune_and_trace(tmp_path, rng):
    F1, F2 = random_hpd(rng, 3), random_hpd(rng, 3)
    res = tune_sdd(expand(F1), expand(F2), 500, 500, k=8)
    assert len(res.records) == 8 and res.selected in res.records
    assert res.records[0].edge_count == 0
    assert res.best.tau == res.selected.tau
    write_trace(res.records, tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "tau,edge_count,ebic,converged" and len(lines) == 9
