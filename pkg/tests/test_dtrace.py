import numpy as np
import pytest

from oracles import dtrace_loss_kron, inverse_difference, numeric_gradient, random_hpd, random_pd
from sddnet import InputError, SolverOptions, expand, solve_path, solve_sdd
from sddnet.dtrace import (
    DTraceProblem,
    dtrace_gradient,
    dtrace_loss,
    hessian_action,
    kkt_residual,
    soft_threshold,
)


def test_loss_hand_values():
    I2 = np.eye(2)
    assert dtrace_loss(np.zeros((2, 2)), I2, I2) == 0.0
    assert dtrace_loss(np.eye(2), I2, I2) == pytest.approx(1.0)
    with pytest.raises(InputError):
        dtrace_loss(np.eye(3), I2, I2)


def test_loss_matches_kron_oracle(rng):
    S1, S2 = random_pd(rng, 5), random_pd(rng, 5)
    D = rng.standard_normal((5, 5))
    D = D + D.T
    assert dtrace_loss(D, S1, S2) == pytest.approx(dtrace_loss_kron(D, S1, S2), rel=1e-12)


def test_gradient_and_hessian(rng):
    S1, S2 = random_pd(rng, 4), random_pd(rng, 4)
    np.testing.assert_allclose(dtrace_gradient(np.zeros((4, 4)), S1, S2), S1 - S2)
    D = rng.standard_normal((4, 4))
    g = numeric_gradient(lambda X: dtrace_loss(X, S1, S2), D)
    np.testing.assert_allclose(dtrace_gradient(D, S1, S2), g, atol=1e-6)
    E = rng.standard_normal((4, 4))
    np.testing.assert_allclose(
        dtrace_gradient(D + E, S1, S2) - dtrace_gradient(D, S1, S2), hessian_action(E, S1, S2), atol=1e-12
    )


def test_gradient_zero_at_truth(rng):
    S1, S2 = random_pd(rng, 6), random_pd(rng, 6)
    assert np.abs(dtrace_gradient(inverse_difference(S1, S2), S1, S2)).max() < 1e-9


def test_soft_threshold():
    np.testing.assert_array_equal(soft_threshold(np.array([-2.0, -0.5, 0.0, 0.5, 3.0]), 1.0), [-1, 0, 0, 0, 2])


def test_identical_inputs_give_zero(rng):
    S = random_pd(rng, 4)
    est = solve_sdd(S, S, 0.1)
    assert np.all(est.delta_expanded == 0) and est.converged


def test_small_tau_recovers_inverse_difference(rng):
    S1, S2 = random_pd(rng, 6, 5.0), random_pd(rng, 6, 5.0)
    est = solve_sdd(S1, S2, 1e-8)
    assert est.converged
    assert np.linalg.norm(est.delta_expanded - inverse_difference(S1, S2)) < 1e-4
    assert est.delta_complex is None
    assert est.kkt_residual <= 10 * SolverOptions().primal_tol


def test_tau_max_nulls(rng):
    S1, S2 = random_pd(rng, 6), random_pd(rng, 6)
    tau = 2 * np.abs(S1 - S2).max()
    est = solve_sdd(S1, S2, tau)
    assert np.all(est.delta_expanded == 0)
    assert kkt_residual(est.delta_expanded, S1, S2, tau) == 0.0
    # the subgradient condition already holds at half that value
    assert kkt_residual(np.zeros((6, 6)), S1, S2, np.abs(S1 - S2).max()) == 0.0


def test_structured_inputs_give_structured_output(rng):
    F1, F2 = random_hpd(rng, 3), random_hpd(rng, 3)
    S1, S2 = expand(F1), expand(F2)
    est = solve_sdd(S1, S2, 1e-7)
    assert est.converged
    truth = np.linalg.inv(F1) - np.linalg.inv(F2)
    assert np.linalg.norm(est.delta_complex - truth) / np.linalg.norm(truth) < 1e-3
    np.testing.assert_array_equal(expand(est.delta_complex).matrix, est.delta_expanded)
    np.testing.assert_array_equal(est.delta_expanded, est.delta_expanded.T)


def test_sparse_solution_satisfies_kkt(rng):
    S1, S2 = random_pd(rng, 8), random_pd(rng, 8)
    tau = 0.2 * np.abs(S1 - S2).max()
    est = solve_sdd(S1, S2, tau)
    assert est.converged and est.kkt_residual <= 1e-6
    assert 0 < np.count_nonzero(est.delta_expanded) < 64


def test_non_psd_rejected():
    S = np.diag([1.0, -1e-3])
    with pytest.raises(InputError):
        solve_sdd(S, np.eye(2), 0.1)
    with pytest.raises(InputError):
        solve_sdd(np.eye(2), np.eye(2), 0.0)
    with pytest.raises(InputError):
        solve_sdd(np.eye(2), np.eye(3), 0.1)


def test_non_convergence_is_reported(rng):
    S1, S2 = random_pd(rng, 6, 100.0), random_pd(rng, 6, 100.0)
    est = solve_sdd(S1, S2, 1e-6, SolverOptions(max_iters=3))
    assert est.converged is False
    assert est.iterations == 3 and np.isfinite(est.kkt_residual)


def test_objective_history_is_monotone(rng):
    S1, S2 = random_pd(rng, 6), random_pd(rng, 6)
    est = solve_sdd(S1, S2, 0.05, SolverOptions(record_objective=True))
    h = np.array(est.objective_history)
    assert h.size > 0 and np.all(np.diff(h) <= 0)


def test_warm_path_matches_cold(rng):
    S1, S2 = random_pd(rng, 6), random_pd(rng, 6)
    taus = [0.5, 0.1, 0.02]
    warm = solve_path(S1, S2, taus)
    for t, w in zip(taus, warm):
        cold = solve_sdd(S1, S2, t)
        assert np.abs(w.delta_expanded - cold.delta_expanded).max() < 1e-5
    prob = DTraceProblem(S1, S2)
    assert prob.tau_zero == pytest.approx(np.abs(S1 - S2).max())


def test_convexity(rng):
    for _ in range(20):
        S1, S2 = random_pd(rng, 6), random_pd(rng, 6)
        D1, D2 = rng.standard_normal((6, 6)), rng.standard_normal((6, 6))
        a = rng.random()
        lhs = dtrace_loss(a * D1 + (1 - a) * D2, S1, S2)
        assert lhs <= a * dtrace_loss(D1, S1, S2) + (1 - a) * dtrace_loss(D2, S1, S2) + 1e-10


def test_population_recovery_from_var_models(rng):
    from sddnet import VarModel
    from sddnet.varsim import true_spectral_density

    for lam in (0.4, 1.9):
        m1, m2 = VarModel(0.3 * rng.standard_normal((3, 3))), VarModel(0.3 * rng.standard_normal((3, 3)))
        f1, f2 = true_spectral_density(m1, lam), true_spectral_density(m2, lam)
        est = solve_sdd(expand(f1), expand(f2), 1e-7)
        truth = np.linalg.inv(f1) - np.linalg.inv(f2)
        assert np.linalg.norm(est.delta_complex - truth) / np.linalg.norm(truth) < 1e-3


def test_sparsity_at_path_extremes(rng):
    from sddnet.tuning import count_edges, penalty_path

    S1, S2 = expand(random_hpd(rng, 4)), expand(random_hpd(rng, 4))
    ests = solve_path(S1, S2, penalty_path(S1, S2, 10))
    counts = [count_edges(e) for e in ests]
    assert counts[0] == 0 and counts[-1] == max(counts)
