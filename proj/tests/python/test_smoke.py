import math

import numpy as np
import pytest

import qpairsim as qp


def test_isolated_reduced_state_is_uniform_at_t0():
    model = qp.isolated_model(0.8)
    rho = qp.reduced_state(model, 0.0)
    assert np.allclose(rho, 0.25 * np.ones((4, 4)), atol=1e-14)


def test_isolated_concurrence_matches_sine():
    model = qp.isolated_model(0.5)
    for t in np.linspace(0.0, math.pi, 15):
        rho = qp.reduced_state(model, t)
        assert qp.concurrence(rho) == pytest.approx(abs(math.sin(t)), abs=1e-10)
        assert qp.purity(rho) == pytest.approx(1.0, abs=1e-12)


def test_bell_state_concurrence():
    psi = np.zeros(4, dtype=complex)
    psi[0] = psi[3] = 1.0 / math.sqrt(2.0)
    rho = np.outer(psi, psi.conj())
    assert qp.concurrence(rho) == pytest.approx(1.0, abs=1e-12)


def test_reduced_state_equals_brute_force():
    model = qp.random_model(0.7, 4, 99)
    for t in (0.2, 0.9):
        exact = qp.reduced_state(model, t)
        brute = qp.brute_force_reduced_state(model, t)
        assert np.max(np.abs(exact - brute)) < 1e-10


def test_closed_form_purity_identity():
    lam, omega = 0.5, 1.0
    for t in (0.1, 0.5, 1.0):
        rho = qp.dephasing_closed_form(omega, lam, t)
        expected = math.cosh(2 * lam * t) ** 2 * math.exp(-4 * lam * t)
        assert qp.purity(rho) == pytest.approx(expected, abs=1e-12)


def test_threshold_is_at_omega():
    result = qp.threshold_scan(1.0, 0.5, 1.5, 0.005)
    assert result.lambda_star == pytest.approx(1.0, abs=0.01)


def test_reduce_couplings_example():
    table = qp.CouplingTable()
    table.g11, table.g12, table.g21, table.g22 = 1.0, 2.0, 3.0, 4.0
    reduced = qp.reduce_couplings(table)
    assert reduced.omega == pytest.approx((2.0 + 3.0 - 1.0 - 4.0) / 4.0, abs=1e-15)
    assert reduced.c0 == pytest.approx(2.5, abs=1e-15)


def test_rate_formula_threshold_behavior():
    assert qp.lindblad_concurrence_rate(1.0, 0.0) == 2.0
    assert qp.lindblad_concurrence_rate(1.0, 2.0) < 0.0
    assert abs(qp.lindblad_concurrence_rate(1.0, 1.0)) < 1e-14
