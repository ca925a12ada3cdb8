"""Blow-up upper bound from the weighted-mean functional."""

import math

import numpy as np
import pytest

from evocontrol import heat, kaplan
from evocontrol import quadrature as qd
from evocontrol.errors import NotApplicableError, OutOfDomainError


def test_closed_form_values():
    # p = 3, q0 = 2: -(1/2) log(1 - 1/4), by direct evaluation
    assert abs(kaplan.kaplan_time(2.0, 3) - 0.14384103622589045) <= 1e-15
    with pytest.raises(NotApplicableError):
        kaplan.kaplan_time(1.0, 2)
    with pytest.raises(NotApplicableError):
        kaplan.kaplan_time(0.5, 2)


def test_quadrature_agrees_with_closed_form():
    for q0 in (1.1, 1.2535, 2.0, 5.0, 50.0):
        for p in (2, 3, 4):
            closed = kaplan.kaplan_time(q0, p)
            by_quad = kaplan.kaplan_time_by_quadrature(q0, p)
            assert abs(closed - by_quad) <= 1e-8


def test_quadrature_near_critical_stress():
    q0 = 1.0 + 1e-9
    closed = kaplan.kaplan_time(q0, 2)
    by_quad = kaplan.kaplan_time_by_quadrature(q0, 2)
    assert closed > 10.0
    assert abs(closed - by_quad) <= 1e-6 * closed


def test_functional_of_the_first_mode():
    # Q(A s_1) = A / C_K: the weight only sees the first mode
    assert abs(kaplan.q_of_sine_coeffs({1: 1.0}) - 1.0 / heat.C_K) <= 1e-15
    assert kaplan.q_of_sine_coeffs({2: 3.0, 5: -1.0}) == 0.0

    def f(x):
        return np.sqrt(2.0 / np.pi) * np.sin(x)

    assert abs(kaplan.q_by_quadrature(f, 1) - 1.0 / heat.C_K) <= 1e-12


def test_functional_intertwines_with_the_flow():
    # Q(flow(t) f) = e^{-t} Q(f): only the first mode carries weight
    coeffs = {1: 0.7, 2: -0.4, 3: 1.2}
    for t in (0.0, 0.3, 2.0):
        flowed = heat.semigroup_apply_sine_coeffs(coeffs, t)
        lhs = kaplan.q_of_sine_coeffs(flowed)
        rhs = math.exp(-t) * kaplan.q_of_sine_coeffs(coeffs)
        assert abs(lhs - rhs) <= 1e-14


def test_functional_is_an_average():
    # the weight sin(x)/2 integrates to 1, so Q(f) <= sup f and, for
    # nonnegative f, Jensen gives Q(f)^p <= Q(f^p)
    rng = np.random.default_rng(5)
    for _ in range(25):
        g_coeffs = {k: c for k, c in enumerate(rng.uniform(-1, 1, 4), start=1)}

        def f(x):
            g = qd.sine_poly_values(g_coeffs, x)
            return g * g

        def f_sq(x):
            g = qd.sine_poly_values(g_coeffs, x)
            return g**4

        q1 = kaplan.q_by_quadrature(f, 8)
        q2 = kaplan.q_by_quadrature(f_sq, 16)
        assert q1**2 <= q2 + 1e-12


def test_comparison_solution_properties():
    # fixed point at 1, decay below it
    for t in (0.1, 1.0, 3.0):
        assert abs(kaplan.comparison_solution(1.0, 2, t) - 1.0) <= 1e-9
    vals = [kaplan.comparison_solution(0.5, 2, t) for t in (0.0, 0.5, 1.5, 3.0)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    # past the blow-up time the value does not exist
    with pytest.raises(OutOfDomainError):
        kaplan.comparison_solution(2.0, 2, 1.0)


def test_comparison_blowup_matches_closed_form():
    q0 = 2.0 / heat.C_K
    closed = kaplan.kaplan_time(q0, 2)
    by_ode = kaplan.comparison_blowup_time(q0, 2)
    assert abs(closed - by_ode) <= 1e-4


def test_iteration_converges_from_below():
    q0 = 2.0 / heat.C_K
    t = 0.5
    target = kaplan.comparison_solution(q0, 2, t)
    prev = None
    for n in (0, 2, 4, 8):
        val = kaplan.sn_iteration(q0, 2, n, t)
        if prev is not None:
            assert val >= prev - 1e-12
        prev = val
    assert abs(prev - target) <= 1e-3
    # base case is the pure decay term
    assert abs(kaplan.sn_iteration(q0, 2, 0, t) - q0 * math.exp(-t)) <= 1e-12


def test_nonnegativity_check():
    ok = kaplan.check_nonneg_sine_coeffs({1: 1.0})
    assert ok.passed and ok.min_value >= -1e-12
    bad = kaplan.check_nonneg_sine_coeffs({2: 1.0})
    assert not bad.passed and bad.min_value < -0.5
