"""Spectral reduction assembly.

The two-mode reduction of the quadratic problem has hand-computable
coefficients (sine product integrals over (0, pi), reduced with the
product-to-sum identities). The quadrature assembly must reproduce all
eleven of them to 1e-12 absolute.
"""

import itertools
import math

import numpy as np
import pytest

from evocontrol import galerkin as gk
from evocontrol import quadrature as qd

_SQ = math.sqrt(2.0 / math.pi**3)
_PI = math.pi

# coefficients of the reduced field on modes (1, 3), power 2:
# X^1 = -a1 + sq (8/3 a1^2 - 16/15 a1 a3 + 72/35 a3^2)
# X^3 = -9 a3 + sq (-8/15 a1^2 + 144/35 a1 a3 + 8/9 a3^2)
_FIELD_COEFFS = {
    (0, (1, 1)): _SQ * 8.0 / 3.0,
    (0, (1, 3)): -_SQ * 16.0 / 15.0,
    (0, (3, 3)): _SQ * 72.0 / 35.0,
    (1, (1, 1)): -_SQ * 8.0 / 15.0,
    (1, (1, 3)): _SQ * 144.0 / 35.0,
    (1, (3, 3)): _SQ * 8.0 / 9.0,
}

# quartic coefficients of the squared residual on the same span
_EPS_SQ_COEFFS = {
    (4, 0): 7.0 / (2.0 * _PI) - 512.0 / (15.0 * _PI**3),
    (3, 1): 34816.0 / (315.0 * _PI**3) - 10.0 / _PI,
    (2, 2): 46.0 / _PI - 12172288.0 / (33075.0 * _PI**3),
    (1, 3): -22528.0 / (175.0 * _PI**3),
    (0, 4): 39.0 / (2.0 * _PI) - 3247616.0 / (99225.0 * _PI**3),
}


def test_metric_identity_through_mode_twelve():
    # roundoff scales with k*l through the derivative products, hence
    # the slightly-above-machine absolute budget
    x, w = qd.nodes(24)
    for k in range(1, 13):
        for l in range(1, 13):
            val = qd.h1_inner(
                qd.sine_values(k, x), qd.sine_derivs(k, x),
                qd.sine_values(l, x), qd.sine_derivs(l, x), w,
            )
            expected = (1.0 + k * k) if k == l else 0.0
            assert abs(val - expected) <= 5e-12


def test_two_mode_field_coefficients():
    model = gk.build_model((1, 3), 2)
    tensor = model.tensor
    for (row, mono), expected in _FIELD_COEFFS.items():
        col = tensor.monomials.index(mono)
        got = tensor.multiplicities[col] * tensor.matrix[row, col]
        assert abs(got - expected) <= 1e-12
    lam = model.basis.eigenvalues
    assert lam[0] == -1.0 and lam[1] == -9.0


def test_two_mode_residual_coefficients():
    model = gk.build_model((1, 3), 2)
    form = model.eps_form
    mult = form.multiplicities
    G = (mult[:, None] * mult[None, :]) * form.gram
    i11 = form.monomials.index((1, 1))
    i13 = form.monomials.index((1, 3))
    i33 = form.monomials.index((3, 3))
    got = {
        (4, 0): G[i11, i11],
        (3, 1): 2.0 * G[i11, i13],
        (2, 2): 2.0 * G[i11, i33] + G[i13, i13],
        (1, 3): 2.0 * G[i13, i33],
        (0, 4): G[i33, i33],
    }
    for key, expected in _EPS_SQ_COEFFS.items():
        assert abs(got[key] - expected) <= 1e-12


def test_two_mode_growth_estimator_formula():
    # ell(r) = r^2 + 2 sqrt(2 a1^2 + 10 a3^2) r for the quadratic case
    model = gk.build_model((1, 3), 2)
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = rng.uniform(-2.0, 2.0, 2)
        r = rng.uniform(0.0, 3.0)
        expected = r * r + 2.0 * math.sqrt(2 * a[0] ** 2 + 10 * a[1] ** 2) * r
        assert abs(gk.ell_hat(model, a, r) - expected) <= 1e-12
        growth = gk.growth_estimator(model, a)
        assert abs(growth.ell(r, 0.0) - expected) <= 1e-12


def test_residual_form_nonnegative_everywhere():
    rng = np.random.default_rng(20)
    for indices, p in itertools.product(
        [(1, 2), (1, 3), (1, 2, 3), (1, 3, 5, 7)], [2, 3]
    ):
        model = gk.build_model(indices, p)
        coords = rng.uniform(-3.0, 3.0, size=(2500, len(indices)))
        vals = model.eps_form.value_many(coords, indices)
        assert float(np.min(vals)) >= -1e-9


def test_span_invariance_defects_vanish():
    for indices, p in [((1, 3), 2), ((1, 2, 3), 2), ((1, 2), 3)]:
        quad_block, cross_block = gk.eigen_invariance_defect(indices, p)
        assert quad_block <= 1e-12
        assert cross_block <= 1e-12


def test_projected_field_minimizes_the_residual():
    rng = np.random.default_rng(8)
    for indices, p in [((1, 3), 2), ((1, 2, 3), 2), ((1, 2), 3)]:
        model = gk.build_model(indices, p)
        for _ in range(10):
            a = rng.uniform(-1.5, 1.5, len(indices))
            v = gk.vector_field(model, a)
            best = gk.residual_norm(model, a, v)
            eps = gk.epsilon_hat(model, a)
            assert abs(best - eps) <= 1e-10 * max(1.0, eps)
            perturbed = gk.residual_norm(model, a, v + rng.uniform(0.1, 0.5, v.size))
            assert perturbed >= eps - 1e-10


def test_initial_coordinates_and_missed_mass():
    basis = gk.GalerkinBasis((1, 3))
    a0, missed = gk.initial_coords(basis, {1: 2.5})
    assert np.allclose(a0, [2.5, 0.0]) and missed == 0.0
    a0, missed = gk.initial_coords(basis, {1: 1.0, 2: 0.5})
    assert abs(missed - math.sqrt(5.0) * 0.5) <= 1e-15


def test_basis_validation():
    with pytest.raises(ValueError):
        gk.GalerkinBasis((0, 1))
    with pytest.raises(ValueError):
        gk.GalerkinBasis((1, 1))
    basis = gk.GalerkinBasis((3, 1))
    assert basis.indices == (1, 3)
    a = np.array([1.0, 2.0])
    assert abs(basis.norm(a) - math.sqrt(2.0 + 40.0)) <= 1e-15
