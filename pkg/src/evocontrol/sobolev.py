"""Numerical evidence around the multiplication inequality on (0, pi).

Three independent pieces:

* a lower bound on the sharp constant of ||fg|| <= L^{-1}... rather, on
  the best constant L with ||f^2|| >= L ||f||^2, obtained by maximizing
  the ratio ||f_lam^2|| / ||f_lam||^2 over the kink family
  f_lam(x) = e^{-lam |x - pi/2|} - e^{-lam pi/2};
* the convolution constant C(k) = (1/2pi) int dh / ((1+(k-h)^2)(1+h^2)),
  which a residue computation puts at exactly 1/(4+k^2) and which drives
  the upper bound ||fg|| <= ||f|| ||g||;
* randomized spot checks of that upper bound on trigonometric
  polynomials, where both sides are computable to machine precision.

Norms are always the H1 norm: L2 of the function plus L2 of the almost
everywhere derivative. The family has a derivative kink at pi/2, so all
quadrature splits the interval there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.integrate import quad as _quad

from . import heat
from . import quadrature as qd

_SERIES_SWITCH = 0.2
_SERIES_TERMS = 28
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# the kink family: closed forms


def family_values(lam: float, x: np.ndarray) -> np.ndarray:
    """f_lam on (0, pi), evaluated stably for every lam > 0."""
    c = math.exp(-lam * math.pi / 2.0)
    v = math.pi / 2.0 - np.abs(np.asarray(x) - math.pi / 2.0)
    return c * np.expm1(lam * v)


def _exp_binom_integral(j: int, m: int, lam: float) -> float:
    """int_0^{pi/2} (e^{lam v} - 1)^j e^{m lam v} dv.

    The binomial expansion cancels catastrophically for small lam, so a
    truncated power series in v takes over below the switch point.
    """
    half = math.pi / 2.0
    if lam >= _SERIES_SWITCH:
        total = 0.0
        for i in range(j + 1):
            n = i + m
            term = half if n == 0 else math.expm1(n * lam * half) / (n * lam)
            total += math.comb(j, i) * (-1.0) ** (j - i) * term
        return total
    base = np.array(
        [0.0] + [lam**n / math.factorial(n) for n in range(1, _SERIES_TERMS)]
    )
    expm = np.array(
        [(m * lam) ** n / math.factorial(n) for n in range(_SERIES_TERMS)]
    )
    poly = npoly.polymul(npoly.polypow(base, j) if j else [1.0], expm)
    degrees = np.arange(len(poly), dtype=float)
    return float(np.sum(poly * half ** (degrees + 1) / (degrees + 1)))


def closed_norm_sq(lam: float) -> float:
    """||f_lam||^2 in closed form (both integrals elementary)."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    c2 = math.exp(-lam * math.pi)
    l2_part = 2.0 * c2 * _exp_binom_integral(2, 0, lam)
    deriv_part = 2.0 * lam * lam * c2 * _exp_binom_integral(0, 2, lam)
    return l2_part + deriv_part


def closed_square_norm_sq(lam: float) -> float:
    """||f_lam^2||^2 in closed form."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    c4 = math.exp(-2.0 * lam * math.pi)
    l2_part = 2.0 * c4 * _exp_binom_integral(4, 0, lam)
    deriv_part = 8.0 * lam * lam * c4 * _exp_binom_integral(2, 2, lam)
    return l2_part + deriv_part


def closed_ratio(lam: float) -> float:
    return math.sqrt(closed_square_norm_sq(lam)) / closed_norm_sq(lam)


# ---------------------------------------------------------------------------
# the kink family: quadrature route


def _split_quad(fn) -> float:
    half = math.pi / 2.0
    left, _ = _quad(fn, 0.0, half, epsabs=1e-14, epsrel=1e-13, limit=200)
    right, _ = _quad(fn, half, math.pi, epsabs=1e-14, epsrel=1e-13, limit=200)
    return left + right


def quad_norm_sq(lam: float) -> float:
    """||f_lam||^2 by adaptive quadrature split at the kink."""
    c = math.exp(-lam * math.pi / 2.0)

    def f_sq(x):
        v = math.pi / 2.0 - abs(x - math.pi / 2.0)
        return (c * math.expm1(lam * v)) ** 2

    def df_sq(x):
        return (lam * math.exp(-lam * abs(x - math.pi / 2.0))) ** 2

    return _split_quad(f_sq) + _split_quad(df_sq)


def quad_square_norm_sq(lam: float) -> float:
    """||f_lam^2||^2 by adaptive quadrature split at the kink."""
    c = math.exp(-lam * math.pi / 2.0)

    def f4(x):
        v = math.pi / 2.0 - abs(x - math.pi / 2.0)
        return (c * math.expm1(lam * v)) ** 4

    def dsq(x):
        u = abs(x - math.pi / 2.0)
        v = math.pi / 2.0 - u
        f = c * math.expm1(lam * v)
        df = lam * math.exp(-lam * u)
        return 4.0 * f * f * df * df

    return _split_quad(f4) + _split_quad(dsq)


def ratio_lower_bound(lam: float) -> float:
    """||f_lam^2|| / ||f_lam||^2; every value is a valid lower bound on
    the sharp squaring constant."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    return math.sqrt(quad_square_norm_sq(lam)) / quad_norm_sq(lam)


def golden_section_max(fn, lo: float, hi: float, tol: float = 1e-4):
    """Plain golden-section maximization on [lo, hi]; the objective is
    assumed unimodal there. Returns (argmax, max)."""
    a, b = float(lo), float(hi)
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fn(x1), fn(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fn(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fn(x1)
    mid = 0.5 * (a + b)
    return mid, fn(mid)


def best_ratio(lo: float = 0.1, hi: float = 10.0, tol: float = 1e-4):
    """Maximize the squaring ratio over the family; returns (lam*, ratio*)."""
    return golden_section_max(ratio_lower_bound, lo, hi, tol)


# ---------------------------------------------------------------------------
# convolution constant


def convolution_constant(k: float) -> float:
    """(1/2pi) int_R dh / ((1+(k-h)^2)(1+h^2)), compactified by h = tan t
    so the Cauchy weight absorbs the substitution Jacobian exactly."""

    def integrand(theta):
        d = k - math.tan(theta)
        return 1.0 / (1.0 + d * d)

    peak = math.atan(k)
    val, err = _quad(
        integrand, -math.pi / 2.0, math.pi / 2.0,
        points=[peak], epsabs=1e-14, epsrel=1e-13, limit=200,
    )
    return val / (2.0 * math.pi)


def convolution_constant_exact(k: float) -> float:
    return 1.0 / (4.0 + k * k)


# ---------------------------------------------------------------------------
# randomized multiplication checks


@dataclass(frozen=True)
class AlgebraReport:
    seed: int
    trials: int
    violations: int
    max_ratio: float  # largest ||fg|| / (||f|| ||g||) seen
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {
            "spec_version": heat.SPEC_VERSION,
            "kind": "algebra_property",
            "seed": self.seed,
            "trials": self.trials,
            "violations": self.violations,
            "max_ratio": self.max_ratio,
            "tolerance": self.tolerance,
        }


def product_norm(f_coeffs: dict[int, float], g_coeffs: dict[int, float]) -> float:
    """H1 norm of the pointwise product of two sine polynomials, by
    quadrature exact for the product's trigonometric degree."""
    deg_f = max(f_coeffs, default=0)
    deg_g = max(g_coeffs, default=0)
    x, w = qd.nodes(2 * (deg_f + deg_g))
    fv = qd.sine_poly_values(f_coeffs, x)
    gv = qd.sine_poly_values(g_coeffs, x)
    dfv = qd.sine_poly_derivs(f_coeffs, x)
    dgv = qd.sine_poly_derivs(g_coeffs, x)
    prod = fv * gv
    dprod = dfv * gv + fv * dgv
    return math.sqrt(float(np.sum(w * (prod * prod + dprod * dprod))))


def metric_norm(coeffs: dict[int, float]) -> float:
    """H1 norm straight from sine coefficients: sqrt(sum (1+k^2) a_k^2)."""
    return math.sqrt(sum((1.0 + k * k) * a * a for k, a in coeffs.items()))


def algebra_property_test(seed: int = 0, trials: int = 10_000,
                          max_degree: int = 8,
                          tolerance: float = 1e-12) -> AlgebraReport:
    """Random sine polynomials, checking ||fg|| <= ||f|| ||g|| every time."""
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    violations = 0
    max_ratio = 0.0
    for _ in range(trials):
        fc = {k: c for k, c in enumerate(
            rng.uniform(-1.0, 1.0, max_degree), start=1)}
        gc = {k: c for k, c in enumerate(
            rng.uniform(-1.0, 1.0, max_degree), start=1)}
        bound = metric_norm(fc) * metric_norm(gc)
        ratio = product_norm(fc, gc) / bound
        max_ratio = max(max_ratio, ratio)
        if ratio > 1.0 + tolerance:
            violations += 1
    return AlgebraReport(
        seed=seed, trials=trials, violations=violations,
        max_ratio=max_ratio, tolerance=tolerance,
    )


def sobolev_report(seed: int = 0, trials: int = 10_000) -> dict:
    """JSON-ready summary: best family ratio, convolution spot checks,
    randomized multiplication result."""
    lam_star, ratio_star = best_ratio()
    algebra = algebra_property_test(seed=seed, trials=trials)
    checks = {
        f"C({k})": {
            "quadrature": convolution_constant(k),
            "exact": convolution_constant_exact(k),
        }
        for k in (0, 1, 3, 10)
    }
    return {
        "spec_version": heat.SPEC_VERSION,
        "kind": "sobolev_bounds",
        "lambda_star": lam_star,
        "ratio_star": ratio_star,
        "ratio_is_lower_bound": True,
        "convolution_checks": checks,
        "algebra": algebra.to_dict(),
    }
