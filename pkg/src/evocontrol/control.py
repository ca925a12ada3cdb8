"""Scalar control equations certifying error tubes around approximate flows.

Given a decaying-exponential bound ``u(t) = U exp(-B t)`` on the linear
propagator, a datum error ``delta``, a differential error ``eps(t)`` and
a polynomial growth estimator ``ell(r, t) = sum_j c_j(t) r**j``, the
scalar problem

    dR/dt = U eps(t) + U ell(R, t) - B R,      R(t0) = U delta,

dominates the distance between the approximate and the exact trajectory
for as long as R exists and stays inside the growth radius. For the pure
power nonlinearity (single coefficient ``P`` on ``r**p`` and ``eps = 0``)
both the lifespan guarantee and the tube radius have closed forms, which
this module exposes as :func:`tn_closed` and :func:`r_closed`.

Infinite lifespans are represented by ``math.inf`` and only ever
compared, never fed into arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from . import ode
from .errors import GrowthDomainError, OutOfDomainError, QuadratureError


@dataclass(frozen=True)
class SemigroupEstimator:
    """Exponential bound ``u(t) = U exp(-B t)`` on the linear flow, U >= 1."""

    U: float
    B: float

    def __post_init__(self):
        if not self.U >= 1.0:
            raise ValueError("U must be >= 1")

    def value(self, t: float) -> float:
        return self.U * math.exp(-self.B * t)


@dataclass(frozen=True)
class ErrorEstimators:
    """Datum error (a number) and differential error (a function of time)."""

    delta: float
    eps: Callable[[float], float]

    def __post_init__(self):
        if not self.delta >= 0.0:
            raise ValueError("delta must be >= 0")

    @staticmethod
    def constant(delta: float, eps_value: float = 0.0) -> "ErrorEstimators":
        return ErrorEstimators(delta=delta, eps=lambda t: eps_value)


@dataclass(frozen=True)
class PolynomialGrowth:
    """Growth estimator ``ell(r, t) = sum_{j=1..p} c_j(t) r**j``.

    ``coeffs`` maps a time to the sequence (c_1(t), ..., c_p(t)); all
    coefficients must be nonnegative. ``radius`` is the validity radius
    in r (``math.inf`` for globally valid estimators). There is no
    constant term, so ell(0, t) = 0 by construction.
    """

    coeffs: Callable[[float], Sequence[float]]
    radius: float = math.inf

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("radius must be positive")

    def ell(self, r: float, t: float) -> float:
        if r >= self.radius:
            raise GrowthDomainError(
                f"growth estimator evaluated at r={r} >= radius={self.radius}"
            )
        c = np.asarray(self.coeffs(t), dtype=float)
        if c.size and float(np.min(c)) < 0.0:
            raise ValueError("growth coefficients must be nonnegative")
        # Horner evaluation of c_1 r + ... + c_p r^p
        acc = 0.0
        for cj in c[::-1]:
            acc = (acc + cj) * r
        return acc

    @staticmethod
    def from_constants(constants: Sequence[float],
                       radius: float = math.inf) -> "PolynomialGrowth":
        frozen = tuple(float(c) for c in constants)
        if any(c < 0.0 for c in frozen):
            raise ValueError("growth coefficients must be nonnegative")
        return PolynomialGrowth(coeffs=lambda t: frozen, radius=radius)

    @staticmethod
    def pure_power(P: float, p: int, radius: float = math.inf) -> "PolynomialGrowth":
        if p < 2:
            raise ValueError("power must be >= 2")
        constants = [0.0] * (p - 1) + [float(P)]
        return PolynomialGrowth.from_constants(constants, radius)


@dataclass(frozen=True)
class ControlProblem:
    semigroup: SemigroupEstimator
    errors: ErrorEstimators
    growth: PolynomialGrowth
    t0: float
    horizon: float

    def __post_init__(self):
        if not self.horizon > self.t0:
            raise ValueError("horizon must exceed t0")

    @property
    def r0(self) -> float:
        return self.semigroup.U * self.errors.delta


@dataclass(frozen=True)
class ClosedFormBound:
    """Lifespan guarantee plus the tube radius curve for the pure-power case."""

    tn: float
    radius: Callable[[float], float] = field(compare=False)


def control_rhs(problem: ControlProblem, R: float, t: float) -> float:
    """Right-hand side U eps(t) + U ell(R, t) - B R of the control equation.

    Raises :class:`GrowthDomainError` when R is at or past the growth
    radius (the certificate is void there).
    """
    U = problem.semigroup.U
    eps_t = problem.errors.eps(t)
    if eps_t < 0.0:
        raise ValueError("differential error estimator must be nonnegative")
    return U * eps_t + U * problem.growth.ell(R, t) - problem.semigroup.B * R


def integral_estimator_eval(problem: ControlProblem, t: float,
                            tol: float = 1e-12) -> float:
    """Integral error estimator

        E(t) = u(t - t0) delta + int_{t0}^{t} u(t - s) eps(s) ds

    evaluated by adaptive quadrature with absolute tolerance ``tol``.
    """
    if t < problem.t0:
        raise OutOfDomainError("estimator evaluated before t0")
    sg = problem.semigroup
    head = sg.value(t - problem.t0) * problem.errors.delta
    if t == problem.t0:
        return head
    integrand = lambda s: sg.value(t - s) * problem.errors.eps(s)
    value, abserr = quad(integrand, problem.t0, t, epsabs=tol,
                         epsrel=1e-10, limit=400)
    if abserr > 1e3 * tol:
        raise QuadratureError("integral error estimator did not converge", abserr)
    return head + value


def _lifespan_kernel(u: float, B: float) -> float:
    """L_B(u) for 0 <= B < u: the logarithm form, with the B -> 0 limit
    1/u reproduced exactly by log1p."""
    if B == 0.0:
        return 1.0 / u
    return -math.log1p(-B / u) / B


def _growth_kernel(u: float, B: float) -> float:
    """E_B(u) = (exp(B u) - 1)/B, equal to u at B = 0 (expm1 keeps the
    small-B regime at machine accuracy)."""
    if B == 0.0:
        return u
    return math.expm1(B * u) / B


def tn_closed(U: float, B: float, P: float, p: int, norm_f0: float) -> float:
    """Guaranteed lifespan for the pure-power control problem.

    Returns ``math.inf`` when the datum is at or below the critical size
    (P U**p norm_f0**(p-1) <= B), otherwise the finite closed-form value.
    """
    _check_pure_power_args(U, B, P, p, norm_f0)
    u_val = P * U**p * norm_f0 ** (p - 1)
    if u_val <= B:
        return math.inf
    return _lifespan_kernel(u_val, B) / (p - 1)


def r_closed(U: float, B: float, P: float, p: int, norm_f0: float,
             t: float) -> float:
    """Tube radius at time t for the pure-power control problem.

    Valid on [0, tn_closed(...)); raises :class:`OutOfDomainError` at or
    past the lifespan.
    """
    _check_pure_power_args(U, B, P, p, norm_f0)
    if t < 0.0:
        raise OutOfDomainError("tube radius queried at negative time")
    tn = tn_closed(U, B, P, p, norm_f0)
    if t >= tn:
        raise OutOfDomainError(f"tube radius queried at t={t} beyond lifespan {tn}")
    u_val = P * U**p * norm_f0 ** (p - 1)
    denom = 1.0 - (u_val - B) * _growth_kernel((p - 1) * t, B)
    return U * norm_f0 / denom ** (1.0 / (p - 1))


def closed_form_bound(U: float, B: float, P: float, p: int,
                      norm_f0: float) -> ClosedFormBound:
    tn = tn_closed(U, B, P, p, norm_f0)
    return ClosedFormBound(
        tn=tn, radius=lambda t: r_closed(U, B, P, p, norm_f0, t)
    )


def _check_pure_power_args(U, B, P, p, norm_f0):
    if not U >= 1.0:
        raise ValueError("U must be >= 1")
    if not B >= 0.0:
        raise ValueError("B must be >= 0 for the closed forms")
    if not P >= 0.0:
        raise ValueError("P must be >= 0")
    if not (isinstance(p, (int, np.integer)) and p >= 2):
        raise ValueError("p must be an integer >= 2")
    if not norm_f0 >= 0.0:
        raise ValueError("norm_f0 must be >= 0")


def as_ivp(problem: ControlProblem, rtol: float = 1e-10, atol: float = 1e-12,
           blowup_threshold: float = 1e8) -> ode.IvpSpec:
    """Wrap a control problem as a one-dimensional IVP.

    Leaving the growth radius is signalled to the integrator by a
    non-finite right-hand side, so such runs end in a domain exit rather
    than an exception mid-step.
    """
    radius = problem.growth.radius

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        R = y[0]
        if R >= radius:
            return np.array([math.inf])
        return np.array([control_rhs(problem, R, t)])

    return ode.IvpSpec(
        dimension=1,
        rhs=rhs,
        y0=np.array([problem.r0]),
        t0=problem.t0,
        horizon=problem.horizon,
        rtol=rtol,
        atol=atol,
        blowup_threshold=blowup_threshold,
    )
