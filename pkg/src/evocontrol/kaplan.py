"""Blow-up upper bounds from the ground-mode projection.

For u_t = u_xx + u^p on (0, pi) with Dirichlet conditions, project the
solution onto the ground mode:

    Q(f) = (1/2) int_0^pi sin(x) f(x) dx.

For a nonnegative datum with Q0 = Q(f0) > 1, q(t) = Q(phi(t)) dominates
the solution S of the scalar comparison problem

    dS/dt = S (S^(p-1) - 1),    S(0) = Q0,

which escapes to infinity at

    t_k = -(1/(p-1)) log(1 - Q0^(1-p)),

so the solution itself cannot exist past t_k. The module exposes the
closed form, an independent quadrature evaluation of the underlying
improper integral, the comparison ODE, and the iteration scheme whose
monotone limit is the comparison solution.

Nonnegativity of the datum is a hypothesis, not something this module
can prove; :func:`check_nonneg_sine_coeffs` records the minimum over a
fixed grid together with the grid resolution so callers can carry the
evidence around explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy.integrate import quad as _scipy_quad

from . import ode
from . import quadrature as quad
from .errors import NotApplicableError, OutOfDomainError, QuadratureError

# Q(c * sqrt(2/pi) sin x) = c * sqrt(2 pi)/4: only the ground mode survives
_Q_FACTOR = math.sqrt(2.0 * math.pi) / 4.0


@dataclass(frozen=True)
class NonnegCheck:
    """Minimum of a datum over a uniform grid; evidence, not proof."""

    min_value: float
    grid_points: int

    @property
    def passed(self) -> bool:
        return self.min_value >= 0.0


@dataclass(frozen=True)
class KaplanInput:
    """Ground-mode mass Q0 and power p, with optional recorded
    nonnegativity evidence for the datum."""

    q0: float
    p: int
    nonneg: NonnegCheck | None = None

    def __post_init__(self):
        if not (isinstance(self.p, (int, np.integer)) and self.p >= 2):
            raise ValueError("p must be an integer >= 2")
        if not self.q0 >= 0.0:
            raise ValueError("q0 must be >= 0")

    def time(self) -> float:
        return kaplan_time(self.q0, self.p)


def q_of_sine_coeffs(coeffs: Mapping[int, float]) -> float:
    """Ground-mode projection of a sine polynomial (all modes but the
    first integrate to zero against sin)."""
    return float(coeffs.get(1, 0.0)) * _Q_FACTOR


def q_by_quadrature(f: Callable[[np.ndarray], np.ndarray],
                    trig_degree: int) -> float:
    """Q(f) for a trig-polynomial integrand of known degree."""
    x, w = quad.nodes(trig_degree + 1)
    return 0.5 * float(np.dot(w, np.sin(x) * f(x)))


def check_nonneg_sine_coeffs(coeffs: Mapping[int, float],
                             grid_points: int = 4096) -> NonnegCheck:
    x = np.linspace(0.0, np.pi, grid_points)
    vals = quad.sine_poly_values(dict(coeffs), x)
    return NonnegCheck(min_value=float(np.min(vals)), grid_points=grid_points)


def kaplan_time(q0: float, p: int) -> float:
    """Closed-form blow-up upper bound; only defined for q0 > 1."""
    if not (isinstance(p, (int, np.integer)) and p >= 2):
        raise ValueError("p must be an integer >= 2")
    if not q0 > 1.0:
        raise NotApplicableError(
            f"the blow-up criterion needs Q0 > 1, got {q0}"
        )
    return -math.log1p(-(q0 ** (1 - p))) / (p - 1)


def kaplan_time_by_quadrature(q0: float, p: int, tol: float = 1e-10) -> float:
    """The same bound as the improper integral

        t_k = int_{Q0}^{inf} dr / (r (r^(p-1) - 1)),

    evaluated numerically. The substitution r = Q0/(1-v) compactifies
    the domain to v in [0, 1); the transformed integrand

        (1-v)^(p-2) / (Q0^(p-1) - (1-v)^(p-1))

    is bounded there, with a steep (integrable) layer at v = 0 when Q0
    is close to 1, which the adaptive rule resolves by subdivision.
    """
    if not q0 > 1.0:
        raise NotApplicableError(
            f"the blow-up criterion needs Q0 > 1, got {q0}"
        )
    qp = q0 ** (p - 1)

    def integrand(v: float) -> float:
        om = 1.0 - v
        return om ** (p - 2) / (qp - om ** (p - 1))

    value, abserr = _scipy_quad(
        integrand, 0.0, 1.0, epsabs=tol * 1e-2, epsrel=tol, limit=800
    )
    if abserr > max(1e3 * tol * 1e-2, 1e-6 * abs(value)):
        raise QuadratureError("blow-up integral did not converge", abserr)
    return value


def comparison_rhs(S: float, p: int) -> float:
    return S**p - S


def comparison_solution(q0: float, p: int, t: float,
                        rtol: float = 1e-12, atol: float = 1e-13) -> float:
    """Comparison ODE solution S(t) by adaptive integration.

    Raises :class:`OutOfDomainError` when t is past the escape time of
    the comparison problem.
    """
    if t < 0.0:
        raise OutOfDomainError("comparison solution queried at negative time")
    if t == 0.0:
        return q0
    spec = ode.IvpSpec(
        dimension=1,
        rhs=lambda s, y: np.array([comparison_rhs(y[0], p)]),
        y0=np.array([q0]),
        t0=0.0,
        horizon=t,
        rtol=rtol,
        atol=atol,
    )
    outcome = ode.integrate(spec)
    if outcome.kind != ode.REACHED_HORIZON:
        raise OutOfDomainError(
            f"comparison solution escapes at t={outcome.t_end} <= {t}"
        )
    return float(outcome.final_state[0])


def comparison_blowup_time(q0: float, p: int, horizon: float = 100.0,
                           rtol: float = 1e-12, atol: float = 1e-13,
                           blowup_threshold: float = 1e8) -> float:
    """Escape time of the comparison ODE by direct integration (the
    dual route to :func:`kaplan_time`)."""
    if not q0 > 1.0:
        raise NotApplicableError(
            f"the comparison problem escapes only for Q0 > 1, got {q0}"
        )
    spec = ode.IvpSpec(
        dimension=1,
        rhs=lambda s, y: np.array([comparison_rhs(y[0], p)]),
        y0=np.array([q0]),
        t0=0.0,
        horizon=horizon,
        rtol=rtol,
        atol=atol,
        blowup_threshold=blowup_threshold,
    )
    outcome = ode.integrate(spec)
    if outcome.kind != ode.BLOW_UP:
        raise OutOfDomainError("comparison problem did not escape before the horizon")
    return outcome.t_end


def sn_iteration(q0: float, p: int, n: int, t: float,
                 grid_points: int = 2049) -> float:
    """n-th element of the monotone iteration converging to the
    comparison solution:

        S_0(t)     = exp(-t) Q0,
        S_{k+1}(t) = exp(-t) Q0 + int_0^t exp(-(t-s)) S_k(s)^p ds,

    evaluated on a uniform grid with fourth-order prefix quadrature.
    """
    if n < 0:
        raise ValueError("iteration index must be >= 0")
    if t < 0.0:
        raise OutOfDomainError("iteration queried at negative time")
    if t == 0.0:
        return q0
    grid = np.linspace(0.0, t, grid_points)
    h = grid[1] - grid[0]
    W = quad.prefix_weights(grid_points, h)
    decay = np.exp(-grid) * q0
    S = decay.copy()
    if n == 0:
        return float(S[-1])
    exp_grid = np.exp(grid)
    for _ in range(n):
        integrand = exp_grid * S**p
        integral = W @ integrand
        S = decay + np.exp(-grid) * integral
    return float(S[-1])
