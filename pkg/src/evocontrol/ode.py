"""Adaptive Runge-Kutta integration with blow-up detection.

The engine integrates initial value problems with an embedded
Dormand-Prince 5(4) pair and classifies every run into one of three
outcomes:

* ``reached_horizon`` : the trajectory exists on the whole time window;
* ``blow_up``         : the max-norm of the state escaped past a threshold
  (the escape time is bracketed to 1e-6), or the controller was forced
  below the minimum step while the state was growing;
* ``domain_exit``     : the right-hand side stopped returning finite
  values while the state was still moderate.

Everything is plain deterministic floating point: identical inputs
produce bit-identical accepted-step grids, which downstream code relies
on for reproducible CSV output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BracketError, EvocontrolError, OutOfDomainError

Rhs = Callable[[float, np.ndarray], np.ndarray]

REACHED_HORIZON = "reached_horizon"
BLOW_UP = "blow_up"
DOMAIN_EXIT = "domain_exit"

# Dormand-Prince 5(4) tableau (FSAL: the 7th stage of an accepted step is
# the first stage of the next one).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3 / 40, 9 / 40, 0.0, 0.0, 0.0, 0.0],
        [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0, 0.0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0, 0.0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0.0],
    ]
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4, applied to the stages to get the embedded error estimate
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)

_SAFETY = 0.9
_FACTOR_MIN = 0.2
_FACTOR_MAX = 5.0
_ORDER_EXP = 0.2  # 1 / (order of the advancing solution)
_MAX_STEPS = 20_000_000
_BRACKET_WIDTH = 5e-7  # escape-time bracket, kept below the 1e-6 contract


@dataclass
class IvpSpec:
    """Initial value problem plus the knobs the integrator honours.

    ``min_step`` defaults to 1e-12 times the window length; an accepted
    step below it is treated as a finite-time singularity.
    """

    dimension: int
    rhs: Rhs
    y0: np.ndarray
    t0: float
    horizon: float
    rtol: float = 1e-10
    atol: float = 1e-12
    blowup_threshold: float = 1e8
    min_step: float | None = None

    def __post_init__(self):
        self.y0 = np.asarray(self.y0, dtype=float)
        if self.y0.shape != (self.dimension,):
            raise ValueError(
                f"y0 has shape {self.y0.shape}, expected ({self.dimension},)"
            )
        if not self.horizon > self.t0:
            raise ValueError("horizon must exceed t0")
        if not (0.0 < self.rtol < 1.0 and 0.0 < self.atol < 1.0):
            raise ValueError("rtol and atol must lie in (0, 1)")
        if not np.all(np.isfinite(self.y0)):
            raise ValueError("y0 must be finite")
        if not self.blowup_threshold > float(np.max(np.abs(self.y0))):
            raise ValueError("blowup_threshold must exceed the initial max-norm")
        if self.min_step is None:
            self.min_step = 1e-12 * (self.horizon - self.t0)
        if not self.min_step > 0.0:
            raise ValueError("min_step must be positive")


@dataclass(frozen=True)
class IvpOutcome:
    """Result of :func:`integrate`.

    ``times``/``states``/``derivs`` hold every accepted step (plus, for a
    threshold escape, one final bracketing sample beyond the threshold),
    so the outcome doubles as a dense-output object via
    :meth:`interpolate`.
    """

    kind: str
    t_end: float
    times: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    spec: IvpSpec = field(repr=False, compare=False)

    @property
    def samples(self) -> list[tuple[float, np.ndarray]]:
        return [(float(t), s) for t, s in zip(self.times, self.states)]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def interpolate(self, t) -> np.ndarray:
        """Cubic Hermite interpolation on the accepted-step grid.

        Accepts a scalar or 1-d array of times inside
        ``[times[0], times[-1]]``; returns states with one row per query.
        """
        tq = np.atleast_1d(np.asarray(t, dtype=float))
        lo, hi = self.times[0], self.times[-1]
        slack = 1e-12 * max(1.0, abs(hi))
        if np.any(tq < lo - slack) or np.any(tq > hi + slack):
            raise OutOfDomainError(
                f"interpolation time outside [{lo}, {hi}]"
            )
        tq = np.clip(tq, lo, hi)
        idx = np.searchsorted(self.times, tq, side="right") - 1
        idx = np.clip(idx, 0, len(self.times) - 2)
        t0 = self.times[idx]
        t1 = self.times[idx + 1]
        h = t1 - t0
        s = (tq - t0) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s**2 * (3 - 2 * s)
        h11 = s**2 * (s - 1)
        y0 = self.states[idx]
        y1 = self.states[idx + 1]
        f0 = self.derivs[idx]
        f1 = self.derivs[idx + 1]
        out = (
            h00[:, None] * y0
            + h10[:, None] * (h[:, None] * f0)
            + h01[:, None] * y1
            + h11[:, None] * (h[:, None] * f1)
        )
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return out[0]
        return out

    def max_norm_history(self) -> np.ndarray:
        return np.max(np.abs(self.states), axis=1)


def _error_norm(err: np.ndarray, y_old: np.ndarray, y_new: np.ndarray,
                rtol: float, atol: float) -> float:
    # near a blow-up the ratio can overflow; an inf norm simply means
    # "reject the step", so silence the hardware flag
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    with np.errstate(over="ignore"):
        ratio = err / scale
        return float(np.sqrt(np.mean(ratio * ratio)))


def _initial_step(rhs: Rhs, t0: float, y0: np.ndarray, f0: np.ndarray,
                  rtol: float, atol: float, span: float) -> float:
    """Classical two-evaluation guess for the first step size."""
    scale = atol + rtol * np.abs(y0)
    d0 = float(np.sqrt(np.mean((y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((f0 / scale) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    if not np.all(np.isfinite(f1)):
        return max(h0 * 1e-3, 1e-14 * span)
    d2 = float(np.sqrt(np.mean(((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** _ORDER_EXP
    return min(100 * h0, h1, span)


def _rk_step(rhs: Rhs, t: float, y: np.ndarray, f: np.ndarray, h: float):
    """One Dormand-Prince step. Returns (y5, err_vec, f_new) or None
    if any stage evaluated to a non-finite value."""
    k = np.empty((7, y.size))
    k[0] = f
    for i in range(1, 6):
        yi = y + h * (k[:i].T @ _A[i, :i])
        ki = rhs(t + _C[i] * h, yi)
        if not np.all(np.isfinite(ki)):
            return None
        k[i] = ki
    y5 = y + h * (k[:6].T @ _B5[:6])
    if not np.all(np.isfinite(y5)):
        return None
    k6 = rhs(t + h, y5)
    if not np.all(np.isfinite(k6)):
        return None
    k[6] = k6
    err = h * (k.T @ _E)
    return y5, err, k6


def _refine_escape(rhs: Rhs, t: float, y: np.ndarray, f: np.ndarray,
                   h: float, threshold: float):
    """Bracket the threshold crossing inside an accepted step.

    The crossing is known to occur in (t, t+h]. A single fifth-order step
    from (t, y) is accurate over any sub-length of h, so plain bisection
    on the sub-step end time localises the escape. Returns
    (t_escape, y_escape) with the escape state strictly past the
    threshold and t_escape within _BRACKET_WIDTH of the true crossing.
    """
    lo, hi = 0.0, h
    y_hi = None
    while hi - lo > _BRACKET_WIDTH:
        mid = 0.5 * (lo + hi)
        trial = _rk_step(rhs, t, y, f, mid)
        if trial is None or float(np.max(np.abs(trial[0]))) > threshold:
            hi = mid
            y_hi = None if trial is None else trial[0]
        else:
            lo = mid
    if y_hi is None:
        trial = _rk_step(rhs, t, y, f, hi)
        y_hi = trial[0] if trial is not None else y * np.inf
    return t + hi, y_hi


def integrate(spec: IvpSpec) -> IvpOutcome:
    """Integrate an initial value problem and classify the outcome.

    Accepted steps are appended to the sample arrays as they happen; the
    run ends at the horizon, at a bracketed blow-up, or at a domain exit.
    """
    rhs = spec.rhs
    t = float(spec.t0)
    y = spec.y0.astype(float).copy()
    f = np.asarray(rhs(t, y), dtype=float)
    if not np.all(np.isfinite(f)):
        raise ValueError("rhs is not finite at the initial point")

    times = [t]
    states = [y.copy()]
    derivs = [f.copy()]

    span = spec.horizon - spec.t0
    h = _initial_step(rhs, t, y, f, spec.rtol, spec.atol, span)
    saw_nonfinite = False

    def _finish(kind: str, t_end: float) -> IvpOutcome:
        return IvpOutcome(
            kind=kind,
            t_end=float(t_end),
            times=np.asarray(times),
            states=np.asarray(states),
            derivs=np.asarray(derivs),
            spec=spec,
        )

    for _ in range(_MAX_STEPS):
        if t >= spec.horizon:
            return _finish(REACHED_HORIZON, spec.horizon)
        clamped = False
        if t + h >= spec.horizon:
            h = spec.horizon - t
            clamped = True

        if h < spec.min_step:
            if saw_nonfinite and float(np.max(np.abs(y))) <= 0.5 * spec.blowup_threshold:
                return _finish(DOMAIN_EXIT, t)
            return _finish(BLOW_UP, t)

        trial = _rk_step(rhs, t, y, f, h)
        if trial is None:
            saw_nonfinite = True
            h *= 0.25
            continue
        y_new, err_vec, f_new = trial
        err = _error_norm(err_vec, y, y_new, spec.rtol, spec.atol)
        if not np.isfinite(err):
            h *= 0.25
            continue

        if err <= 1.0:
            t_new = spec.horizon if clamped else t + h
            if float(np.max(np.abs(y_new))) > spec.blowup_threshold:
                t_esc, y_esc = _refine_escape(
                    rhs, t, y, f, t_new - t, spec.blowup_threshold
                )
                f_esc = np.asarray(rhs(t_esc, y_esc), dtype=float)
                if not np.all(np.isfinite(f_esc)):
                    f_esc = np.zeros_like(y_esc)
                times.append(t_esc)
                states.append(y_esc)
                derivs.append(f_esc)
                return _finish(BLOW_UP, t_esc)
            t, y, f = t_new, y_new, f_new
            times.append(t)
            states.append(y.copy())
            derivs.append(f.copy())
            saw_nonfinite = False
            factor = _SAFETY * err ** (-_ORDER_EXP) if err > 0.0 else _FACTOR_MAX
            h *= min(_FACTOR_MAX, max(_FACTOR_MIN, factor))
        else:
            factor = _SAFETY * err ** (-_ORDER_EXP)
            h *= min(1.0, max(_FACTOR_MIN, factor))
    raise EvocontrolError("step budget exhausted")


def norm_nonincreasing_tail(outcome: IvpOutcome, fraction: float = 0.1,
                            rel_slack: float = 1e-8,
                            abs_slack: float | None = None) -> bool:
    """True when the max-norm is non-increasing over the trailing part
    of the window (used as the operational notion of a settled, global
    trajectory).

    ``abs_slack`` (default 100 times the run's atol) absorbs roundoff
    wiggle once a decayed trajectory sits at the integrator's absolute
    noise floor.
    """
    if outcome.kind != REACHED_HORIZON:
        return False
    if abs_slack is None:
        abs_slack = 100.0 * outcome.spec.atol
    t_start = outcome.t_end - fraction * (outcome.t_end - outcome.times[0])
    mask = outcome.times >= t_start
    norms = outcome.max_norm_history()[mask]
    if norms.size < 2:
        return True
    allowed = norms[:-1] * (1.0 + rel_slack) + abs_slack
    return bool(np.all(norms[1:] <= allowed))


def bisect_parameter(
    family: Callable[[float], IvpSpec],
    lo: float,
    hi: float,
    tol: float,
    classify: Callable[[IvpOutcome], bool] | None = None,
) -> float:
    """Locate the parameter value where the run outcome flips.

    ``family`` maps a scalar parameter to an :class:`IvpSpec`;
    ``classify`` maps an outcome to a boolean (default: blow-up). The two
    endpoints must classify differently, otherwise a
    :class:`BracketError` is raised. Returns the bracket midpoint once
    its half-width is below ``tol``.
    """
    if classify is None:
        classify = lambda outcome: outcome.kind == BLOW_UP
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if lo == hi:
        return lo
    flag_lo = classify(integrate(family(lo)))
    flag_hi = classify(integrate(family(hi)))
    if flag_lo == flag_hi:
        raise BracketError(
            f"outcomes agree at both endpoints ({lo} and {hi}); no crossing inside"
        )
    a, b = float(lo), float(hi)
    while abs(b - a) > 2.0 * tol:
        mid = 0.5 * (a + b)
        if classify(integrate(family(mid))) == flag_lo:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)
