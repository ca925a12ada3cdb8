"""Certified existence windows for u_t = u_xx + u^p with datum A s_1.

The module couples the spectral reduction of :mod:`evocontrol.galerkin`
with the scalar control equation of :mod:`evocontrol.control`: the state
is (a, R) where a are the reduced coordinates and R the error-tube
radius, with

    da^k/dt = X^k(a),      dR/dt = eps_hat(a) + ell_hat(a, R) - R,

from a(0) = (A, 0, ...), R(0) = 0. A finite escape time of this system
(the reduced existence time, t_g) is a certified lower bound for the
true existence time; for A past the positivity threshold C_K the
spectral projection onto the ground mode supplies the upper bound t_k
(see :mod:`evocontrol.kaplan`). Rescaling state and time by A removes
the amplitude from the problem and yields the large-A asymptotics of
both bounds.

Amplitude thresholds, all computed rather than hard-coded:

* ``C_N``: ``||A s_1|| = A / C_N``, so the zero-approximation bound
  already gives global existence for A <= C_N;
* ``C_K``: ``Q(A s_1) = A / C_K`` with Q the ground-mode projection, so
  the blow-up criterion applies for A > C_K;
* :func:`critical_amplitude`: the reduced system's own global-existence
  threshold, located by bisection;
* :func:`rescaled_limit`: the escape time of the amplitude-free limit
  system, i.e. the coefficient in t_g ~ const/A.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import galerkin, ode
from .control import tn_closed, r_closed
from .errors import EvocontrolError, OutOfDomainError
from .kaplan import kaplan_time

C_N = math.sqrt(2.0) / 2.0
C_K = 2.0 * math.sqrt(2.0 / math.pi)

SPEC_VERSION = "1.0"

_UNIFORM_SAMPLES = 512
_REFINE_SAMPLES = 48


def semigroup_estimator_heat():
    """Propagator bound for the Dirichlet heat semigroup on (0, pi):
    U = 1, B = 1 (the ground eigenvalue)."""
    from .control import SemigroupEstimator

    return SemigroupEstimator(1.0, 1.0)


@dataclass(frozen=True)
class BasicBounds:
    """Zero-approximation bounds depending only on ||f0|| = A / C_N."""

    norm_f0: float
    tn: float
    radius: Callable[[float], float] = field(compare=False)


def basic_bounds(A: float, p: int = 2) -> BasicBounds:
    if not A >= 0.0:
        raise ValueError("A must be >= 0")
    norm_f0 = A / C_N
    tn = tn_closed(1.0, 1.0, 1.0, p, norm_f0)
    return BasicBounds(
        norm_f0=norm_f0,
        tn=tn,
        radius=lambda t: r_closed(1.0, 1.0, 1.0, p, norm_f0, t),
    )


@dataclass(frozen=True)
class HeatScenario:
    A: float
    p: int = 2
    modes: tuple[int, ...] = (1, 3)
    horizon: float = 50.0
    rtol: float = 1e-10
    atol: float = 1e-12
    blowup_threshold: float = 1e8

    def __post_init__(self):
        if not self.A >= 0.0:
            raise ValueError("A must be >= 0")
        if not (isinstance(self.p, (int, np.integer)) and self.p >= 2):
            raise ValueError("p must be an integer >= 2")
        modes = tuple(sorted(int(k) for k in self.modes))
        if 1 not in modes:
            raise ValueError("mode 1 must belong to the mode set")
        object.__setattr__(self, "modes", modes)
        if not self.horizon > 0.0:
            raise ValueError("horizon must be positive")


@dataclass(frozen=True)
class TrajectorySamples:
    modes: tuple[int, ...]
    times: np.ndarray
    coords: np.ndarray  # shape (n, len(modes))
    radius: np.ndarray
    norm_phi: np.ndarray
    ratio: np.ndarray


@dataclass(frozen=True)
class ScenarioResult:
    scenario: HeatScenario
    outcome_kind: str
    t_n: float
    t_g: float  # math.inf when the run reached the horizon
    t_k: float | None  # None when the blow-up criterion does not apply
    eta: float | None
    trajectory: TrajectorySamples


def _coupled_rhs(model: galerkin.GalerkinModel, linear_factor: float):
    """Vectorized right-hand side for the (a, R) system.

    ``linear_factor`` scales the linear (dissipative) terms: 1 for the
    physical system, 1/A for the rescaled one, 0 for its limit.
    """
    basis = model.basis
    m = len(basis.indices)
    p = model.p
    lam = linear_factor * basis.eigenvalues
    metric = basis.metric_diag
    pos = {k: i for i, k in enumerate(basis.indices)}
    mono_pos = np.array(
        [[pos[l] for l in L] for L in model.tensor.monomials], dtype=int
    )
    mult = model.tensor.multiplicities
    tensor_mat = model.tensor.matrix * mult
    gram2 = (mult[:, None] * mult[None, :]) * model.eps_form.gram

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        a = y[:m]
        R = y[m]
        mono = np.prod(a[mono_pos], axis=1)
        xa = lam * a + tensor_mat @ mono
        eps_sq = float(mono @ gram2 @ mono)
        eps = math.sqrt(eps_sq) if eps_sq > 0.0 else 0.0
        norm = math.sqrt(float(metric @ (a * a)))
        ell = (norm + R) ** p - norm**p if R > 0.0 else 0.0
        out = np.empty(m + 1)
        out[:m] = xa
        out[m] = eps + ell - linear_factor * R
        return out

    return rhs


def assemble_coupled_system(
    scenario: HeatScenario,
    model: galerkin.GalerkinModel | None = None,
) -> tuple[ode.IvpSpec, galerkin.GalerkinModel]:
    """IVP for the coupled (a, R) system of a scenario.

    A prebuilt model for the same mode set and power may be passed to
    skip the quadrature assembly (bisection loops reuse it)."""
    if model is None:
        model = galerkin.build_model(scenario.modes, scenario.p)
    else:
        if model.basis.indices != scenario.modes or model.p != scenario.p:
            raise ValueError("prebuilt model does not match the scenario")
    m = len(scenario.modes)
    y0 = np.zeros(m + 1)
    y0[scenario.modes.index(1)] = scenario.A
    spec = ode.IvpSpec(
        dimension=m + 1,
        rhs=_coupled_rhs(model, 1.0),
        y0=y0,
        t0=0.0,
        horizon=scenario.horizon,
        rtol=scenario.rtol,
        atol=scenario.atol,
        blowup_threshold=scenario.blowup_threshold,
    )
    return spec, model


def _sample_times(outcome: ode.IvpOutcome) -> np.ndarray:
    """512 uniform sample times, extended by a geometric tail toward the
    end of the run when it ended in a blow-up."""
    t_last = float(outcome.times[-1])
    base = np.linspace(0.0, t_last, _UNIFORM_SAMPLES)
    if outcome.kind != ode.BLOW_UP or t_last <= 0.0:
        return base
    dt = t_last / (_UNIFORM_SAMPLES - 1)
    tail = t_last - dt * np.geomspace(1.0, 1e-6, _REFINE_SAMPLES)
    times = np.unique(np.concatenate([base, tail]))
    return times


def _build_trajectory(outcome: ode.IvpOutcome,
                      model: galerkin.GalerkinModel) -> TrajectorySamples:
    m = len(model.basis.indices)
    times = _sample_times(outcome)
    states = outcome.interpolate(times)
    coords = states[:, :m]
    radius = states[:, m]
    metric = model.basis.metric_diag
    norm_phi = np.sqrt(np.maximum(0.0, (coords * coords) @ metric))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(norm_phi > 0.0, radius / norm_phi, 0.0)
    return TrajectorySamples(
        modes=model.basis.indices,
        times=times,
        coords=coords,
        radius=radius,
        norm_phi=norm_phi,
        ratio=ratio,
    )


def run_scenario(scenario: HeatScenario,
                 model: galerkin.GalerkinModel | None = None) -> ScenarioResult:
    """Integrate the coupled system and collect the certified times.

    ``t_g`` is the escape time of the reduced system (infinite when the
    run reached the horizon still bounded); ``t_k`` is the closed-form
    blow-up upper bound, present only for A past the threshold C_K.
    """
    spec, model = assemble_coupled_system(scenario, model)
    outcome = ode.integrate(spec)
    if outcome.kind == ode.DOMAIN_EXIT:
        raise EvocontrolError(
            f"coupled system exited its domain at t={outcome.t_end}"
        )
    t_g = outcome.t_end if outcome.kind == ode.BLOW_UP else math.inf
    bounds = basic_bounds(scenario.A, scenario.p)
    t_k = None
    eta = None
    if scenario.A > C_K:
        t_k = kaplan_time(scenario.A / C_K, scenario.p)
        if math.isfinite(t_g):
            if t_g > t_k:
                raise EvocontrolError(
                    f"lower bound t_g={t_g} exceeds upper bound t_k={t_k}"
                )
            eta = (t_k - t_g) / (t_k + t_g)
    return ScenarioResult(
        scenario=scenario,
        outcome_kind=outcome.kind,
        t_n=bounds.tn,
        t_g=t_g,
        t_k=t_k,
        eta=eta,
        trajectory=_build_trajectory(outcome, model),
    )


def table_rows(amplitudes: Sequence[float], p: int = 2,
               modes: Sequence[int] = (1, 3), horizon: float = 50.0,
               rtol: float = 1e-10, atol: float = 1e-12,
               blowup_threshold: float = 1e8) -> list[ScenarioResult]:
    """Run one scenario per amplitude, sharing the assembled model."""
    modes = tuple(sorted(int(k) for k in modes))
    model = galerkin.build_model(modes, p)
    rows = []
    for A in amplitudes:
        scenario = HeatScenario(
            A=float(A), p=p, modes=modes, horizon=horizon,
            rtol=rtol, atol=atol, blowup_threshold=blowup_threshold,
        )
        rows.append(run_scenario(scenario, model))
    return rows


def is_global(outcome: ode.IvpOutcome) -> bool:
    """Operational global existence: the horizon was reached and the
    max-norm is non-increasing over the final tenth of the window."""
    return ode.norm_nonincreasing_tail(outcome)


def critical_amplitude(p: int = 2, modes: Sequence[int] = (1, 3),
                       horizon: float = 50.0, lo: float = 0.7,
                       hi: float = 1.6, tol: float = 2e-4,
                       rtol: float = 1e-10, atol: float = 1e-12) -> float:
    """Amplitude threshold separating settled runs from escaping ones,
    located by bisection over A at the given horizon."""
    modes = tuple(sorted(int(k) for k in modes))
    model = galerkin.build_model(modes, p)

    def family(A: float) -> ode.IvpSpec:
        scenario = HeatScenario(
            A=A, p=p, modes=modes, horizon=horizon, rtol=rtol, atol=atol
        )
        return assemble_coupled_system(scenario, model)[0]

    return ode.bisect_parameter(
        family, lo, hi, tol, classify=lambda outcome: not is_global(outcome)
    )


@dataclass(frozen=True)
class RescaledResult:
    """Escape time of the rescaled system and the sampled trajectory."""

    inv_amplitude: float
    escape_time: float
    trajectory: TrajectorySamples


def rescaled_system(p: int = 2, modes: Sequence[int] = (1, 3),
                    inv_amplitude: float = 0.0, horizon: float = 5.0,
                    rtol: float = 1e-10, atol: float = 1e-12,
                    blowup_threshold: float = 1e8,
                    model: galerkin.GalerkinModel | None = None,
                    ) -> tuple[ode.IvpSpec, galerkin.GalerkinModel]:
    """IVP for the amplitude-rescaled system (state and time divided by
    A, datum (1, 0, ..., 0)); ``inv_amplitude = 0`` is the A -> infinity
    limit, which is amplitude-free."""
    if not inv_amplitude >= 0.0:
        raise ValueError("inv_amplitude must be >= 0")
    modes = tuple(sorted(int(k) for k in modes))
    if model is None:
        model = galerkin.build_model(modes, p)
    m = len(modes)
    y0 = np.zeros(m + 1)
    y0[modes.index(1)] = 1.0
    spec = ode.IvpSpec(
        dimension=m + 1,
        rhs=_coupled_rhs(model, inv_amplitude),
        y0=y0,
        t0=0.0,
        horizon=horizon,
        rtol=rtol,
        atol=atol,
        blowup_threshold=blowup_threshold,
    )
    return spec, model


def rescaled_limit(p: int = 2, modes: Sequence[int] = (1, 3),
                   horizon: float = 5.0, rtol: float = 1e-10,
                   atol: float = 1e-12) -> RescaledResult:
    """Escape time of the limit system: the constant in t_g ~ const/A."""
    spec, model = rescaled_system(
        p=p, modes=modes, inv_amplitude=0.0, horizon=horizon,
        rtol=rtol, atol=atol,
    )
    outcome = ode.integrate(spec)
    if outcome.kind != ode.BLOW_UP:
        raise EvocontrolError("the rescaled limit system did not escape")
    return RescaledResult(
        inv_amplitude=0.0,
        escape_time=outcome.t_end,
        trajectory=_build_trajectory(outcome, model),
    )


def limit_uncertainty(limit_time: float) -> float:
    """Large-amplitude limit of the relative gap between the upper and
    lower existence bounds."""
    return (C_K - limit_time) / (C_K + limit_time)


def empirical_lower_curve(A: float, crit_amp: float, limit_time: float) -> float:
    """Observed closed-form fit -(limit_time/crit_amp) log(1 - crit_amp/A)
    for the escape time as a function of amplitude; valid for A past the
    critical amplitude."""
    if not A > crit_amp:
        raise OutOfDomainError("the empirical curve needs A above the threshold")
    return -(limit_time / crit_amp) * math.log1p(-crit_amp / A)


def semigroup_apply_sine_coeffs(coeffs, t: float) -> dict[int, float]:
    """Heat flow acting on a sine polynomial: mode k decays by exp(-k^2 t)."""
    if t < 0.0:
        raise OutOfDomainError("the heat flow only acts forward in time")
    return {int(k): float(c) * math.exp(-(k**2) * t) for k, c in coeffs.items()}


# ---------------------------------------------------------------------------
# serialization


def fmt_float(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return format(x, ".17g")


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_scenario_csv(result: ScenarioResult, path: str) -> None:
    """Sampled trajectory as CSV.

    Columns: t, alpha (mode-1 coordinate), gamma (mode-3 coordinate, 0
    when that mode is absent), one a<k> column per additional mode,
    norm_phi_ap, R, ratio. 17 significant digits throughout."""
    tr = result.trajectory
    extra = [k for k in tr.modes if k not in (1, 3)]
    header = ["t", "alpha", "gamma"] + [f"a{k}" for k in extra] + [
        "norm_phi_ap", "R", "ratio"
    ]
    col_of = {k: i for i, k in enumerate(tr.modes)}
    lines = [",".join(header)]
    for i, t in enumerate(tr.times):
        row = [
            fmt_float(t),
            fmt_float(tr.coords[i, col_of[1]]),
            fmt_float(tr.coords[i, col_of[3]] if 3 in col_of else 0.0),
        ]
        row += [fmt_float(tr.coords[i, col_of[k]]) for k in extra]
        row += [
            fmt_float(tr.norm_phi[i]),
            fmt_float(tr.radius[i]),
            fmt_float(tr.ratio[i]),
        ]
        lines.append(",".join(row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _ext_pair(name: str, value: float | None) -> dict:
    """Extended reals in JSON: a null plus an explicit infinity flag."""
    if value is None:
        return {name: None, f"{name}_infinite": False}
    if math.isinf(value):
        return {name: None, f"{name}_infinite": True}
    return {name: float(value), f"{name}_infinite": False}


def scenario_record(result: ScenarioResult) -> dict:
    sc = result.scenario
    record = {
        "spec_version": SPEC_VERSION,
        "kind": "scenario",
        "A": sc.A,
        "p": sc.p,
        "modes": list(sc.modes),
        "horizon": sc.horizon,
        "rtol": sc.rtol,
        "atol": sc.atol,
        "blowup_threshold": sc.blowup_threshold,
        "outcome": result.outcome_kind,
    }
    record.update(_ext_pair("t_N", result.t_n))
    record.update(_ext_pair("t_G", result.t_g))
    record.update(_ext_pair("t_K", result.t_k))
    record.update(_ext_pair("eta", result.eta))
    return record


def scenario_from_record(record: dict) -> HeatScenario:
    """Rebuild the scenario configuration stored in a JSON record, so a
    record can be re-run to regenerate its CSV output byte-for-byte."""
    return HeatScenario(
        A=float(record["A"]),
        p=int(record["p"]),
        modes=tuple(record["modes"]),
        horizon=float(record["horizon"]),
        rtol=float(record["rtol"]),
        atol=float(record["atol"]),
        blowup_threshold=float(record["blowup_threshold"]),
    )


def write_json(record: dict, path: str) -> None:
    atomic_write_text(path, json.dumps(record, indent=2, sort_keys=True) + "\n")
