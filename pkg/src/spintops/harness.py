"""Run driver: trajectory generation, invariant drift reports, reversibility
and convergence diagnostics, period estimation, CSV emission."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import euler_lagrange, kowalevski
from .algebra import cross
from .hk import hk_step
from .models import (
    BodyState,
    KowalevskiParams,
    TopParams,
    euler_poisson_rhs,
    invariants,
)

BODY_MODELS = ("euler", "kowalevski", "general")
MODELS = BODY_MODELS + ("lagrange",)

SCHEMES_BY_MODEL = {
    "euler": ("hk", "bs", "symmetric", "reference"),
    "general": ("hk", "reference"),
    "kowalevski": ("hk", "bohlin-a", "bohlin-b", "bohlin-c", "hybrid", "reference"),
    "lagrange": ("bs", "reference"),
}

BODY_CSV_HEADER = "step,t,w1,w2,w3,g1,g2,g3,gamma_sq,two_ell,E,k_sq"
LAGRANGE_CSV_HEADER = "step,t,m1,m2,m3,a1,a2,a3,a_sq,m_dot_p,m_dot_a,E"

# Standard test point: w = (2, 0, 0), gamma_3 = 0.001 with gamma on the sphere.
DEFAULT_GAMMA3 = 0.001
DEFAULT_KOW_INIT = np.array(
    [2.0, 0.0, 0.0, math.sqrt(1.0 - DEFAULT_GAMMA3**2), 0.0, DEFAULT_GAMMA3]
)


class ConfigError(ValueError):
    """Invalid run configuration."""


@dataclass(frozen=True)
class RunConfig:
    model: str
    scheme: str
    h: float
    steps: int
    stride: int = 1
    c0: float = 1.0
    inertia: tuple[float, float, float] = (1.0, 2.0, 3.0)
    gravity: tuple[float, float, float] = (0.0, 0.0, 0.0)
    vertical: tuple[float, float, float] = (0.0, 0.0, 1.0)
    init: np.ndarray | None = None
    branch_rule: kowalevski.BranchRule = kowalevski.BranchRule.ARG_SIGN
    out_path: str | None = None

    def validated(self) -> "RunConfig":
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.scheme not in SCHEMES_BY_MODEL[self.model]:
            raise ConfigError(
                f"scheme {self.scheme!r} not valid for model {self.model!r}"
            )
        if not (self.h > 0):
            raise ConfigError("h must be positive")
        if self.steps < 0:
            raise ConfigError("steps must be nonnegative")
        if self.stride < 1:
            raise ConfigError("stride must be >= 1")
        init = self.init
        if init is None:
            if self.model == "kowalevski":
                init = DEFAULT_KOW_INIT.copy()
            else:
                raise ConfigError(f"model {self.model!r} requires an explicit init")
        init = np.asarray(init, dtype=float)
        if init.shape != (6,):
            raise ConfigError("init must have 6 components")
        return replace(self, init=init)

    def top_params(self) -> TopParams:
        if self.model == "kowalevski":
            return KowalevskiParams(self.c0).top_params()
        if self.model == "euler":
            return TopParams(*self.inertia, np.zeros(3))
        return TopParams(*self.inertia, np.asarray(self.gravity, dtype=float))


@dataclass
class Trajectory:
    model: str
    h: float
    steps: np.ndarray
    t: np.ndarray
    states: np.ndarray  # rows of 6 state components
    invariant_names: tuple[str, ...]
    invariant_values: np.ndarray  # one column per invariant name

    def column(self, name: str) -> np.ndarray:
        body_cols = ("w1", "w2", "w3", "g1", "g2", "g3")
        lag_cols = ("m1", "m2", "m3", "a1", "a2", "a3")
        cols = lag_cols if self.model == "lagrange" else body_cols
        if name in cols:
            return self.states[:, cols.index(name)]
        if name in self.invariant_names:
            return self.invariant_values[:, self.invariant_names.index(name)]
        raise KeyError(name)

    def final_state(self) -> np.ndarray:
        return self.states[-1].copy()

    def to_csv(self, path: str) -> None:
        header = LAGRANGE_CSV_HEADER if self.model == "lagrange" else BODY_CSV_HEADER
        with open(path, "w", newline="\n") as f:
            f.write(header + "\n")
            for i in range(len(self.steps)):
                vals = [f"{v:.17g}" for v in self.states[i]]
                invs = [
                    "" if math.isnan(v) else f"{v:.17g}"
                    for v in self.invariant_values[i]
                ]
                f.write(
                    f"{int(self.steps[i])},{self.t[i]:.17g},"
                    + ",".join(vals + invs)
                    + "\n"
                )


def _rk4_step(y: np.ndarray, rhs, h: float) -> np.ndarray:
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _body_rhs(p: TopParams):
    def rhs(y: np.ndarray) -> np.ndarray:
        dw, dg = euler_poisson_rhs(BodyState.unpacked(y), p)
        return np.concatenate([dw, dg])

    return rhs


def _lagrange_rhs(lp: euler_lagrange.LagrangeParams):
    def rhs(y: np.ndarray) -> np.ndarray:
        m, a = y[:3], y[3:]
        return np.concatenate([cross(lp.p, a), cross(m, a)])

    return rhs


def make_stepper(config: RunConfig):
    """Packed-state step function y -> y' for the configured model/scheme."""
    model, scheme = config.model, config.scheme
    if model == "lagrange":
        lp = euler_lagrange.LagrangeParams(np.asarray(config.vertical, dtype=float))
        if scheme == "bs":
            def step(y, h):
                s = euler_lagrange.lagrange_step(
                    euler_lagrange.LagrangeState.unpacked(y), lp, h
                )
                return s.packed()
        else:
            rhs = _lagrange_rhs(lp)
            def step(y, h):
                return _rk4_step(y, rhs, h)
        return step

    p = config.top_params()
    if scheme == "hk":
        def step(y, h):
            return hk_step(BodyState.unpacked(y), p, h).packed()
    elif scheme == "reference":
        rhs = _body_rhs(p)
        def step(y, h):
            return _rk4_step(y, rhs, h)
    elif scheme == "bs":
        def step(y, h):
            m = p.inertia * y[:3]
            m_next = euler_lagrange.bs_step_euler(m, p, h)
            return np.concatenate([m_next / p.inertia, y[3:]])
    elif scheme == "symmetric":
        def step(y, h):
            m = p.inertia * y[:3]
            m_next = euler_lagrange.symmetric_step_euler(m, p, h)
            return np.concatenate([m_next / p.inertia, y[3:]])
    elif scheme == "hybrid":
        kp = KowalevskiParams(config.c0)
        def step(y, h):
            return kowalevski.hybrid_step(
                BodyState.unpacked(y), kp, h, config.branch_rule
            ).packed()
    else:  # bohlin-a / bohlin-b / bohlin-c
        kp = KowalevskiParams(config.c0)
        method = {
            "bohlin-a": kowalevski.GammaMethod.BS_A,
            "bohlin-b": kowalevski.GammaMethod.STEREO_B,
            "bohlin-c": kowalevski.GammaMethod.ROTATION_C,
        }[scheme]
        def step(y, h):
            return kowalevski.bohlin_algorithm_step(
                BodyState.unpacked(y), kp, h, method, config.branch_rule
            ).packed()
    return step


def _invariant_row(config: RunConfig, y: np.ndarray) -> np.ndarray:
    if config.model == "lagrange":
        lp = euler_lagrange.LagrangeParams(np.asarray(config.vertical, dtype=float))
        return np.array(
            euler_lagrange.lagrange_invariants(
                euler_lagrange.LagrangeState.unpacked(y), lp, config.h
            )
        )
    inv = invariants(BodyState.unpacked(y), config.top_params())
    two_ell = inv.kow_two_ell if inv.kow_two_ell is not None else math.nan
    k_sq = inv.kow_k_sq if inv.kow_k_sq is not None else math.nan
    return np.array([inv.gamma_sq, two_ell, inv.energy, k_sq])


def run(config: RunConfig) -> Trajectory:
    """Iterate the configured scheme, sampling every stride-th step."""
    config = config.validated()
    step = make_stepper(config)
    names = (
        ("a_sq", "m_dot_p", "m_dot_a", "E")
        if config.model == "lagrange"
        else ("gamma_sq", "two_ell", "E", "k_sq")
    )
    y = np.asarray(config.init, dtype=float).copy()
    rows_steps = [0]
    rows_states = [y.copy()]
    rows_inv = [_invariant_row(config, y)]
    for n in range(1, config.steps + 1):
        y = step(y, config.h)
        if n % config.stride == 0:
            rows_steps.append(n)
            rows_states.append(y.copy())
            rows_inv.append(_invariant_row(config, y))
    steps_arr = np.array(rows_steps)
    traj = Trajectory(
        model=config.model,
        h=config.h,
        steps=steps_arr,
        t=steps_arr * config.h,
        states=np.array(rows_states),
        invariant_names=names,
        invariant_values=np.array(rows_inv),
    )
    if config.out_path:
        traj.to_csv(config.out_path)
    return traj


def reversal_test(config: RunConfig, n: int) -> float:
    """Forward n steps with +h then n steps with -h; max-norm distance from
    the starting state."""
    config = config.validated()
    if n < 0:
        raise ConfigError("n must be nonnegative")
    step = make_stepper(config)
    y0 = np.asarray(config.init, dtype=float).copy()
    y = y0.copy()
    for _ in range(n):
        y = step(y, config.h)
    for _ in range(n):
        y = step(y, -config.h)
    return float(np.max(np.abs(y - y0)))


@dataclass(frozen=True)
class InvariantDrift:
    initial: float
    final: float
    min: float
    max: float
    max_abs_deviation: float


@dataclass(frozen=True)
class DriftReport:
    per_invariant: dict[str, InvariantDrift] = field(default_factory=dict)

    def __getitem__(self, name: str) -> InvariantDrift:
        return self.per_invariant[name]


def drift_report(traj: Trajectory) -> DriftReport:
    """Extrema and max deviation from the initial value, per invariant column."""
    if len(traj.steps) == 0:
        raise ValueError("empty trajectory")
    out = {}
    for j, name in enumerate(traj.invariant_names):
        col = traj.invariant_values[:, j]
        if np.all(np.isnan(col)):
            continue
        out[name] = InvariantDrift(
            initial=float(col[0]),
            final=float(col[-1]),
            min=float(np.min(col)),
            max=float(np.max(col)),
            max_abs_deviation=float(np.max(np.abs(col - col[0]))),
        )
    return DriftReport(out)


class PeriodEstimationError(ValueError):
    """Series does not oscillate enough to define a period."""


def estimate_period(series: np.ndarray, dt: float) -> float:
    """Dominant oscillation period from the mean spacing of successive upward
    mean-crossings, with linear interpolation at the crossings."""
    x = np.asarray(series, dtype=float) - float(np.mean(series))
    idx = np.nonzero((x[:-1] <= 0.0) & (x[1:] > 0.0))[0]
    crossings_total = int(np.sum((x[:-1] <= 0.0) != (x[1:] <= 0.0)))
    if len(idx) < 2 or crossings_total < 3:
        raise PeriodEstimationError("series crosses its mean fewer than 3 times")
    frac = -x[idx] / (x[idx + 1] - x[idx])
    times = (idx + frac) * dt
    return float(np.mean(np.diff(times)))


def convergence_study(
    config: RunConfig, h_list: list[float], t_end: float
) -> list[tuple[float, float, float | None]]:
    """Endpoint error against a fourth-order reference at min(h)/20, for each
    h in h_list. Returns rows (h, error, observed_order) where observed_order
    compares each row against the previous one.
    """
    config = config.validated()
    if len(h_list) < 3:
        raise ConfigError("need at least 3 step sizes")
    for h in h_list:
        n = t_end / h
        if abs(n - round(n)) > 1e-9:
            raise ConfigError(f"t_end/h not integral for h={h}")

    h_ref = min(h_list) / 20.0
    n_ref = round(t_end / h_ref)
    ref_cfg = replace(config, scheme="reference", h=h_ref, steps=n_ref, stride=n_ref)
    y_ref = run(ref_cfg).final_state()

    rows: list[tuple[float, float, float | None]] = []
    prev: tuple[float, float] | None = None
    for h in sorted(h_list, reverse=True):
        n = round(t_end / h)
        cfg = replace(config, h=h, steps=n, stride=n)
        err = float(np.max(np.abs(run(cfg).final_state() - y_ref)))
        order = None
        if prev is not None:
            h_prev, err_prev = prev
            order = math.log(err_prev / err) / math.log(h_prev / h)
        rows.append((h, err, order))
        prev = (h, err)
    return rows
