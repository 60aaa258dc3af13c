"""Closed-loop juggling runs with optional measurement noise and actuation loss.

The plant always evolves with the true state. Noise only corrupts what the
controller sees, and the impulse loss only shrinks the impulse that is
actually delivered.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import NoSectionCrossing, NonDescendingPostImpulse
from .flight import free_rotation, render_flight
from .icpm import GainMatrix, feedback, linearize, lqr_gain
from .poincare import PoincareSection
from .rotations import rot_z
from .states import (
    DEFAULT_PARAMS,
    ControlInput,
    FullState,
    JuggleSpec,
    SectionStateInertial,
    SectionStateJuggler,
    StickParams,
    to_juggler,
)
from .steady_state import FixedPoint, solve_fixed_point

DEFAULT_SPEC = JuggleSpec(beta_star=math.pi / 3, delta_alpha_star=2 * math.pi / 3, delta_star=0.6, h_bar_z_star=1.6)
DEFAULT_INITIAL_STATE = SectionStateJuggler([0.9, -0.2, 1.2], [1.3, 0.2, -1.7], 2.2, 2.1)


@dataclass(frozen=True)
class NoiseSpec:
    """Bounds of the uniform perturbations, as fractions of the nominal value."""

    impulse_loss_max: float = 0.025
    position_noise_max: float = 0.01
    velocity_noise_max: float = 0.025

    def __post_init__(self):
        for name, val in asdict(self).items():
            if not 0 <= val < 1:
                raise ValueError(f"{name}={val} must lie in [0, 1)")


@dataclass(frozen=True, eq=False)
class SimConfig:
    params: StickParams = DEFAULT_PARAMS
    spec: JuggleSpec = DEFAULT_SPEC
    initial_state: SectionStateJuggler = DEFAULT_INITIAL_STATE
    n_steps: int = 20
    q_diag: tuple = (1.0,) * 8
    r_diag: tuple = (2.0, 0.5, 1.0)
    noise: NoiseSpec | None = None
    seed: int | None = None
    render_samples_per_flight: int = 0
    # Optional off-section start; when given it replaces ``initial_state``.
    initial_free_state: FullState | None = None
    settle_horizon: float = 10.0

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        if self.noise is not None and self.seed is None:
            raise ValueError("a seed is required when noise is enabled")
        if len(self.q_diag) != 8 or len(self.r_diag) != 3:
            raise ValueError("q_diag needs 8 entries and r_diag 3")

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "spec": asdict(self.spec),
            "initial_state": self.initial_state.as_array().tolist(),
            "n_steps": self.n_steps,
            "q_diag": list(self.q_diag),
            "r_diag": list(self.r_diag),
            "noise": None if self.noise is None else asdict(self.noise),
            "seed": self.seed,
            "render_samples_per_flight": self.render_samples_per_flight,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        kw = {}
        if "params" in d:
            pd = {"m": DEFAULT_PARAMS.m, "ell": DEFAULT_PARAMS.ell, "g": DEFAULT_PARAMS.g, **d["params"]}
            if "J" not in pd:
                kw["params"] = StickParams.uniform_rod(pd["m"], pd["ell"], pd["g"])
            else:
                kw["params"] = StickParams(**pd)
        if "spec" in d:
            sd = {**asdict(DEFAULT_SPEC), **d["spec"]}
            # a bare ``p`` replaces the default flight time instead of conflicting with it
            if "p" in d["spec"] and "delta_star" not in d["spec"]:
                sd["delta_star"] = None
            kw["spec"] = JuggleSpec(**sd)
        if "initial_state" in d:
            kw["initial_state"] = SectionStateJuggler.from_array(d["initial_state"])
        if d.get("noise") is not None:
            kw["noise"] = NoiseSpec(**d["noise"])
        for key in ("n_steps", "seed", "render_samples_per_flight"):
            if key in d and d[key] is not None:
                kw[key] = int(d[key])
        for key in ("q_diag", "r_diag"):
            if key in d:
                kw[key] = tuple(float(x) for x in d[key])
        return cls(**kw)


@dataclass(frozen=True, eq=False)
class StepLog:
    k: int
    t: float
    alpha: float
    state: SectionStateJuggler
    measured: SectionStateJuggler
    commanded: np.ndarray
    applied: ControlInput
    saturated_I: bool
    saturated_r: bool
    delta_alpha: float
    delta: float
    next: SectionStateJuggler


@dataclass(eq=False)
class SimLog:
    config: SimConfig
    fixed_point: FixedPoint
    gain: GainMatrix
    steps: list[StepLog] = field(default_factory=list)
    trajectory: np.ndarray | None = None  # columns t, hx, hy, hz, alpha, beta
    flights: list = field(default_factory=list)

    def errors(self) -> np.ndarray:
        """State errors ``e(k)`` for ``k = 1 .. n_steps + 1`` (rows)."""
        ystar = self.fixed_point.y_star.as_array()
        ys = [s.state.as_array() for s in self.steps] + [self.steps[-1].next.as_array()]
        return np.array(ys) - ystar

    def convergence_step(self, fraction: float = 0.01) -> int | None:
        """First ``k`` after which every error component stays within ``fraction`` of its initial size."""
        e = np.abs(self.errors())
        bound = fraction * e[0]
        ok = np.all(e <= bound, axis=1)
        for i in range(len(ok)):
            if ok[i:].all():
                return i + 1
        return None

    def summary(self) -> dict:
        e = self.errors()
        tail = e[min(20, len(e) - 1):]
        return {
            "n_steps": len(self.steps),
            "convergence_step": self.convergence_step(),
            "max_error_norm": float(np.max(np.linalg.norm(e, axis=1))),
            "final_error_norm": float(np.linalg.norm(e[-1])),
            "max_abs_error_after_k20": np.max(np.abs(tail), axis=0).tolist(),
            "saturation_count_I": int(sum(s.saturated_I for s in self.steps)),
            "saturation_count_r": int(sum(s.saturated_r for s in self.steps)),
            "closed_loop_spectral_radius": self.gain.closed_loop_spectral_radius,
        }


def inject_noise(value, max_fraction: float, rng: np.random.Generator, one_sided: bool = False):
    """Multiplicative uniform perturbation.

    Two-sided: ``x * (1 + u)`` with ``u ~ U(-max, max)``. One-sided (actuation
    loss): ``x * (1 - u)`` with ``u ~ U(0, max)``, so the magnitude never grows.
    """
    if not 0 <= max_fraction < 1:
        raise ValueError("max_fraction must lie in [0, 1)")
    x = np.asarray(value, dtype=float)
    if max_fraction == 0:
        return x if x.ndim else float(x)
    if one_sided:
        out = x * (1.0 - rng.uniform(0.0, max_fraction, size=x.shape))
    else:
        out = x * (1.0 + rng.uniform(-max_fraction, max_fraction, size=x.shape))
    return out if out.ndim else float(out)


def _measure(y: SectionStateJuggler, noise: NoiseSpec, rng) -> SectionStateJuggler:
    h = inject_noise(y.h_bar, noise.position_noise_max, rng)
    v = inject_noise(y.v_bar, noise.velocity_noise_max, rng)
    rates = inject_noise([y.alpha_dot, y.beta_dot], noise.velocity_noise_max, rng)
    return SectionStateJuggler(h, v, float(rates[0]), float(rates[1]))


def settle_to_section(free_state: FullState, p: StickParams, beta_star: float, horizon: float) -> tuple[SectionStateInertial, float]:
    """Follow free flight until ``beta`` rises through ``beta_star``.

    Returns the section state and the elapsed time. A state already on the
    section with ``beta_dot > 0`` is returned unchanged at ``t = 0``.

    Raises:
        NoSectionCrossing: no ascending crossing within ``horizon`` seconds.
    """
    s = free_state
    if abs(s.beta - beta_star) <= 1e-12 and s.beta_dot > 0:
        return SectionStateInertial(s.h, s.v, s.alpha, s.alpha_dot, s.beta_dot), 0.0

    w = math.sqrt(s.alpha_dot**2 * math.sin(s.beta) ** 2 + s.beta_dot**2)
    dt = horizon / 64 if w == 0 else min(horizon / 64, 2 * math.pi / w / 256)
    t_grid = np.arange(0.0, horizon + dt, dt)
    t_grid[-1] = min(t_grid[-1], horizon)

    def gap(t):
        _, beta, _, _ = free_rotation(s.alpha, s.beta, s.alpha_dot, s.beta_dot, t)
        return beta - beta_star

    g = gap(t_grid)
    up = np.nonzero((g[:-1] < 0) & (g[1:] >= 0))[0]
    if up.size == 0:
        raise NoSectionCrossing(f"no ascending crossing of beta={beta_star:.6g} within {horizon} s")
    i = up[0]
    if g[i + 1] == 0:
        tc = float(t_grid[i + 1])
    else:
        tc = brentq(lambda t: float(gap(t)[0]), t_grid[i], t_grid[i + 1], xtol=1e-12, rtol=4 * np.finfo(float).eps)

    alpha, _, alpha_dot, beta_dot = free_rotation(s.alpha, s.beta, s.alpha_dot, s.beta_dot, tc)
    gz = np.array([0.0, 0.0, p.g])
    h = s.h + s.v * tc - 0.5 * gz * tc * tc
    v = s.v - gz * tc
    return SectionStateInertial(h, v, float(alpha[0]), float(alpha_dot[0]), float(beta_dot[0])), tc


def design_controller(cfg: SimConfig) -> tuple[FixedPoint, GainMatrix]:
    fp = solve_fixed_point(cfg.spec, cfg.params)
    lm = linearize(fp, fp.beta_star, cfg.params)
    gain = lqr_gain(lm, np.diag(cfg.q_diag), np.diag(cfg.r_diag))
    return fp, gain


def run_closed_loop(cfg: SimConfig) -> SimLog:
    """Simulate ``cfg.n_steps`` impulse-flight cycles under the ICPM feedback.

    Raises:
        NonDescendingPostImpulse: with ``.step`` set to the failing ``k``.
        InfeasibleFlightTime: the design targets cannot be met.
    """
    p = cfg.params
    fp, gain = design_controller(cfg)
    sec = PoincareSection(fp.beta_star, p)
    rng = np.random.default_rng(cfg.seed) if cfg.noise is not None else None

    t, alpha = 0.0, 0.0
    if cfg.initial_free_state is not None:
        on_section, t = settle_to_section(cfg.initial_free_state, p, fp.beta_star, cfg.settle_horizon)
        alpha = on_section.alpha
        y = to_juggler(on_section, alpha)
    else:
        y = cfg.initial_state

    log = SimLog(config=cfg, fixed_point=fp, gain=gain)
    traj = []
    for k in range(1, cfg.n_steps + 1):
        measured = y if rng is None else _measure(y, cfg.noise, rng)
        fb = feedback(measured, fp, gain, p.ell)
        applied = fb.input
        if rng is not None:
            applied = ControlInput(
                inject_noise(applied.I, cfg.noise.impulse_loss_max, rng, one_sided=True), applied.r, applied.phi
            )
        try:
            nxt, rec = sec.map_juggler(y, applied)
        except NonDescendingPostImpulse as exc:
            exc.step = k
            raise

        if cfg.render_samples_per_flight > 0:
            Rz = rot_z(alpha)
            post = FullState(Rz @ y.h_bar, Rz @ rec.post.v, alpha, fp.beta_star, rec.post.alpha_dot, rec.post.beta_dot)
            samples = render_flight(post, rec.flight, p, cfg.render_samples_per_flight)
            log.flights.append((post, rec.flight, samples))
            traj.extend((t + s.t, *s.h, s.alpha, s.beta) for s in samples)

        log.steps.append(
            StepLog(
                k=k,
                t=t,
                alpha=alpha,
                state=y,
                measured=measured,
                commanded=fb.unsaturated,
                applied=applied,
                saturated_I=fb.saturated_I,
                saturated_r=fb.saturated_r,
                delta_alpha=rec.delta_alpha,
                delta=rec.flight.delta,
                next=nxt,
            )
        )
        t += rec.flight.delta
        alpha += rec.delta_alpha
        y = nxt

    if traj:
        log.trajectory = np.array(traj)
    return log


def replay(log: SimLog) -> float:
    """Largest deviation when the logged inputs are pushed through the map again."""
    sec = PoincareSection(log.fixed_point.beta_star, log.config.params)
    worst = 0.0
    for s in log.steps:
        nxt, _ = sec.map_juggler(s.state, s.applied)
        worst = max(worst, float(np.max(np.abs(nxt.as_array() - s.next.as_array()))))
    return worst


def inertial_section_states(log: SimLog) -> list[SectionStateInertial]:
    """Section states ``Y(t_k^-)`` in the inertial frame, rebuilt from the cumulative ``alpha``."""
    out = []
    for s in log.steps:
        R = rot_z(s.alpha)
        out.append(SectionStateInertial(R @ s.state.h_bar, R @ s.state.v_bar, s.alpha, s.state.alpha_dot, s.state.beta_dot))
    return out


def sweep(beta_stars, delta_alphas, p_values=None, delta_stars=None, params: StickParams = DEFAULT_PARAMS,
          q_diag=(1.0,) * 8, r_diag=(2.0, 0.5, 1.0)) -> list[dict]:
    """Feasibility and closed-loop spectral radius over a grid of design targets.

    Exactly one of ``p_values`` and ``delta_stars`` is used as the flight-time axis.
    """
    if (p_values is None) == (delta_stars is None):
        raise ValueError("give exactly one of p_values and delta_stars")
    axis_name = "p" if p_values is not None else "delta_star"
    axis = p_values if p_values is not None else delta_stars
    rows = []
    for b in beta_stars:
        for da in delta_alphas:
            for val in axis:
                row = {"beta_star": b, "delta_alpha_star": da, axis_name: val}
                try:
                    spec = JuggleSpec(beta_star=b, delta_alpha_star=da, **{axis_name: val})
                    fp = solve_fixed_point(spec, params)
                    lm = linearize(fp, fp.beta_star, params)
                    gain = lqr_gain(lm, np.diag(q_diag), np.diag(r_diag))
                    row.update(feasible=True, delta_star=fp.delta_star, delta_min=fp.delta_min,
                               spectral_radius=gain.closed_loop_spectral_radius, error="")
                # JugglingError is a ValueError; invalid targets count as infeasible cells.
                except ValueError as exc:
                    row.update(feasible=False, spectral_radius=float("nan"), error=f"{type(exc).__name__}: {exc}")
                rows.append(row)
    return rows
