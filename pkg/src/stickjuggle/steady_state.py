"""Closed-form steady juggling orbits and their two limiting cases.

Steady juggling is a fixed point of the juggler-frame return map. Once
``beta_star``, the flight time ``delta_star`` and the precession step
``delta_alpha_star`` are chosen, every other state and input value follows in
closed form. ``delta_alpha_star = pi`` is planar juggling;
``delta_alpha_star -> 0+`` turns the impulses into a steady hoop force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleFlightTime
from .rotations import angular_momentum, rot_z
from .states import ControlInput, JuggleSpec, SectionStateJuggler, StickParams


@dataclass(frozen=True, eq=False)
class FixedPoint:
    y_star: SectionStateJuggler
    u_star: ControlInput
    psi: float
    xi: float
    delta_min: float
    delta_star: float
    beta_star: float
    delta_alpha_star: float

    @property
    def p(self) -> float:
        return self.delta_star / self.delta_min

    def as_dict(self) -> dict:
        y = self.y_star
        return {
            "beta_star": self.beta_star,
            "delta_star": self.delta_star,
            "delta_alpha_star": self.delta_alpha_star,
            "h_bar_x": float(y.h_bar[0]),
            "h_bar_y": float(y.h_bar[1]),
            "h_bar_z": float(y.h_bar[2]),
            "v_bar_x": float(y.v_bar[0]),
            "v_bar_y": float(y.v_bar[1]),
            "v_bar_z": float(y.v_bar[2]),
            "alpha_dot": y.alpha_dot,
            "beta_dot": y.beta_dot,
            "I": self.u_star.I,
            "r": self.u_star.r,
            "phi": self.u_star.phi,
            "psi": self.psi,
            "xi": self.xi,
            "delta_min": self.delta_min,
            "p": self.p,
        }


def _half_cot(delta_alpha_star: float) -> float:
    """``sin(da) / (1 - cos(da)) = cot(da/2)``; exactly zero for the planar case."""
    if delta_alpha_star == math.pi:
        return 0.0
    return 1.0 / math.tan(delta_alpha_star / 2.0)


def psi_xi(beta_star: float, delta_alpha_star: float) -> tuple[float, float]:
    """The auxiliary quantities ``(Psi, xi)`` of the steady-state solution.

    ``Psi = (2/xi) * (pi - 2*arctan(xi*cot(beta)))`` is evaluated through the
    identity ``pi - 2*arctan(x) = 2*arctan(1/x)`` (valid for ``x > 0``), which
    avoids cancellation as ``xi`` grows for small precession steps.
    """
    if delta_alpha_star == math.pi:
        return 4.0 * beta_star, 1.0
    c = _half_cot(delta_alpha_star) / math.cos(beta_star)
    xi = math.sqrt(1.0 + c * c)
    psi = (4.0 / xi) * math.atan(math.tan(beta_star) / xi)
    return psi, xi


def min_flight_time(beta_star: float, delta_alpha_star: float, p: StickParams) -> float:
    """Shortest steady flight time for which the impulse still lands on the stick."""
    psi, _ = psi_xi(beta_star, delta_alpha_star)
    if psi < 0:
        raise ValueError(f"Psi={psi} is negative")
    return math.sqrt(2.0 * p.J * psi * math.sin(beta_star) / (p.m * p.g * p.ell))


def _resolve_delta(spec: JuggleSpec, delta_min: float) -> float:
    if spec.delta_star is not None and spec.p is not None:
        if abs(spec.delta_star - spec.p * delta_min) > 1e-9 * max(1.0, spec.delta_star):
            raise ValueError(
                f"delta_star={spec.delta_star} disagrees with p*delta_min={spec.p * delta_min}"
            )
    if spec.delta_star is not None:
        return spec.delta_star
    return spec.p * delta_min


def solve_fixed_point(spec: JuggleSpec, p: StickParams) -> FixedPoint:
    """Fixed point ``(Y*, U*)`` of the juggler-frame map for the design targets.

    ``h_bar_z`` drops out of the fixed-point equations, so it is taken from
    ``spec.h_bar_z_star``.

    Raises:
        InfeasibleFlightTime: ``delta_star < delta_min``, which would put the
            impulse beyond the end of the stick.
    """
    b, da = spec.beta_star, spec.delta_alpha_star
    psi, xi = psi_xi(b, da)
    delta_min = min_flight_time(b, da, p)
    d = _resolve_delta(spec, delta_min)
    if d < delta_min * (1.0 - 1e-12):
        raise InfeasibleFlightTime(f"delta_star={d:.6g} s is below delta_min={delta_min:.6g} s")

    g = p.g
    sb, cb = math.sin(b), math.cos(b)
    cot_b = cb / sb
    hc = _half_cot(da)
    one_minus_cos = 2.0 * math.sin(da / 2.0) ** 2

    h_x = g * d * d * cot_b / (2.0 * one_minus_cos)
    v_x = g * d * cot_b / 2.0
    v_y = g * d * cot_b * hc / 2.0
    v_z = -0.5 * g * d
    alpha_dot = psi * hc / (d * math.sin(2.0 * b))
    beta_dot = psi / (2.0 * d)
    I = p.m * g * d / sb
    r = p.J * psi * sb / (p.m * g * d * d)

    y = SectionStateJuggler([h_x, 0.0, spec.h_bar_z_star], [v_x, v_y, v_z], alpha_dot, beta_dot)
    return FixedPoint(
        y_star=y,
        # delta_star >= delta_min already holds, so only rounding can push r past ell/2.
        u_star=ControlInput(I, min(r, p.ell / 2), 0.0),
        psi=psi,
        xi=xi,
        delta_min=delta_min,
        delta_star=d,
        beta_star=b,
        delta_alpha_star=da,
    )


@dataclass(frozen=True)
class PrecessionState:
    """Steady precession of the stick sliding on a frictionless hoop."""

    beta_star: float
    p_free: float
    h_bar_x: float
    v_bar_y: float
    alpha_dot: float
    F: float
    r: float
    h_bar_y: float = 0.0
    v_bar_x: float = 0.0
    v_bar_z: float = 0.0
    beta_dot: float = 0.0
    phi: float = 0.0

    def hoop_residuals(self, params: StickParams) -> dict[str, float]:
        """Relative residuals of the force, moment and circular-motion balances."""
        m, g, J = params.m, params.g, params.J
        sb, cb = math.sin(self.beta_star), math.cos(self.beta_star)

        def rel(a, b):
            return abs(a - b) / max(abs(a), abs(b), 1e-300)

        return {
            "moment_balance": rel(self.F * self.r, J * self.alpha_dot**2 * sb * cb),
            "vertical_balance": rel(self.F, m * g / sb),
            "centripetal": rel(self.F * cb / m, self.alpha_dot**2 * self.h_bar_x),
            "tangential_speed": rel(self.v_bar_y, self.alpha_dot * self.h_bar_x),
            "offset_choice": rel(self.r, params.ell / (2.0 * self.p_free**2)),
            "v_bar_x": abs(self.v_bar_x),
            "v_bar_z": abs(self.v_bar_z),
            "h_bar_y": abs(self.h_bar_y),
        }


def precession_limit(beta_star: float, p_free: float, params: StickParams) -> PrecessionState:
    """Limit of the steady juggling orbit as the precession step goes to zero."""
    if not (0 < beta_star < math.pi / 2):
        raise ValueError("beta_star must lie in (0, pi/2)")
    if not p_free >= 1:
        raise ValueError("p_free must be >= 1")
    m, g, J, ell = params.m, params.g, params.J, params.ell
    sb, cb = math.sin(beta_star), math.cos(beta_star)
    return PrecessionState(
        beta_star=beta_star,
        p_free=p_free,
        h_bar_x=2.0 * p_free**2 * J * sb * cb * cb / (m * ell),
        v_bar_y=p_free * math.sqrt(2.0 * J * g * cb**3 / (m * ell)),
        alpha_dot=math.sqrt(m * g * ell / (2.0 * J * sb * sb * cb)) / p_free,
        F=m * g / sb,
        r=ell / (2.0 * p_free**2),
    )


def limit_from_fixed_point(fp: FixedPoint) -> dict[str, float]:
    """Steady-precession quantities read off a juggling fixed point, with ``F = I/delta``."""
    y = fp.y_star
    return {
        "h_bar_x": float(y.h_bar[0]),
        "v_bar_x": float(y.v_bar[0]),
        "v_bar_y": float(y.v_bar[1]),
        "v_bar_z": float(y.v_bar[2]),
        "alpha_dot": y.alpha_dot,
        "beta_dot": y.beta_dot,
        "F": fp.u_star.I / fp.delta_star,
        "r": fp.u_star.r,
    }


def _hoop_rhs(y, F, r, J, m, g, sb, cb):
    vx, vy, vz, Hx, Hy, Hz, a, b = y[3], y[4], y[5], y[6], y[7], y[8], y[9], y[10]
    ca, sa = math.cos(a), math.sin(a)
    ax = -F * ca * cb / m
    ay = -F * sa * cb / m
    az = F * sb / m - g
    # torque r x F with r = r*(ca sb, sa sb, cb), F = F*(-ca cb, -sa cb, sb)
    tx = F * r * sa
    ty = -F * r * ca
    sbeta = math.sin(b)
    adot = Hz / (J * sbeta * sbeta)
    bdot = (-Hx * sa + Hy * ca) / J
    return (vx, vy, vz, ax, ay, az, tx, ty, 0.0, adot, bdot)


def simulate_hoop(state: PrecessionState, params: StickParams, periods: float = 10.0, dt: float = 1e-5,
                  h_z0: float = 0.0, record_every: int = 100):
    """Integrate the continuous hoop dynamics with classical RK4 from the steady state.

    The hoop force keeps the fixed direction normal to the cone of half-angle
    ``beta_star`` at the current azimuth. Returns ``(t, h_bar, beta, beta_dot)``
    sampled every ``record_every`` steps, with ``h_bar`` the COM position in the
    frame rotating with the stick.
    """
    J, m, g = params.J, params.m, params.g
    b0 = state.beta_star
    sb, cb = math.sin(b0), math.cos(b0)
    H0 = angular_momentum(0.0, b0, state.alpha_dot, state.beta_dot, J)
    y = [state.h_bar_x, 0.0, h_z0, 0.0, state.v_bar_y, 0.0, H0[0], H0[1], H0[2], 0.0, b0]
    T = periods * 2.0 * math.pi / state.alpha_dot
    n = int(math.ceil(T / dt))
    args = (state.F, state.r, J, m, g, sb, cb)

    ts, hb, betas, bdots = [], [], [], []

    def record(t, y):
        a = y[9]
        hb.append(rot_z(a).T @ np.array(y[0:3]))
        ts.append(t)
        betas.append(y[10])
        bdots.append(_hoop_rhs(y, *args)[10])

    record(0.0, y)
    for i in range(1, n + 1):
        k1 = _hoop_rhs(y, *args)
        k2 = _hoop_rhs([yi + 0.5 * dt * ki for yi, ki in zip(y, k1)], *args)
        k3 = _hoop_rhs([yi + 0.5 * dt * ki for yi, ki in zip(y, k2)], *args)
        k4 = _hoop_rhs([yi + dt * ki for yi, ki in zip(y, k3)], *args)
        y = [yi + dt / 6.0 * (a + 2 * b + 2 * c + d) for yi, a, b, c, d in zip(y, k1, k2, k3, k4)]
        if i % record_every == 0 or i == n:
            record(i * dt, y)
    return np.array(ts), np.array(hb), np.array(betas), np.array(bdots)
