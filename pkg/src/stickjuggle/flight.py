"""Torque-free ballistic flight between two crossings of the section.

During flight the COM falls under gravity and the angular momentum about the
COM is conserved. With ``beta`` starting and ending at ``beta_star`` the pitch
rate obeys the first integral::

    beta_dot**2 + K1 * cot(beta)**2 = K2

which yields the time of flight and the precession increment in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSection, NonDescendingPostImpulse
from .rotations import stick_axis
from .states import FullState, StickParams

# beta_dot_plus must be below -_GRAZE; (beta_dot_plus)**2 < 1e-12 is treated as grazing.
_GRAZE = 1e-6


@dataclass(frozen=True)
class FlightConstants:
    K1: float
    K2: float
    beta_min: float
    delta: float
    alpha_dot_plus: float
    beta_dot_plus: float
    beta_star: float

    @property
    def sweep_rate(self) -> float:
        """Angular speed of the stick axis, ``sqrt(K1 + K2) = |H| / J``."""
        return float(np.sqrt(self.K1 + self.K2))


@dataclass(frozen=True, eq=False)
class FlightSample:
    t: float
    h: np.ndarray
    v: np.ndarray
    alpha: float
    beta: float
    alpha_dot: float
    beta_dot: float


def _check_start(beta_dot_plus: float, beta_star: float) -> None:
    if np.sin(beta_star) <= 1e-9:
        raise DegenerateSection(f"sin(beta_star)={np.sin(beta_star):.3g} too small")
    if not beta_dot_plus < -_GRAZE:
        raise NonDescendingPostImpulse(
            f"post-impulse beta_dot={float(beta_dot_plus)!r} must be negative (below {-_GRAZE})"
        )


def flight_constants(alpha_dot_plus: float, beta_dot_plus: float, beta_star: float) -> FlightConstants:
    """First-integral constants, lowest pitch and time of flight from post-impulse rates.

    Raises:
        NonDescendingPostImpulse: ``beta_dot_plus`` is not strictly negative.
    """
    _check_start(beta_dot_plus, beta_star)
    sb, cb = np.sin(beta_star), np.cos(beta_star)
    K1 = sb**4 * alpha_dot_plus**2
    K2 = sb**2 * cb**2 * alpha_dot_plus**2 + beta_dot_plus**2
    # cot(beta_min) = sqrt(K2/K1); K1 = 0 is the planar flip through the vertical.
    beta_min = float(np.arctan(np.sqrt(K1 / K2))) if K1 > 0 else 0.0
    w = np.sqrt(K1 + K2)
    # sqrt(K2 - K1 cot^2 beta_star) is exactly |beta_dot_plus|.
    delta = (np.pi - 2.0 * np.arctan(w * cb / (sb * abs(beta_dot_plus)))) / w
    return FlightConstants(
        K1=float(K1),
        K2=float(K2),
        beta_min=beta_min,
        delta=float(delta),
        alpha_dot_plus=float(alpha_dot_plus),
        beta_dot_plus=float(beta_dot_plus),
        beta_star=float(beta_star),
    )


def precession_increment(alpha_dot_plus: float, beta_dot_plus: float, beta_star: float) -> float:
    """Change in ``alpha`` over one flight.

    With ``beta_dot_plus < 0`` the principal arctan keeps the result in
    ``(0, 2*pi)``: positive ``alpha_dot_plus`` gives a negative argument and an
    increment below ``pi``, negative gives one above ``pi``.
    """
    _check_start(beta_dot_plus, beta_star)
    sb, cb = np.sin(beta_star), np.cos(beta_star)
    return float(np.pi + 2.0 * np.arctan(sb * cb * alpha_dot_plus / beta_dot_plus))


def propagate_flight(post: FullState, fc: FlightConstants, p: StickParams) -> FullState:
    """State at the next crossing of the section, given the post-impulse state."""
    d = fc.delta
    gz = np.array([0.0, 0.0, p.g])
    return FullState(
        h=post.h + post.v * d - 0.5 * gz * d * d,
        v=post.v - gz * d,
        alpha=post.alpha + precession_increment(fc.alpha_dot_plus, fc.beta_dot_plus, fc.beta_star),
        beta=fc.beta_star,
        alpha_dot=fc.alpha_dot_plus,
        beta_dot=-fc.beta_dot_plus,
    )


def free_rotation(alpha0: float, beta0: float, alpha_dot0: float, beta_dot0: float, t):
    """Exact torque-free attitude at times ``t``.

    A slender stick's axis turns at constant speed in the fixed plane normal to
    its angular momentum. Returns arrays ``(alpha, beta, alpha_dot, beta_dot)``
    with ``alpha`` unwrapped continuously from ``alpha0``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n0 = stick_axis(alpha0, beta0)
    sa, ca = np.sin(alpha0), np.cos(alpha0)
    sb, cb = np.sin(beta0), np.cos(beta0)
    ndot0 = alpha_dot0 * np.array([-sa * sb, ca * sb, 0.0]) + beta_dot0 * np.array([ca * cb, sa * cb, -sb])
    w = float(np.linalg.norm(ndot0))
    if w == 0.0:
        n = np.tile(n0, (t.size, 1))
        nd = np.zeros_like(n)
    else:
        c, s = np.cos(w * t)[:, None], np.sin(w * t)[:, None]
        n = c * n0 + s * (ndot0 / w)
        nd = -w * s * n0 + c * ndot0

    rho2 = n[:, 0] ** 2 + n[:, 1] ** 2
    beta = np.arctan2(np.sqrt(rho2), n[:, 2])
    beta_dot = -nd[:, 2] / np.sin(beta)
    alpha_dot = (n[:, 0] * nd[:, 1] - n[:, 1] * nd[:, 0]) / rho2

    # Azimuth is monotone (sign of H_z), so each step is taken on the matching branch.
    hz = alpha_dot0 * sb * sb
    raw = np.arctan2(n[:, 1], n[:, 0])
    steps = np.diff(np.concatenate([[alpha0], raw]))
    steps = np.arctan2(np.sin(steps), np.cos(steps))
    if hz > 0:
        steps = np.where(steps < 0, steps + 2 * np.pi, steps)
    elif hz < 0:
        steps = np.where(steps > 0, steps - 2 * np.pi, steps)
    else:
        steps = np.where(np.abs(steps) > np.pi / 2, np.pi, 0.0)
    alpha = alpha0 + np.cumsum(steps)
    return alpha, beta, alpha_dot, beta_dot


def render_flight(post: FullState, fc: FlightConstants, p: StickParams, n_samples: int) -> list[FlightSample]:
    """Uniformly spaced samples of one flight, both endpoints included."""
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    t = np.linspace(0.0, fc.delta, n_samples)
    alpha, beta, alpha_dot, beta_dot = free_rotation(post.alpha, post.beta, post.alpha_dot, post.beta_dot, t)
    out = []
    for i, ti in enumerate(t):
        h = post.h + post.v * ti - np.array([0.0, 0.0, 0.5 * p.g * ti * ti])
        v = post.v - np.array([0.0, 0.0, p.g * ti])
        out.append(FlightSample(float(ti), h, v, float(alpha[i]), float(beta[i]), float(alpha_dot[i]), float(beta_dot[i])))
    return out


def mechanical_energy(h, v, alpha_dot: float, beta: float, beta_dot: float, p: StickParams) -> float:
    h = np.asarray(h, dtype=float)
    v = np.asarray(v, dtype=float)
    kin = 0.5 * p.m * float(v @ v) + 0.5 * p.J * (alpha_dot**2 * np.sin(beta) ** 2 + beta_dot**2)
    return p.m * p.g * float(h[2]) + kin
