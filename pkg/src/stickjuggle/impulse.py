"""Velocity jumps produced by an impulsive force applied normal to the stick.

Positions are untouched by an impulse; only the COM velocity and the two
Euler rates ``alpha_dot`` and ``beta_dot`` change.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateSection, OffsetOutOfRange
from .rotations import rot_y, rot_z
from .states import ControlInput, SectionVelocities, StickParams

_SIN_TOL = 1e-9


def impulse_direction_inertial(alpha_k: float, beta_star: float, phi: float) -> np.ndarray:
    """Unit direction of the impulse, ``Rz(alpha_k) Ry(beta_star) (-cos phi, -sin phi, 0)``."""
    sa, ca = np.sin(alpha_k), np.cos(alpha_k)
    sb, cb = np.sin(beta_star), np.cos(beta_star)
    sp, cp = np.sin(phi), np.cos(phi)
    return np.array(
        [
            sa * sp - ca * cb * cp,
            -ca * sp - sa * cb * cp,
            sb * cp,
        ]
    )


def impulse_direction_juggler(beta_star: float, phi: float) -> np.ndarray:
    """Impulse direction in the juggler frame (the inertial one with ``alpha_k = 0``)."""
    return np.array(
        [
            -np.cos(beta_star) * np.cos(phi),
            -np.sin(phi),
            np.sin(beta_star) * np.cos(phi),
        ]
    )


def application_point_inertial(alpha_k: float, beta_star: float, r: float, ell: float | None = None) -> np.ndarray:
    """Vector from the COM to the point where the impulse acts.

    Raises:
        OffsetOutOfRange: ``r < 0`` or, when ``ell`` is given, ``r > ell / 2``.
    """
    if r < 0 or (ell is not None and r > ell / 2):
        raise OffsetOutOfRange(f"r={r!r} outside [0, ell/2]")
    return rot_z(alpha_k) @ rot_y(beta_star) @ np.array([0.0, 0.0, r])


def apply_impulse(
    vel_pre: SectionVelocities,
    u: ControlInput,
    alpha_k: float,
    beta_star: float,
    p: StickParams,
    frame: str = "inertial",
    check_offset: bool = True,
) -> SectionVelocities:
    """Post-impulse velocities from the linear and angular impulse-momentum balance.

    The angular balance has three rows but rank two; the two independent rows
    are solved in closed form for the rate jumps. ``frame="juggler"`` uses the
    juggler-frame force direction and ignores ``alpha_k``.

    No check is made that the result has ``beta_dot < 0``; the flight map
    rejects non-descending starts. ``check_offset=False`` lets the formulas be
    evaluated off the stick, which finite differencing at ``r = ell/2`` needs.
    """
    sb = np.sin(beta_star)
    if sb <= _SIN_TOL:
        raise DegenerateSection(f"sin(beta_star)={sb:.3g} too small")
    if check_offset and (u.r < 0 or u.r > p.ell / 2):
        raise OffsetOutOfRange(f"r={u.r!r} outside [0, {p.ell / 2}]")
    if u.I < 0:
        raise ValueError(f"impulse magnitude must be non-negative, got {u.I!r}")

    if frame == "inertial":
        f = impulse_direction_inertial(alpha_k, beta_star, u.phi)
    elif frame == "juggler":
        f = impulse_direction_juggler(beta_star, u.phi)
    else:
        raise ValueError(f"unknown frame {frame!r}")

    ir = u.I * u.r
    return SectionVelocities(
        v=vel_pre.v + (u.I / p.m) * f,
        alpha_dot=vel_pre.alpha_dot - ir * np.sin(u.phi) / (p.J * sb),
        beta_dot=vel_pre.beta_dot - ir * np.cos(u.phi) / p.J,
    )


def kinetic_energy(v, alpha_dot: float, beta: float, beta_dot: float, p: StickParams) -> float:
    """Translational plus rotational kinetic energy of the slender stick."""
    v = np.asarray(v, dtype=float)
    rot = alpha_dot**2 * np.sin(beta) ** 2 + beta_dot**2
    return 0.5 * p.m * float(v @ v) + 0.5 * p.J * rot
