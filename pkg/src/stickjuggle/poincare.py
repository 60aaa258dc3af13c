"""One-step return maps on the section ``beta = beta_star``.

Each step is an impulse followed by a flight back to the section. The inertial
map carries ``alpha`` along; the juggler map re-expresses the result in a frame
rotated by the precession increment, which makes steady juggling a fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flight import FlightConstants, flight_constants, precession_increment
from .impulse import apply_impulse
from .rotations import rot_z
from .states import (
    ControlInput,
    SectionStateInertial,
    SectionStateJuggler,
    SectionVelocities,
    StickParams,
)


@dataclass(frozen=True, eq=False)
class StepRecord:
    pre: SectionStateInertial | SectionStateJuggler
    input: ControlInput
    post: SectionVelocities
    flight: FlightConstants
    delta_alpha: float
    next: SectionStateInertial | SectionStateJuggler


def _ballistic(h, v, delta, g):
    gz = np.array([0.0, 0.0, g])
    return h + v * delta - 0.5 * gz * delta * delta, v - gz * delta


@dataclass(frozen=True)
class PoincareSection:
    """The section ``beta = beta_star`` for a given stick.

    Both return maps are evaluated on this fixed section, so a state can never be
    stepped with a mismatched ``beta_star``. ``check_offset=False`` accepts
    offsets beyond the stick end (used only for finite differencing).
    """

    beta_star: float
    params: StickParams
    check_offset: bool = True

    def map_inertial(self, y: SectionStateInertial, u: ControlInput) -> tuple[SectionStateInertial, StepRecord]:
        p = self.params
        post = apply_impulse(
            SectionVelocities(y.v, y.alpha_dot, y.beta_dot), u, y.alpha, self.beta_star, p, frame="inertial",
            check_offset=self.check_offset,
        )
        fc = flight_constants(post.alpha_dot, post.beta_dot, self.beta_star)
        d_alpha = precession_increment(post.alpha_dot, post.beta_dot, self.beta_star)
        h1, v1 = _ballistic(y.h, post.v, fc.delta, p.g)
        nxt = SectionStateInertial(h1, v1, y.alpha + d_alpha, post.alpha_dot, -post.beta_dot)
        return nxt, StepRecord(y, u, post, fc, d_alpha, nxt)

    def map_juggler(self, y: SectionStateJuggler, u: ControlInput) -> tuple[SectionStateJuggler, StepRecord]:
        p = self.params
        post = apply_impulse(
            SectionVelocities(y.v_bar, y.alpha_dot, y.beta_dot), u, 0.0, self.beta_star, p, frame="juggler",
            check_offset=self.check_offset,
        )
        fc = flight_constants(post.alpha_dot, post.beta_dot, self.beta_star)
        d_alpha = precession_increment(post.alpha_dot, post.beta_dot, self.beta_star)
        h1, v1 = _ballistic(y.h_bar, post.v, fc.delta, p.g)
        Rt = rot_z(d_alpha).T
        nxt = SectionStateJuggler(Rt @ h1, Rt @ v1, post.alpha_dot, -post.beta_dot)
        return nxt, StepRecord(y, u, post, fc, d_alpha, nxt)

    def juggler_vector_map(self, y, u) -> np.ndarray:
        """Array-in, array-out form of :meth:`map_juggler` (8 states, 3 inputs)."""
        nxt, _ = self.map_juggler(SectionStateJuggler.from_array(y), ControlInput.from_array(u))
        return nxt.as_array()


def block_rotation(delta_alpha: float) -> np.ndarray:
    """8x8 block-diagonal ``diag(Rz, Rz, I2)`` acting on a juggler-frame state vector."""
    R = np.eye(8)
    Rz = rot_z(delta_alpha)
    R[0:3, 0:3] = Rz
    R[3:6, 3:6] = Rz
    return R


def map_inertial(y: SectionStateInertial, u: ControlInput, beta_star: float, p: StickParams):
    return PoincareSection(beta_star, p).map_inertial(y, u)


def map_juggler(y: SectionStateJuggler, u: ControlInput, beta_star: float, p: StickParams):
    return PoincareSection(beta_star, p).map_juggler(y, u)
