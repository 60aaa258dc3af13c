"""Plain data containers shared by the maps, the controller and the simulator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rotations import rot_z

STATE_LABELS = ("h_x", "h_y", "h_z", "v_x", "v_y", "v_z", "alpha_dot", "beta_dot")
INPUT_LABELS = ("I", "r", "phi")


def _vec3(x) -> np.ndarray:
    a = np.array(x, dtype=float).reshape(3)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StickParams:
    """Mass ``m`` (kg), length ``ell`` (m), transverse inertia ``J`` (kg m^2), gravity ``g``."""

    m: float
    ell: float
    J: float
    g: float = 9.81

    def __post_init__(self):
        if not (self.m > 0 and self.ell > 0 and self.g > 0):
            raise ValueError("m, ell and g must be positive")
        if not (0 < self.J <= self.m * self.ell**2 / 4 * (1 + 1e-12)):
            raise ValueError("J must lie in (0, m*ell^2/4]")

    @classmethod
    def uniform_rod(cls, m: float, ell: float, g: float = 9.81) -> "StickParams":
        return cls(m=m, ell=ell, J=m * ell**2 / 12.0, g=g)


#: 100 g, 50 cm uniform rod used throughout the worked example.
DEFAULT_PARAMS = StickParams.uniform_rod(m=0.1, ell=0.5)


@dataclass(frozen=True)
class ControlInput:
    """Impulse magnitude ``I`` (N s), offset ``r`` along the stick (m), direction ``phi`` (rad)."""

    I: float
    r: float
    phi: float

    def as_array(self) -> np.ndarray:
        return np.array([self.I, self.r, self.phi])

    @classmethod
    def from_array(cls, u) -> "ControlInput":
        I, r, phi = (float(x) for x in u)
        return cls(I, r, phi)


@dataclass(frozen=True, eq=False)
class SectionVelocities:
    """Velocities that jump at an impulse: COM velocity and the two Euler rates."""

    v: np.ndarray
    alpha_dot: float
    beta_dot: float

    def __post_init__(self):
        object.__setattr__(self, "v", _vec3(self.v))


@dataclass(frozen=True, eq=False)
class FullState:
    """Full 10-dimensional inertial state ``(h, v, alpha, beta, alpha_dot, beta_dot)``."""

    h: np.ndarray
    v: np.ndarray
    alpha: float
    beta: float
    alpha_dot: float
    beta_dot: float

    def __post_init__(self):
        object.__setattr__(self, "h", _vec3(self.h))
        object.__setattr__(self, "v", _vec3(self.v))


@dataclass(frozen=True, eq=False)
class SectionStateInertial:
    """A point on the section ``beta = beta_star`` in inertial coordinates (9 numbers)."""

    h: np.ndarray
    v: np.ndarray
    alpha: float
    alpha_dot: float
    beta_dot: float

    def __post_init__(self):
        object.__setattr__(self, "h", _vec3(self.h))
        object.__setattr__(self, "v", _vec3(self.v))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.h, self.v, [self.alpha, self.alpha_dot, self.beta_dot]])

    @classmethod
    def from_array(cls, y) -> "SectionStateInertial":
        y = np.asarray(y, dtype=float)
        return cls(y[0:3], y[3:6], float(y[6]), float(y[7]), float(y[8]))

    def to_full(self, beta_star: float) -> FullState:
        return FullState(self.h, self.v, self.alpha, beta_star, self.alpha_dot, self.beta_dot)


@dataclass(frozen=True, eq=False)
class SectionStateJuggler:
    """A point on the section in the juggler's frame (8 numbers, no ``alpha``)."""

    h_bar: np.ndarray
    v_bar: np.ndarray
    alpha_dot: float
    beta_dot: float

    def __post_init__(self):
        object.__setattr__(self, "h_bar", _vec3(self.h_bar))
        object.__setattr__(self, "v_bar", _vec3(self.v_bar))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.h_bar, self.v_bar, [self.alpha_dot, self.beta_dot]])

    @classmethod
    def from_array(cls, y) -> "SectionStateJuggler":
        y = np.asarray(y, dtype=float)
        if y.shape != (8,):
            raise ValueError(f"expected 8 components, got shape {y.shape}")
        return cls(y[0:3], y[3:6], float(y[6]), float(y[7]))


def to_juggler(state: SectionStateInertial, alpha_k: float) -> SectionStateJuggler:
    """Express an inertial section state in the frame rotated by ``alpha_k`` about ``z``."""
    Rt = rot_z(alpha_k).T
    return SectionStateJuggler(Rt @ state.h, Rt @ state.v, state.alpha_dot, state.beta_dot)


def to_inertial(state: SectionStateJuggler, alpha_k: float) -> SectionStateInertial:
    """Inverse of :func:`to_juggler`; the returned state carries ``alpha = alpha_k``."""
    R = rot_z(alpha_k)
    return SectionStateInertial(R @ state.h_bar, R @ state.v_bar, alpha_k, state.alpha_dot, state.beta_dot)


@dataclass(frozen=True)
class JuggleSpec:
    """Design targets of a steady juggling orbit.

    Either ``delta_star`` or ``p`` (``delta_star = p * delta_min``) must be given.
    When both are given they have to agree; :func:`stickjuggle.steady_state.solve_fixed_point`
    checks this because ``delta_min`` depends on the stick.
    """

    beta_star: float
    delta_alpha_star: float
    delta_star: float | None = None
    p: float | None = None
    h_bar_z_star: float = 1.6

    def __post_init__(self):
        if not (0 < self.beta_star < np.pi / 2):
            raise ValueError("beta_star must lie in (0, pi/2)")
        if not (0 < self.delta_alpha_star <= np.pi):
            raise ValueError("delta_alpha_star must lie in (0, pi]")
        if self.delta_star is None and self.p is None:
            raise ValueError("give delta_star or p")
        if self.delta_star is not None and not self.delta_star > 0:
            raise ValueError("delta_star must be positive")
        if self.p is not None and not self.p >= 1:
            raise ValueError("p must be >= 1")
