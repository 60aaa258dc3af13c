"""Elementary rotations and zyz Euler-angle kinematics of a slender stick.

The stick orientation is ``R = Rz(alpha) @ Ry(beta) @ Rz(gamma)``. Because the
stick has no inertia about its own axis, ``gamma`` never enters the dynamics;
it is kept here only so the full rotation can be formed.
"""

from __future__ import annotations

import numpy as np


def rot_y(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def euler_to_rotation(alpha: float, beta: float, gamma: float = 0.0) -> np.ndarray:
    """Body-to-inertial rotation for the zyz sequence ``(alpha, beta, gamma)``."""
    return rot_z(alpha) @ rot_y(beta) @ rot_z(gamma)


def euler_rate_matrix(alpha: float, beta: float) -> np.ndarray:
    """Matrix ``S`` with ``omega = S @ (alpha_dot, beta_dot, gamma_dot)``.

    ``omega`` is the angular velocity expressed in the inertial frame.
    ``det(S) = -sin(beta)``, so the map is singular when the stick is vertical.
    """
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    return np.array(
        [
            [0.0, -sa, ca * sb],
            [0.0, ca, sa * sb],
            [1.0, 0.0, cb],
        ]
    )


def inertia_inertial(alpha: float, beta: float, J: float, gamma: float = 0.0) -> np.ndarray:
    """Inertia tensor of the slender stick in the inertial frame, ``R diag(J, J, 0) R^T``."""
    R = euler_to_rotation(alpha, beta, gamma)
    return R @ np.diag([J, J, 0.0]) @ R.T


def momentum_matrix(alpha: float, beta: float, J: float) -> np.ndarray:
    """Closed form of ``J_inertial @ S``; its third column is identically zero."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    return J * np.array(
        [
            [-ca * sb * cb, -sa, 0.0],
            [-sa * sb * cb, ca, 0.0],
            [sb * sb, 0.0, 0.0],
        ]
    )


def angular_momentum(
    alpha: float, beta: float, alpha_dot: float, beta_dot: float, J: float
) -> np.ndarray:
    """Angular momentum about the center of mass, inertial frame.

    Independent of ``gamma_dot`` because ``J @ S`` has a zero third column.
    """
    return momentum_matrix(alpha, beta, J) @ np.array([alpha_dot, beta_dot, 0.0])


def stick_axis(alpha: float, beta: float) -> np.ndarray:
    """Unit vector along the body ``z`` axis, inertial frame."""
    sb = np.sin(beta)
    return np.array([np.cos(alpha) * sb, np.sin(alpha) * sb, np.cos(beta)])
