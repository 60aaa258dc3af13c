"""Linearized return map about the fixed point and its discrete LQR stabilization.

Impulses are applied only on the section, so the controller is a state
feedback on the sampled error ``e(k) = Y(k) - Y*``::

    U_k = U* + K @ e(k)

with ``K`` chosen so that ``A + B @ K`` is Schur stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FixedPointDrift, NotStabilizable, RiccatiDivergence
from .poincare import PoincareSection
from .states import ControlInput, SectionStateJuggler, StickParams
from .steady_state import FixedPoint

BETA_DOT = 7
ALPHA_DOT = 6


@dataclass(frozen=True, eq=False)
class LinearizedMap:
    A: np.ndarray
    B: np.ndarray
    fixed_point: FixedPoint
    fd_step: np.ndarray


@dataclass(frozen=True, eq=False)
class GainMatrix:
    K: np.ndarray
    P: np.ndarray
    closed_loop_spectral_radius: float
    iterations: int


def fixed_point_residual(fp: FixedPoint, p: StickParams) -> float:
    sec = PoincareSection(fp.beta_star, p)
    y = fp.y_star.as_array()
    return float(np.max(np.abs(sec.juggler_vector_map(y, fp.u_star.as_array()) - y)))


def linearize(fp: FixedPoint, beta_star: float, p: StickParams, step_scale: float = 1e-6) -> LinearizedMap:
    """Central-difference Jacobians of the juggler-frame map at the fixed point.

    Column ``j`` is perturbed by ``step_scale * max(1, |x_j|)`` (and twice that
    for the outer stencil points).

    Raises:
        FixedPointDrift: the map moves ``Y*`` by more than ``1e-6``.
    """
    if beta_star != fp.beta_star:
        raise ValueError("beta_star does not match the fixed point's section")
    drift = fixed_point_residual(fp, p)
    if drift > 1e-6:
        raise FixedPointDrift(f"fixed-point residual {drift:.3g} exceeds 1e-6")

    sec = PoincareSection(beta_star, p, check_offset=False)
    x0 = np.concatenate([fp.y_star.as_array(), fp.u_star.as_array()])
    steps = step_scale * np.maximum(1.0, np.abs(x0))

    def f(x):
        return sec.juggler_vector_map(x[:8], x[8:])

    # Fourth-order central stencil: the map curves on the scale of r* (~1 cm),
    # so the plain two-point stencil leaves visible truncation error.
    jac = np.empty((8, 11))
    for j in range(11):
        dx = np.zeros(11)
        dx[j] = steps[j]
        jac[:, j] = (8.0 * (f(x0 + dx) - f(x0 - dx)) - (f(x0 + 2 * dx) - f(x0 - 2 * dx))) / (12.0 * steps[j])
    return LinearizedMap(A=jac[:, :8], B=jac[:, 8:], fixed_point=fp, fd_step=steps)


def analytic_rate_rows(fp: FixedPoint, p: StickParams) -> dict[str, np.ndarray]:
    """Exact ``alpha_dot`` and ``beta_dot`` rows of ``A`` and ``B``.

    Those two outputs depend only on the rate jumps, which are linear in the
    states and bilinear in ``(I, r)``.
    """
    I, r, phi = fp.u_star.I, fp.u_star.r, fp.u_star.phi
    sb = np.sin(fp.beta_star)
    A_beta = np.zeros(8)
    A_beta[BETA_DOT] = -1.0
    A_alpha = np.zeros(8)
    A_alpha[ALPHA_DOT] = 1.0
    B_beta = np.array([r * np.cos(phi), I * np.cos(phi), -I * r * np.sin(phi)]) / p.J
    B_alpha = -np.array([r * np.sin(phi), I * np.sin(phi), I * r * np.cos(phi)]) / (p.J * sb)
    return {"A_beta_dot": A_beta, "A_alpha_dot": A_alpha, "B_beta_dot": B_beta, "B_alpha_dot": B_alpha}


def controllability_matrix(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    blocks = [B]
    for _ in range(n - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def controllability_rank(lm_or_A, B=None, rtol: float = 1e-8) -> int:
    """Rank of ``[B, AB, ..., A^(n-1) B]`` with singular-value threshold ``rtol * sigma_max``."""
    if B is None:
        A, B = lm_or_A.A, lm_or_A.B
    else:
        A = lm_or_A
    s = np.linalg.svd(controllability_matrix(np.asarray(A, float), np.asarray(B, float)), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def lqr_gain(lm_or_A, Q, R, B=None, tol: float = 1e-12, max_iter: int = 100_000) -> GainMatrix:
    """Infinite-horizon discrete LQR gain by iterating the Riccati difference equation.

    The recursion starts from ``P = Q`` and stops once successive iterates agree
    to ``tol`` relative in the max-row-sum norm. The returned gain already
    carries the minus sign, ``K = -(R + B'PB)^-1 B'PA``, so ``u = K e``.

    Raises:
        RiccatiDivergence: no convergence within ``max_iter`` iterations.
        NotStabilizable: ``rho(A + B K) >= 1`` after convergence.
    """
    if B is None:
        A, B = lm_or_A.A, lm_or_A.B
    else:
        A = lm_or_A
    A = np.atleast_2d(np.asarray(A, float))
    B = np.atleast_2d(np.asarray(B, float))
    Q = np.atleast_2d(np.asarray(Q, float))
    R = np.atleast_2d(np.asarray(R, float))

    P = Q.copy()
    for it in range(1, max_iter + 1):
        BtP = B.T @ P
        G = np.linalg.solve(R + BtP @ B, BtP @ A)
        P_next = Q + A.T @ P @ A - A.T @ P @ B @ G
        P_next = 0.5 * (P_next + P_next.T)
        diff = np.linalg.norm(P_next - P, np.inf)
        scale = np.linalg.norm(P, np.inf)
        P = P_next
        if diff <= tol * scale:
            break
    else:
        raise RiccatiDivergence(f"Riccati recursion did not converge in {max_iter} iterations")

    BtP = B.T @ P
    K = -np.linalg.solve(R + BtP @ B, BtP @ A)
    rho = float(np.max(np.abs(np.linalg.eigvals(A + B @ K))))
    if rho >= 1.0:
        raise NotStabilizable(f"closed-loop spectral radius {rho:.6g} >= 1")
    return GainMatrix(K=K, P=P, closed_loop_spectral_radius=rho, iterations=it)


def dare_residual(A, B, Q, R, P) -> float:
    """``||P - A'PA + A'PB (R + B'PB)^-1 B'PA - Q||_inf``."""
    BtP = B.T @ P
    res = P - A.T @ P @ A + A.T @ P @ B @ np.linalg.solve(R + BtP @ B, BtP @ A) - Q
    return float(np.linalg.norm(res, np.inf))


@dataclass(frozen=True, eq=False)
class FeedbackResult:
    input: ControlInput
    unsaturated: np.ndarray
    saturated_I: bool
    saturated_r: bool


def feedback(y_bar: SectionStateJuggler, fp: FixedPoint, gain: GainMatrix | np.ndarray, ell: float) -> FeedbackResult:
    """ICPM control law with input saturation.

    ``I`` is clipped at zero and ``r`` to ``[0, ell/2]``; clipping is reported
    in the result rather than raised.
    """
    K = gain.K if isinstance(gain, GainMatrix) else np.asarray(gain)
    e = y_bar.as_array() - fp.y_star.as_array()
    u = fp.u_star.as_array() + K @ e
    I = max(u[0], 0.0)
    r = min(max(u[1], 0.0), ell / 2)
    return FeedbackResult(
        input=ControlInput(float(I), float(r), float(u[2])),
        unsaturated=u,
        saturated_I=bool(I != u[0]),
        saturated_r=bool(r != u[1]),
    )
