"""
From juggling to a stick sliding on a hoop
==========================================

As the precession per throw shrinks to zero, the impulses merge into a steady
normal force and the stick precesses at constant tilt. Compare the limit with a
juggling orbit at a tiny precession step, then integrate the continuous motion.
"""

import math

import numpy as np

from stickjuggle import DEFAULT_PARAMS, JuggleSpec, precession_limit, solve_fixed_point
from stickjuggle.steady_state import limit_from_fixed_point, simulate_hoop

beta = math.pi / 3
ps = precession_limit(beta, 1.0, DEFAULT_PARAMS)
print("steady precession:", {k: round(v, 6) for k, v in vars(ps).items()})
print("balance residuals:", max(ps.hoop_residuals(DEFAULT_PARAMS).values()))

for da in (1e-1, 1e-2, 1e-4):
    fp = solve_fixed_point(JuggleSpec(beta_star=beta, delta_alpha_star=da, p=1.0), DEFAULT_PARAMS)
    lim = limit_from_fixed_point(fp)
    print(f"delta_alpha*={da:g}: alpha_dot={lim['alpha_dot']:.5f}  F={lim['F']:.5f}  h_x={lim['h_bar_x']:.6f}")

# Two precession periods of the continuous hoop dynamics.
t, hb, b, bdot = simulate_hoop(ps, DEFAULT_PARAMS, periods=2)
print("max |beta_dot|:", np.abs(bdot).max(), " radius drift:", np.abs(np.hypot(*hb[:, :2].T) - ps.h_bar_x).max())
