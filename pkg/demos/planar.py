"""
Planar juggling as a special case
=================================

With a half-turn of precession per throw the stick flips through the vertical
and never spins about it. The same solver lands on the planar closed forms.
"""

import math

from stickjuggle import DEFAULT_PARAMS, JuggleSpec, solve_fixed_point

p = DEFAULT_PARAMS
for beta in (math.pi / 6, math.pi / 4, math.pi / 3):
    fp = solve_fixed_point(JuggleSpec(beta_star=beta, delta_alpha_star=math.pi, delta_star=0.6), p)
    y, u = fp.y_star, fp.u_star
    print(f"beta* = {beta:.4f}: alpha_dot = {y.alpha_dot}, v_y = {y.v_bar[1]}, "
          f"beta_dot = {y.beta_dot:.6f} (2 beta*/delta = {2 * beta / 0.6:.6f}), "
          f"I = {u.I:.6f}, r = {u.r:.6f}")
