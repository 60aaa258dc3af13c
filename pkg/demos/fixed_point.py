"""
Steady juggling as a fixed point
================================

Pick the section angle, the flight time and how far the stick precesses per
throw. Everything else about the steady orbit follows in closed form.
"""

import math

import numpy as np

from stickjuggle import DEFAULT_PARAMS, JuggleSpec, PoincareSection, solve_fixed_point

# A 100 g, 50 cm stick caught at 60 degrees, thrown every 0.6 s, three throws per turn.
spec = JuggleSpec(beta_star=math.pi / 3, delta_alpha_star=2 * math.pi / 3, delta_star=0.6)
fp = solve_fixed_point(spec, DEFAULT_PARAMS)

for key, val in fp.as_dict().items():
    print(f"{key:>16s} = {val: .6f}")

# The juggler-frame map sends the orbit back onto itself.
sec = PoincareSection(spec.beta_star, DEFAULT_PARAMS)
nxt, rec = sec.map_juggler(fp.y_star, fp.u_star)
print("fixed-point residual:", np.max(np.abs(nxt.as_array() - fp.y_star.as_array())))
print("flight time %.12f s, precession step %.12f rad" % (rec.flight.delta, rec.delta_alpha))

# Shortening the flight pushes the impulse toward the tip; below delta_min it falls off the stick.
for p in (1.0, 1.5, 3.0, fp.p):
    r = solve_fixed_point(JuggleSpec(spec.beta_star, spec.delta_alpha_star, p=p), DEFAULT_PARAMS).u_star.r
    print(f"p = {p:5.2f}  delta = {p * fp.delta_min:.4f} s  r = {r:.5f} m")
