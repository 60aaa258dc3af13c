"""
Juggling with noisy sensing and a weak hand
===========================================

Measurements are perturbed by up to 1% (positions) and 2.5% (velocities),
and each impulse loses up to 2.5% of its magnitude. The orbit stays bounded.
"""

import numpy as np

from stickjuggle import NoiseSpec, SimConfig, run_closed_loop
from stickjuggle.export import export

cfg = SimConfig(n_steps=200, noise=NoiseSpec(), seed=20240601)
log = run_closed_loop(cfg)

norms = np.linalg.norm(log.errors(), axis=1)
print("max error norm after k = 20:", norms[20:].max().round(4))
print("mean error norm after k = 20:", norms[20:].mean().round(4))
print("saturations:", log.summary()["saturation_count_I"], log.summary()["saturation_count_r"])

# A coarse text trace of the error norm.
for k in range(0, 201, 20):
    print(f"k={k + 1:3d} " + "#" * int(40 * norms[k] / norms.max()))

# Same seed, same run: write CSV/JSON for plotting elsewhere.
paths = export(run_closed_loop(cfg), "robustness_out")
print({k: str(v) for k, v in paths.items()})
