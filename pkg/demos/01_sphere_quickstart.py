"""Quickstart: minimize the sphere function with the ask/tell interface.

The optimizer samples a population, you evaluate it however you like, and
tell() the values back. Learning-rate adaptation is on by default; watch the
covariance rates climb once the search has a reliable signal.
"""

import numpy as np

from nes_lra import XNES, sphere

opt = XNES(mean=np.full(10, 3.0), sigma=2.0, population_size=30, seed=42)
print(f"optimizing 10-d sphere, population {opt.population_size}")
print(f"initial learning rates (sigma, B): {opt.learning_rates}")

f_best = np.inf
while f_best > 1e-8:
    xs = opt.ask()
    values = [sphere(x) for x in xs]  # any vector -> scalar callable works
    opt.tell(values)
    f_best = min(f_best, min(values))
    if opt.generation % 25 == 0:
        eta_sigma, eta_b = opt.learning_rates
        print(
            f"gen {opt.generation:4d}  evals {opt.evaluations:6d}  "
            f"f_best {f_best:11.4e}  eta_sigma {eta_sigma:.3f}  eta_b {eta_b:.3f}"
        )

print(
    f"\nreached {f_best:.2e} after {opt.evaluations} evaluations "
    f"({opt.generation} generations)"
)
print(f"final mean: {np.round(opt.distribution.mean, 6)}")
