"""Adaptive against fixed learning rates, desk scale.

Reproduces the shape of the headline comparison: at the smallest standard
population the two are equal, at larger populations the adaptive rates win,
and an aggressively fixed rate that looks great at large populations falls
apart at small ones. Results land in demos/out/ as the same CSV schema the
command-line tools produce, so the plot tool can render them:

    python plots/plots.py score --in demos/out/aggregate.csv --out score.png
"""

from pathlib import Path

from nes_lra import ExperimentConfig, benchmark_spec, sweep

out = Path(__file__).parent / "out"
spec = benchmark_spec("sphere")

configs = []
for lam in (10, 30, 50):
    for mode, mult in (("adaptive", 1.0), ("fixed", 1.0), ("fixed", 8.0)):
        configs.append(
            ExperimentConfig(
                benchmark=spec, lam=lam, lr_mode=mode, multiplier=mult,
                trials=10, trace_every=0,
            )
        )

print("sphere d=10, 10 trials per cell (this takes a minute)\n")
results = sweep(configs, out, workers=2)

print(f"\n{'lambda':>6} {'mode':>10} {'success':>8} {'score':>10}")
for r in results:
    mode = "adaptive" if r.lr_mode == "adaptive" else f"fixed x{r.multiplier:g}"
    score = f"{r.score:10.0f}" if r.score is not None else " no wins"
    print(f"{r.lam:>6} {mode:>10} {r.success_rate:>8.2f} {score}")

print(f"\nrows appended to {out / 'aggregate.csv'} (sweep resumes if rerun)")
