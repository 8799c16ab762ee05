"""Empirical distribution of D(G(n,p)) against the predicted interval, for a few p."""

# %%
from domlab.experiments import ExperimentConfig, run_experiment

for p in (0.3, 0.5, 0.7):
    cfg = ExperimentConfig(kind="concentration", n=120, p=p, trials=40, master_seed=1)
    rep = run_experiment(cfg)
    s = rep.summary
    print(
        f"p={p}: interval {tuple(rep.prediction['interval'])}, histogram {rep.histogram}, "
        f"mass {s['mass_on_interval']:.2f}, median - r_hat = {s['median_minus_r_hat']}"
    )

# %%
# the tail bound P(D <= b) P(D >= b + t) <= exp(-t^2 / 4(n - b)) is far from tight here
cfg = ExperimentConfig(
    kind="talagrand_sanity", n=60, p=0.5, trials=100, master_seed=3, b_grid=[3, 4, 5], t_grid=[1, 2]
)
for cell in run_experiment(cfg).summary["grid"]:
    print(f"b={cell['b']} t={cell['t']}: {cell['product']:.3f} <= {cell['bound']:.3f}")
