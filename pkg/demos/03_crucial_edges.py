"""Crucial vertices of a dominating set and what random edge deletion does to them."""

# %%
import math

from domlab import GnpParams, crucial_edge_law, crucial_set, delete_edges, is_dominating, sample_gnp
from domlab.experiments import ExperimentConfig, run_experiment
from domlab.solver import greedy_dominating_set

g = sample_gnp(GnpParams(100, 0.3), seed=5)
s = greedy_dominating_set(g)
c = crucial_set(g, s)
print(f"greedy set of size {len(s)}; {len(c)} outside vertices see exactly one member")

# %%
f = delete_edges(g, 0.05, seed=6)
print(f"after deleting 5% of edges: {f.edge_count}/{g.edge_count} left, still dominating: {is_dominating(f, s)}")

# %%
# given that {0,1,2} dominates G(12, 1/2), |C| should be Binomial(9, 3/7)
law = crucial_edge_law(12, 0.5, 3)
rep = run_experiment(ExperimentConfig(kind="crucial_distribution", n=12, p=0.5, trials=5000, r=3, master_seed=8))
s = rep.summary
print(f"p* = {law.p_star:.4f}, mu = {law.mu:.4f}; sample mean {s['mean']:.4f}, chi-square p = {s['chi_square_p_value']:.3f}")

# %%
x = 0.05 * 100 * math.sqrt(0.3)
cfg = ExperimentConfig(kind="deletion", n=100, p=0.3, trials=2000, x=x, fixed_graph=True, master_seed=4)
s = run_experiment(cfg).summary
print(f"survival {s['survival_frequency']:.3f} vs analytic {s['analytic_survival_mean']:.3f} (z = {s['z_score']:.2f})")
