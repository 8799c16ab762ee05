"""Predict the two likely values of D(G(n,p)) and check one sample by exact search."""

# %%
from domlab import GnpParams, predicted_interval, sample_gnp
from domlab.solver import domination_number_exact, greedy_dominating_set

n, p = 200, 0.5
pred = predicted_interval(n, p)
print(f"r_hat = {pred.r_hat}, predicted D in {pred.interval} ({pred.regime})")
print(f"ln E(X_r_hat)   = {pred.log_E_at_r_hat:.3f}")
print(f"ln E(X_r_hat+1) = {pred.log_E_at_r_hat_plus_1:.3f}")
print(f"threshold -ln d = {pred.log_threshold:.3f}")

# %%
g = sample_gnp(GnpParams(n, p), seed=2024)
greedy = greedy_dominating_set(g)
res = domination_number_exact(g, time_budget=10.0)
print(f"{g.edge_count} edges; greedy finds {len(greedy)}, exact search gives {res.size} ({res.status})")
print(f"witness {res.witness.indices()} after {res.nodes_explored} search nodes")

# %%
# decision mode answers D(G) <= k without finishing the optimisation
for k in (res.size - 1, res.size):
    print(f"D(G) <= {k}? {domination_number_exact(g, size_cap=k).within_cap}")
