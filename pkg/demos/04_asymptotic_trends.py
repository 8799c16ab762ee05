"""How the finite-n quantities drift as d grows. These are trends, nothing is asserted."""

# %%
import math

from domlab import critical_r_hat, dense_r_hat, log_expectation_ratio

# (1-p)^r_hat d / ln^2 d tends to 1 only in the limit; lower-order terms dominate at these sizes
p = 0.001
for n in (10**4, 10**5, 10**6, 10**7):
    d = n * p
    r = critical_r_hat(n, p)
    print(f"n={n:>8}: r_hat={r:>6}  (1-p)^r d/ln^2 d = {(1 - p) ** r * d / math.log(d) ** 2:.3f}")

# %%
# one extra vertex multiplies E(X_r) by about exp(ln^2 d)
for n in (10**3, 10**4, 10**5):
    r = critical_r_hat(n, 0.01)
    jump = log_expectation_ratio(n, 0.01, r, 1)
    print(f"n={n:>6}: ln jump {jump.log_ratio:8.3f}   ln^2 d {jump.asymptotic:8.3f}")

# %%
# in the dense range the closed form tracks the search
for n in (10**3, 10**5, 10**7):
    print(f"n={n:>8}, p=0.9: search {critical_r_hat(n, 0.9)}, closed form {dense_r_hat(n, 0.9):.3f}")
