"""Why attacks stay small when few edges are bought.

A subcritical Galton-Watson process dies out quickly, and the Chernoff
rate h turns that into an exponential tail Pr[|T| > k] <= exp(-k h).
Below we print the empirical tail next to the bound for two offspring laws.
"""
from netcascade.branching import OffspringDistribution, moment_bound_check, verify_tail_bound

for offspring, theta_max in [(OffspringDistribution.bernoulli(0.3), 30.0),
                             (OffspringDistribution.bernoulli_sum(100, 0.001), 50.0)]:
    print(offspring.label, f"mean {offspring.mean:.3f}")
    for row in verify_tail_bound(offspring, range(0, 11, 2), 500_000, seed=5, theta_max=theta_max):
        print(f"  k={row.k:2d}  empirical {row.tail.estimate:.2e}  bound {row.bound:.2e}"
              f"  {'ok' if row.satisfied else 'VIOLATED'}")

chk = moment_bound_check(100, 0.001, 1000, 1 / 3)
print(f"\nmgf at theta'={chk.theta:.3f}: {chk.mgf:.4f} <= e/(e-1) = {chk.limit:.4f}: {chk.holds}")
