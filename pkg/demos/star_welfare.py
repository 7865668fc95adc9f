"""Welfare of the hub-and-spoke network as it grows.

The attack on a star either hits the hub's percolation component or it
does not, which gives a closed form for the total benefit. Here we compare
that closed form with exact enumeration on small stars and with Monte Carlo
on large ones, and watch benefit / n^2 settle near a constant.
"""
from netcascade import generators
from netcascade.cascade import monte_carlo_utilities
from netcascade.game import GameParams, closed_form_star, exact_utilities

params = GameParams(c=1.0, p=0.6)

print("small stars: closed form against exact enumeration")
for n in (4, 6, 8, 10):
    exact = exact_utilities(generators.hub_spoke(n), params).total_benefit
    print(f"  n={n:3d}  exact {exact:10.6f}  closed form {closed_form_star(n, params):10.6f}")

print("\nlarge stars: benefit / n^2")
for n in (50, 100, 200, 400):
    est = monte_carlo_utilities(generators.hub_spoke(n), params, samples=50_000, rng_seed=1)
    benefit = est.welfare.mean + (n - 1) * params.c
    print(f"  n={n:3d}  MC {benefit / n**2:.4f} +- {est.welfare.half_width / n**2:.4f}"
          f"  closed form {closed_form_star(n, params) / n**2:.4f}")
