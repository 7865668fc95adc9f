"""Where in the (p, c) plane is a small network stable?

For the empty network a single purchase only pays when c is small, and
for the cycle the answer depends on both the spreading probability and
the edge price. Each cell is checked exactly against every deviation.
"""
import numpy as np

from netcascade import generators
from netcascade.equilibrium import equilibrium_region

ps = np.round(np.linspace(0.1, 0.9, 5), 2)
cs = np.round(np.linspace(0.1, 1.5, 8), 2)


def show(name, profile, cls):
    cells = equilibrium_region(profile, ps, cs, cls)
    grid = {(cell.p, cell.c): cell.is_equilibrium for cell in cells}
    print(f"{name} ({cls} deviations); '#' marks an equilibrium")
    print("   p \\ c " + " ".join(f"{c:4.2f}" for c in cs))
    for p in ps:
        print(f"   {p:4.2f}  " + " ".join("  # " if grid[(float(p), float(c))] else "  . " for c in cs))
    print()


show("empty network, n=8", generators.empty(8), "add")
show("cycle, n=6", generators.cycle(6), "full")
