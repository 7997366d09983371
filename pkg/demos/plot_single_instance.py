"""
Solving one power-allocation instance
=====================================

A single port with fixed gains, solved in closed form and compared with a
brute-force grid. Then a sampled multi-port channel, where the solver also
picks the port.
"""

# %%
# The four gains are Bob's and Eve's channels from Alice's message antenna
# (``gh1``, ``gg1``) and from her jamming antenna (``gh2``, ``gg2``).

import numpy as np

from fas_secrecy import (
    GainQuad, PortGrid, PowerAllocation, build_correlation, case_split, factor, oracle_ej,
    rate_ej, rate_gn, sample_realization, solve_all_ports, solve_port,
)

P = 10.0
q = GainQuad(gh1=1.5, gh2=1.0, gg1=1.2, gg2=0.5)
res = solve_port(P, q)
print(f"case {res.case_tag.name}, branch {res.branch_detail}, beta {res.beta}")
print(f"p1 = {res.p1:.4f}, p2 = {res.p2:.4f}, rate = {res.value:.6f} bits")

# %%
# The regime depends only on ``P``, ``gh1``, ``gh2`` and ``gg2``. Sweeping
# Eve's jamming gain walks through all three.

for gg2 in (0.05, 0.5, 1.5):
    case, beta = case_split(P, 1.5, 1.0, gg2)
    print(f"gg2 = {gg2}: case {int(case)}, beta {float(beta):.4f}")

# %%
# Brute force. Rates are evaluated on a fine grid over the triangle
# ``p1 + p2 <= P``; the closed form should match the best grid point up to
# the grid spacing.

p1, p2 = np.meshgrid(np.linspace(0, P, 801), np.linspace(0, P, 801))
ok = p1 + p2 <= P
grid = np.where(ok, rate_ej(q, PowerAllocation(p1 * ok, p2 * ok, P)), -np.inf)
print(f"grid best {grid.max():.6f}, closed form {res.value:.6f}")

# %%
# Gaussian-noise jamming at the same powers hurts Bob as much as Eve.

print(f"GN rate at the EJ powers: {rate_gn(q, PowerAllocation(res.p1, res.p2, P)):.6f}")

# %%
# A sampled 20-port channel over five wavelengths. The solver runs every port
# and keeps the best; the oracle searches every port on a grid.

real = sample_realization(factor(build_correlation(PortGrid(20, 5.0))), np.random.default_rng(3))
best = solve_all_ports(P, real)
orc = oracle_ej(P, real)
print(f"port {best.port}: {best.value:.6f} bits (oracle {orc.value:.6f} at port {orc.port})")
