"""
Distance from 1 to the span of step kernels
===========================================

The Gram entries are exact sums over unit intervals in v = 1/u with a
bounded remainder.  ``eps`` sets that remainder; 1e-4 keeps the demo quick
(the acceptance suite uses the default 1e-6).
"""

import numpy as np

from nymanlab import nyman as ny

eps = 1e-4
rows = ny.distance_curve([1, 2, 4, 8, 16], eps=eps, threads=4)
print(f"{'N':>3} {'d^2':>12} {'cond':>10} {'entry bound':>12}")
for r in rows:
    print(f"{r['N']:3d} {r['d_squared']:12.6f} {r['condition_estimate']:10.1f} {r['entry_error_bound']:12.1e}")

# the single-kernel case has a closed form: 1 - log 2 for alpha = 1/2
r1 = ny.nb_distance(ny.gram_assemble([0.5], eps=1e-6))
print("\nN=1, alpha=1/2:", r1.d_squared, " 1 - log 2 =", 1 - np.log(2))

# the projection satisfies d^2 + b.c = 1 up to rounding
g = ny.gram_assemble(ny.reciprocal_grid(8), eps=eps)
r = ny.nb_distance(g)
print("residual identity defect:", abs(r.d_squared + g.b @ r.coeffs - 1))
print("coefficients:", np.round(r.coeffs, 4))

# uniform grids do worse than reciprocal ones at equal N
print("uniform N=8:", ny.distance_curve([8], grid_rule="uniform", eps=eps)[0]["d_squared"])
