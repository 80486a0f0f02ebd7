"""
Blaschke factors, Jensen residuals and the weighted log|zeta| integral
======================================================================

A hypothetical zero off the line at rho = 0.7 + 5i is injected into the
boundary data of (s-1) zeta(s) / s^2 and detected through the Jensen
residual at s0 = 1, while the line integral of log|zeta| stays unchanged.
"""

import math

import numpy as np

from nymanlab import hardy as hd
from nymanlab.analytic import zeta_times_s_minus_1
from nymanlab.reporting import default_zeros_path, ingest_zeros

rho = 0.7 + 5j
Z = hd.BadZeroSet((rho,))
print("|B(1/2 + 3i)| =", abs(hd.blaschke_eval(Z, 0.5 + 3j)))
print("|B(1)|        =", abs(hd.blaschke_eval(Z, 1.0)), " = |1-rho|/|rho|")

# Jensen residual with and without the injected factor
gammas = np.array(ingest_zeros(default_zeros_path()))
T = 200.0
pts = sorted(list(gammas[gammas < T]) + list(-gammas[gammas < T]))
F = lambda s: zeta_times_s_minus_1(s) / s ** 2
Fi = lambda s: F(s) * hd.blaschke_eval(Z, s)
growth = hd.GrowthModel(0.0, -1.0)
clean = hd.jensen_check(F, hd.BadZeroSet(), 1.0, T=T, growth=growth, log_points=pts, tol=1e-8)
injected = hd.jensen_check(Fi, hd.BadZeroSet(), 1.0, T=T, growth=growth, log_points=pts, tol=1e-8)
print(f"residual clean {clean:+.3e}, injected {injected:+.3e}")
print(f"shift {clean - injected:.10f}  log(|rho|/|1-rho|) = {math.log(abs(rho) / abs(1 - rho)):.10f}")

# the same integral over the line, split at every zero ordinate below T
res = hd.bsy_integral(60.0, gammas[gammas < 60])
print(f"\nT=60: value {res.value:.3e}, heuristic tail bound {res.tail_bound:.3e}")

# zero counts: ten zeros in the strip below 50, none right of 0.55 below 60
print("zeros in (0.05,0.95)x(1,50):", hd.zero_count_rectangle("zeta", hd.Rectangle(0.05, 0.95, 1, 50)).count)
scan = hd.causality_scan("zeta", hd.Rectangle(0.55, 0.95, 1, 60), ny=4, threads=4)
print("scan verdict:", scan.verdict, "-", scan.notes)

# a declared bad zero makes the scattering multiplier exceed 1 near it
rep = hd.causality_verdict(Z)
print("declared {rho}:", rep.verdict, "witness", rep.witness, "|S| =", rep.witness_modulus)
