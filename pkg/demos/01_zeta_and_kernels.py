"""
Zeta on the critical line and the Mellin side of the step kernels
=================================================================

Run with ``python3 demos/01_zeta_and_kernels.py``.
"""

import math

import numpy as np

from nymanlab import analytic as an
from nymanlab import kernels as kn
from nymanlab.reporting import default_zeros_path, ingest_zeros

# zeta(2) and the size of the first table zero
print("zeta(2)        =", an.riemann_zeta(2).value, " pi^2/6 =", math.pi ** 2 / 6)
gammas = ingest_zeros(default_zeros_path())
print("|zeta(1/2+ig1)| =", abs(an.riemann_zeta(complex(0.5, gammas[0])).value))

# Hardy's Z is real on the line and changes sign at every ordinate
t = np.linspace(10, 40, 7)
for ti, zi in zip(t, an.hardy_Z(t)):
    print(f"  Z({ti:5.1f}) = {zi:+.6f}")

# Dirichlet L for the character mod 4 gives Catalan's constant at s=2
chi4 = [c for c in an.character_table(4) if not c.is_principal][0]
print("L(2, chi_4)    =", an.dirichlet_L(chi4, 2).value)

# rho_alpha(u) = {alpha/u} - alpha{1/u}; its Mellin transform is (alpha - alpha^s) zeta(s)/s
for alpha in (0.2, 0.5, 0.8):
    for s in (2, 0.75 + 3j, 0.5 + 5j):
        m = kn.mellin_rho(alpha, s)
        gap = abs(m.value - kn.mellin_rho_closed(alpha, s))
        print(f"alpha={alpha}  s={s!s:>9}  |numeric - closed| = {gap:.1e}  (bound {m.abs_error_bound:.1e})")

# A(u) = sum_{n <= 1/u} log(n u) + floor(1/u); its transform at s=2 is pi^2/24
print("A^(2)          =", kn.mellin_A(2).value, " pi^2/24 =", math.pi ** 2 / 24)

# the zero-moment bump makes T(phi) vanish rapidly near 0
phi = kn.SmoothBump.zero_moment()
u = np.array([0.5, 0.1, 0.05, 0.02, 0.005])
print("T(phi)(u)      =", kn.T_sum(phi, u))
