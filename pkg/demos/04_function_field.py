"""
Elliptic curves over small finite fields
========================================

For P(T) = 1 - aT + qT^2 with a^2 <= 4q every root sits on |T| = q^-1/2,
i.e. on the unit circle in z = sqrt(q) T.  Synthetic polynomials break
that bound and the scattering multiplier stops being inner.
"""

import math

import numpy as np

from nymanlab import function_field as ff

for P in ff.genuine_curves(qs=(5,)):
    rh = ff.ff_rh_check(P)
    print(f"q=5 a={-P.coeffs[1]:+d}  |z| = {np.round(np.abs(rh.roots.z), 15)}  {rh.verdict}")

P = ff.LPolynomial(2, (1, -4, 2), "synthetic")
rh = ff.ff_rh_check(P)
rep = ff.ff_causality(P)
print("\nsynthetic q=2, 1 - 4T + 2T^2: |z| =", np.abs(rh.roots.z), rh.verdict)
print("  bad zeros:", rh.bad_zeros.zeros, " verdict:", rep.verdict, " |S| =", rep.witness_modulus)

# V(1,z) is a Moebius factor of modulus one on the circle
q = 5
z = np.exp(1j * np.linspace(0, 2 * np.pi, 8, endpoint=False))
print("\n|V(1,z)| on |z|=1:", np.round([abs(ff.ff_multiplier_eval("V", q, zi)) for zi in z], 15))

# the discrete kernel a(m) reproduces A(1,z) = (sqrt q - 1)(1 + z)/(sqrt q - z)
Ad = ff.ff_discrete_conv(ff.DiscreteSequence(0, [1.0]), q)
z0 = 0.7j
print("z-transform of A delta_0:", Ad.ztransform(z0), " closed form:", ff.A_closed_form(q, z0))

# V = 1 - A is an isometry of l^2 on the module group
f = ff.DiscreteSequence(-2, np.array([1.0, -0.5, 2.0, 0.25]))
print("||f||^2 =", f.norm2(), " ||Vf||^2 =", ff.ff_V(f, q).norm2())
print("sqrt(5)^-1 =", 1 / math.sqrt(5), " |T0| =", np.abs(ff.ff_roots(ff.LPolynomial(5, (1, -2, 5))).T))
