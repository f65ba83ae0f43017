"""Gluing two automorphisms into a third one with matrix coefficients.

With lam in (0, 1) and unitaries u, v, w, the coefficients
a = sqrt(lam) u v* and b = sqrt(1 - lam) u w* satisfy a a* + b b* = 1, and
Ad a o Ad v + Ad b o Ad w is exactly Ad u.

Run: python3 demos/03_operational_combination.py
"""

import numpy as np

from ucpmaps.channels import ad, map_distance
from ucpmaps.extremality import certify_thm37
from ucpmaps.matrixcore import random_unitary
from ucpmaps.opconvex import DecompositionWitness, op_convex_combine, validate_witness
from ucpmaps.partitions import bridge_coefficients

u, v, w = (random_unitary(3, s) for s in (1, 2, 3))
lam = 0.3
coeffs = bridge_coefficients(u, v, w, lam)
combo = op_convex_combine(coeffs, [ad(v), ad(w)])
print("distance to Ad u:", map_distance(combo, ad(u)))

# The decomposition is "trivial": a a* and b b* are scalars.
a, b = coeffs.members
witness = DecompositionWitness(a, ad(v), b, ad(w))
verdict = validate_witness(ad(u), witness)
print("valid:", verdict.valid, " trivializing:", verdict.trivializing, " lambda:", round(verdict.lam, 12))

# For an automorphism that is forced: every valid decomposition looks like this.
cert = certify_thm37(ad(u), witness)
print("certificate:", cert.kind, " worst residual:", f"{max(cert.residuals.values()):.1e}")

# Random lam values, all three sizes.
rng = np.random.default_rng(0)
worst = 0.0
for k in range(100):
    n = (2, 3, 4)[k % 3]
    u, v, w = (random_unitary(n, int(s)) for s in rng.integers(0, 2**31, 3))
    worst = max(worst, map_distance(op_convex_combine(
        bridge_coefficients(u, v, w, rng.uniform(0.01, 0.99)), [ad(v), ad(w)]), ad(u)))
print("worst of 100 random gluings:", worst)
