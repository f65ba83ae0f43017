"""A map that is extreme among unital CP maps, yet splits with matrix weights.

Phi(x) = e11 x e11 + e21 x e12 sends x to x_11 * 1.

Run: python3 demos/04_phi_v_separation.py
"""

import numpy as np

from ucpmaps.channels import KrausMap, ad, identity_map
from ucpmaps.extremality import search_refuting_witness, usual_extreme_check
from ucpmaps.matrixcore import matrix_units
from ucpmaps.opconvex import DecompositionWitness, validate_witness


def e(i, j):
    return matrix_units(2, i, j)


phi = KrausMap.of([e(1, 1), e(2, 1)])
for i, j in [(1, 1), (1, 2), (2, 1), (2, 2)]:
    print(f"Phi(e{i}{j}) =", phi(e(i, j)).real.tolist())

cert = usual_extreme_check(phi)
print("\nusual extremality:", cert.kind, " smallest singular value of {v_i v_j*}:",
      cert.evidence["min_singular_value"])

# A hand-made decomposition: weights e11 and e22, inner maps id and the flip.
w = DecompositionWitness(e(1, 1), identity_map(2), e(2, 2), ad(e(1, 2) + e(2, 1)))
verdict = validate_witness(phi, w)
print("hand witness valid:", verdict.valid, " trivializing:", verdict.trivializing)
print("  a a* - lam 1 has norm", verdict.residuals["scalar_aa"])

# The randomized search finds one of its own.
result = search_refuting_witness(phi, budget=500, seed=7)
print("\nsearch found a witness after", result.trials_used, "trials, family:", result.log[-1].family)
print("  a =", np.round(result.witness.a, 3).tolist())
print("  b =", np.round(result.witness.b, 3).tolist())
