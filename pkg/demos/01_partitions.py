"""Three ways for a finite family of matrices to "sum to one".

Run: python3 demos/01_partitions.py
"""

import numpy as np

from ucpmaps import matrixcore as mc
from ucpmaps.partitions import verify_cs, verify_fop, verify_lindblad


def e(i, j):
    return mc.matrix_units(2, i, j)


families = {
    "{e11, e21}": [e(1, 1), e(2, 1)],
    "{e11, e12}": [e(1, 1), e(1, 2)],
    "{e11, e22}": [e(1, 1), e(2, 2)],
}

print(f"{'family':<12} {'sum v v*':>10} {'sum v* v':>10} {'PSD sum':>10}")
for name, vs in families.items():
    fop, lind, cs = verify_fop(vs), verify_lindblad(vs), verify_cs(vs)
    cells = [f"{'ok' if r.passed else 'x'} {r.defect:.3f}" for r in (fop, lind, cs)]
    print(f"{name:<12} " + " ".join(f"{c:>10}" for c in cells))

# The sums v v* and v* v differ for {e11, e21}: one is 1, the other 2 e11.
vs = families["{e11, e21}"]
print("\nsum v v* =\n", sum(v @ mc.dagger(v) for v in vs).real)
print("sum v* v =\n", sum(mc.dagger(v) @ v for v in vs).real)
print("failing defects equal sqrt(2):", np.isclose(verify_lindblad(vs).defect, np.sqrt(2)))
