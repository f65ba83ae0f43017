"""Moving between Kraus operators and the Choi matrix.

Run: python3 demos/02_choi_kraus.py
"""

import numpy as np

from ucpmaps import channels as ch

rng = np.random.default_rng(11)

# A unital CP map on M_3 written with 5 redundant Kraus operators.
phi = ch.random_ucp_map(3, 5, rng)
# Mix them with a random 7x5 isometry: same map, 7 operators.
iso = np.linalg.qr(rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7)))[0][:, :5]
redundant = ch.KrausMap.of([sum(iso[i, j] * phi.kraus[j] for j in range(5)) for i in range(7)])

print("operators given:", len(phi.kraus), "and", len(redundant.kraus))
print("map distance between the two:", ch.map_distance(phi, redundant))

c = ch.to_choi(redundant)
canon = ch.kraus_from_choi(c)
print("size (Choi rank):", ch.size(redundant), " canonical operators:", len(canon.kraus))
print("round trip distance:", ch.map_distance(canon, phi))
same = all(np.allclose(x, y) for x, y in zip(canon.kraus, ch.canonicalize(phi).kraus))
print("canonical forms agree operator by operator:", same)
print("flags:", ch.classify(phi))

# The transpose map is positive but not completely positive.
t = ch.transpose_choi(2)
flags = ch.classify(t)
print("\ntranspose on M_2: cp =", flags.cp, " min Choi eigenvalue =", flags.defects["choi_min_eigenvalue"])
