"""Automorphisms Ad u resist every decomposition the search can build.

Run: python3 demos/05_automorphisms.py
"""

import time
from collections import Counter

import numpy as np

from ucpmaps.channels import random_automorphism, random_ucp_map
from ucpmaps.extremality import kadison_schwarz_gap, search_refuting_witness

rng = np.random.default_rng(3)
start = time.perf_counter()
outcomes = Counter()
for k in range(12):
    _, theta = random_automorphism((2, 3, 4)[k % 3], rng)
    result = search_refuting_witness(theta, budget=300, seed=k)
    outcomes["found"] += result.found
    for rec in result.log:
        outcomes["formed"] += rec.formed
        outcomes["valid"] += rec.valid
        outcomes["valid and trivializing"] += rec.valid and rec.trivializing
print(dict(outcomes), f"({time.perf_counter() - start:.1f}s)")

# Generic unital CP maps with full Choi rank are easy to split.
hits = 0
for k in range(10):
    phi = random_ucp_map(2, 4, rng)
    hits += search_refuting_witness(phi, budget=200, seed=k).found
print("generic maps refuted:", hits, "of 10")

# The Kadison-Schwarz inequality Phi(x x*) >= Phi(x) Phi(x)*.
phi = random_ucp_map(3, 2, rng)
gaps = [kadison_schwarz_gap(phi, rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        for _ in range(200)]
print("smallest Kadison-Schwarz gap over 200 inputs:", min(gaps))
