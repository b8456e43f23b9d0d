"""
Filtroids on powers of a finite distributive lattice
====================================================

A filtroid on L^k is an up-set that contains every tuple with a top
component and is closed under meets of tuples that differ in one place.
Each proper one is the intersection of the prime filtroids above it.
"""

import numpy as np

from lukmodal import BOX, frame
from lukmodal.algebra import complex_algebra
from lukmodal.filtroid import (
    FiniteDistributiveLattice,
    check_prime_intersection_theorem,
    enumerate_filtroids,
    lemma_r_check,
    prime_filtroids,
)

for name, L in (("chain(3)", FiniteDistributiveLattice.chain(3)), ("boolean(2)", FiniteDistributiveLattice.boolean(2))):
    all_f = enumerate_filtroids(L, 2)
    primes = prime_filtroids(L, 2)
    print(f"{name}: {len(all_f)} filtroids on L^2, {len(primes)} prime")
    failure, seen = check_prime_intersection_theorem(L, 2)
    print("   theorem:", "holds" if failure is None else failure, f"({seen} proper checked)")

# Random closures on a bigger lattice
L = FiniteDistributiveLattice.boolean(3)
failure, seen = check_prime_intersection_theorem(L, 2, seeds=50, rng=np.random.default_rng(1))
print("boolean(3), 50 seeds:", "holds" if failure is None else failure)

# The canonical relation three ways on a small complex algebra
F = frame(BOX, ["u", "v"], {"box": [("u", "v")]})
failure, checked = lemma_r_check(complex_algebra(F, 2), "box")
print("three-way check on", checked, "pairs:", "agree" if failure is None else failure)
