"""
Complex algebras and canonical frames
=====================================

Every finite frame gives an algebra of maps from worlds into the chain.
Its homomorphisms into the chain form the canonical frame, and for finite
frames the projections give an isomorphism back.
"""

import numpy as np

from lukmodal import BOX, frame, ln_frame_from_grains, parse
from lukmodal.algebra import (
    boolean_skeleton,
    canonical_frame,
    check_equation,
    check_mmv_axioms,
    complex_algebra,
    iota,
    tight_complex_algebra,
)
from lukmodal.frames import is_isomorphism

F = frame(BOX, ["u", "v"], {"box": [("u", "v"), ("v", "v")]})
A = complex_algebra(F, 2)
print(A)
print("axioms:", check_mmv_axioms(A) or "all hold")

# Validity as an equation in the algebra
for text in ("box(p) -> box(box(p))", "box(p) -> p"):
    fail = check_equation(A, parse(text))
    print(f"{text:24s}", "holds" if fail is None else f"fails at {fail}")

# The enriched frame and its tight algebra
G = ln_frame_from_grains(F, 2, {"u": 2, "v": 1})
T = tight_complex_algebra(G)
print(T, "idempotents:", len(T.idempotents), "of", T.size)

# Canonical frame: one world per homomorphism
ext = canonical_frame(T)
print(ext)
print("iota is an isomorphism:", is_isomorphism(iota(G, ext, T)))

# Homomorphism value tables as a matrix, rows are canonical worlds
V = np.array([h.values for h in T.homomorphisms])
print(V)

# The Boolean skeleton keeps the same canonical relation
print(canonical_frame(boolean_skeleton(T)).base)
