"""
Truth values, formulas and the two validity relations
=====================================================

A walk through evaluating a formula on a small frame, first with every
world using the full chain of grain n, then with an enriched frame that
restricts some worlds to a subchain.
"""

import numpy as np

from lukmodal import BOX, frame, ln_frame_from_grains, parse, to_text, tr_n, valid, valid_n
from lukmodal.mvcore import TruthValue, chain, imp, oplus

# The chain with four values, and a couple of operations on it
L3 = chain(3)
print([str(a) for a in L3])
a, b = TruthValue(2, 3), TruthValue(1, 3)
print("a -> b =", imp(a, b), "  a (+) b =", oplus(a, b))

# Formulas are parsed from text; sugar is kept for printing
phi = parse("box(p \\/ ~p)")
print("phi:", to_text(phi))

# A two-world frame where u sees v
F = frame(BOX, ["u", "v"], {"box": [("u", "v")]})

# Excluded middle under a box holds two-valued but not three-valued
for n in (1, 2):
    verdict = valid_n(F, n, phi)
    print(f"grain {n}: valid={bool(verdict)}", "" if verdict else f"countermodel {verdict.countermodel}")

# The translation recovers the two-valued verdict at any grain
print("tr_2(phi):", to_text(tr_n(phi, 2)))
print("grain 2 on the translation:", bool(valid_n(F, 2, tr_n(phi, 2))))

# Enriched frames: v only takes values 0 and 1, so the formula holds again
G = ln_frame_from_grains(F, 2, {"u": 2, "v": 1})
print(G)
print("enriched validity:", bool(valid(G, phi)))

# Valuation counts grow fast, which is why validity is vectorized
sizes = np.array([(n + 1) ** F.size for n in range(1, 6)])
print("valuations of one variable on F, n = 1..5:", sizes)
