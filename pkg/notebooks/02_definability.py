"""
Probing definability with frame constructions
=============================================

A class that is modally definable must be closed under generated
subframes, bounded images and disjoint unions, and must reflect canonical
extensions.  On a finite universe we can only ever refute closure, so every
script here looks for witnesses.
"""

from lukmodal import BOX, enumerate_frames, parse
from lukmodal import harness

U = list(enumerate_frames(BOX, 2))
print(len(U), "frames with at most two worlds")

# Mod of a formula over the universe
phi = parse("box(p \\/ ~p)")
print("Mod_1:", len(harness.mod_n(phi, U, 1)), " Mod_2:", len(harness.mod_n(phi, U, 2)))

# Enriched classes defined by grain conditions
UL = list(enumerate_frames(BOX, 2, n=2))
for name in ("C1", "C2"):
    C = harness.class_predicate(name, 1)
    w = harness.closure_check(C, UL, n=2)
    print(f"{C.name}: {w}")

# A class with a known defining formula agrees with its theory on the universe
report = harness.godequiv_check(harness.class_predicate("reflexive"), U, 1)
print(report)

# An enriched frame valid for phi whose underlying frame is not in Mod_2
rep = harness.reproduce_counterexample_boh(2)
print(rep.title, rep.ok)
for line in rep.lines:
    print("  ", line)
