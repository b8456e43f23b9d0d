"""Acceptance gate: one check per criterion, each printing a single PASS/FAIL line.

Every count below is an exact comparison (tolerance zero).  Time limits
are wall-clock ceilings and are part of the pass condition.  Run directly
with ``python3 tests/test_acceptance.py`` or through pytest.
"""

import io
import json
import time
from contextlib import redirect_stdout
from itertools import product

import numpy as np
import pytest

from lukmodal.algebra import (
    boolean_skeleton,
    canonical_extension_ln,
    canonical_frame,
    check_equation,
    complex_algebra,
    dual_morphism,
    enumerate_algebra_homs,
    iota,
    is_homomorphism,
    iso_check,
    model_extension,
    product_algebra,
    sum_isomorphism,
    tight_complex_algebra,
    truth_lemma_check,
)
from lukmodal.cli import run
from lukmodal.filtroid import FiniteDistributiveLattice, check_prime_intersection_theorem, lemma_r_check
from lukmodal.frames import (
    FrameMap,
    LFrame,
    disjoint_union,
    disjoint_union_ln,
    enrichments,
    enumerate_frames,
    find_isomorphism,
    frame,
    generated_subframe,
    grains,
    is_bounded_morphism,
    is_isomorphism,
    is_ln_bounded_morphism,
    ln_frame_from_grains,
    trivial_enrichment,
    underlying,
    validate_ln,
)
from lukmodal.harness import class_predicate, enumerate_formulas, mod, mod_n, random_formula, random_frame, reproduce_counterexample_boh
from lukmodal.io import frame_from_json
from lukmodal.mvcore import TruthValue, divisors, is_ds_composition, membership_term, step_table, tau_term
from lukmodal.semantics import Model, valid, valid_n
from lukmodal.syntax import BOX, Signature, parse, tr_n

PHI = parse("box(p \\/ ~p)")
NABLA = Signature({"nabla": 2})
SEED = 0


def _line(number, title, ok, detail, elapsed):
    status = "PASS" if ok else "FAIL"
    return f"criterion {number}: {status}  {title}  [{detail}; {elapsed:.1f}s]"


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


# ---------------------------------------------------------------- the criteria


def criterion_1():
    """Mod_n of box(p \\/ ~p) over all frames with <= 3 worlds."""
    U = list(enumerate_frames(BOX, 3))
    empty = [f for f in U if not f.relations["box"]]
    got2, got1 = mod_n(PHI, U, 2), mod_n(PHI, U, 1)
    ok = got2 == empty and got1 == U
    return ok, f"{len(U)} frames; Mod_2 = {len(got2)} (want {len(empty)}), Mod_1 = {len(got1)} (want {len(U)})", 120


def criterion_2():
    """Mod of box(p \\/ ~p) over valid 2-frames with <= 2 worlds."""
    U = list(enumerate_frames(BOX, 2, n=2))
    want = [g for g in U if class_predicate("ru-in-r1")(g)]
    got = mod(PHI, U)
    return got == want, f"{len(U)} enriched frames; Mod = {len(got)}, class = {len(want)}", 120


def criterion_3():
    """Grain-1 validity equals grain-m validity of the translation; grain m implies grain 1."""
    U = list(enumerate_frames(BOX, 2))
    rng = np.random.default_rng(SEED)
    formulas = [random_formula(rng, BOX, max_depth=2, vs=("p", "q")) for _ in range(30)]
    bad, cases = 0, 0
    for f in U:
        for m in (2, 3):
            for phi in formulas:
                one = bool(valid_n(f, 1, phi))
                cases += 1
                if one != bool(valid_n(f, m, tr_n(phi, m))):
                    bad += 1
                if valid_n(f, m, phi) and not one:
                    bad += 1
    return bad == 0, f"{cases} cases, {bad} violations", 300


def criterion_4():
    """Trivial enrichment clauses over frames <= 2 worlds, n = 2, depth <= 2 in one variable."""
    U = list(enumerate_frames(BOX, 2))
    formulas = enumerate_formulas(BOX, 2, ["p"])
    bad, clause2 = 0, 0
    for f in U:
        t = trivial_enrichment(f, 2)
        if underlying(t) != f or validate_ln(t) is not None:
            bad += 1
        rich = list(enrichments(f, 2))
        for phi in formulas:
            a = bool(valid_n(f, 2, phi))
            if a != bool(valid(t, phi)):
                bad += 1
            if a:
                for g in rich:
                    clause2 += 1
                    if not valid(g, phi):
                        bad += 1
    return bad == 0, f"{len(U)} frames x {len(formulas)} formulas, {clause2} enrichment checks, {bad} violations", 300


def _partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _partitions(rest):
        yield [[head]] + part
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]


def _bounded_images(f):
    """Every quotient of ``f`` whose projection is a bounded morphism, with the map."""
    out = []
    base = f.base if hasattr(f, "base") else f
    for part in _partitions(list(base.worlds)):
        cls = {w: f"c{i}" for i, block in enumerate(part) for w in block}
        worlds = tuple(f"c{i}" for i in range(len(part)))
        rels = {name: sorted({tuple(cls[w] for w in t) for t in ts}) for name, ts in base.relations.items()}
        img = LFrame(base.sig, worlds, rels)
        m = FrameMap(base, img, cls)
        if is_bounded_morphism(m):
            out.append((img, cls))
    return out


def _ln_image(g, img, cls):
    """Enrich a bounded image of ``g.base``: each class gets the gcd of its members' grains, else grain 1."""
    from math import gcd

    s = grains(g)
    target = {}
    for w, c in cls.items():
        target[c] = gcd(target.get(c, 0), s[w])
    h = ln_frame_from_grains(img, g.n, target)
    if validate_ln(h) is not None:
        h = ln_frame_from_grains(img, g.n, {c: 1 for c in img.worlds})
    return h


def criterion_5():
    """Preservation of validity under generated subframes, bounded images and disjoint unions."""
    rng = np.random.default_rng(SEED)
    bad = 0
    exercised = {"gen-sub": 0, "image": 0, "union": 0, "ln-gen-sub": 0, "ln-image": 0, "ln-union": 0}
    for _ in range(200):
        f = random_frame(rng, BOX, 3)
        g = random_frame(rng, BOX, 3, n=2)
        other = random_frame(rng, BOX, 2)
        other_g = random_frame(rng, BOX, 2, n=2)
        phi = random_formula(rng, BOX, max_depth=2, vs=("p",))
        seeds = [w for w in f.worlds if rng.random() < 0.5] or [f.worlds[0]]
        gseeds = [w for w in g.worlds if rng.random() < 0.5] or [g.worlds[0]]
        if valid_n(f, 2, phi):
            exercised["gen-sub"] += 1
            bad += not valid_n(generated_subframe(f, seeds), 2, phi)
            for img, _ in _bounded_images(f):
                exercised["image"] += 1
                bad += not valid_n(img, 2, phi)
            if valid_n(other, 2, phi):
                exercised["union"] += 1
                bad += not valid_n(disjoint_union([f, other]), 2, phi)
        if valid(g, phi):
            exercised["ln-gen-sub"] += 1
            bad += not valid(generated_subframe(g, gseeds), phi)
            for img, cls in _bounded_images(g):
                h = _ln_image(g, img, cls)
                if not is_ln_bounded_morphism(FrameMap(g, h, cls)):
                    bad += 1
                    continue
                exercised["ln-image"] += 1
                bad += not valid(h, phi)
            if valid(other_g, phi):
                exercised["ln-union"] += 1
                bad += not valid(disjoint_union_ln([g, other_g]), phi)
    nonvacuous = all(v > 0 for v in exercised.values())
    detail = ", ".join(f"{k} {v}" for k, v in exercised.items())
    return bad == 0 and nonvacuous, f"200 instances ({detail}), {bad} violations", 600


def criterion_6():
    """Semantic validity equals the equation phi = 1 in the (tight) complex algebra."""
    formulas = enumerate_formulas(BOX, 2, ["p", "q"])
    bad, cases = 0, 0
    for n in (1, 2):
        for f in enumerate_frames(BOX, 2):
            A = complex_algebra(f, n)
            for phi in formulas:
                cases += 1
                bad += bool(valid_n(f, n, phi)) != (check_equation(A, phi) is None)
        for g in enumerate_frames(BOX, 2, n=n):
            A = tight_complex_algebra(g)
            for phi in formulas:
                cases += 1
                bad += bool(valid(g, phi)) != (check_equation(A, phi) is None)
    return bad == 0, f"{cases} frame/formula pairs, {bad} discrepancies", 600


def _all_alpha(A, vs):
    grids = np.meshgrid(*([np.arange(A.size)] * len(vs)), indexing="ij")
    return {p: g.ravel() for p, g in zip(vs, grids)}


def criterion_7():
    """Truth lemma on canonical models of complex algebras, unary and binary signatures."""
    bad, algebras = 0, 0
    for sig, vs in ((BOX, ["p", "q"]), (NABLA, ["p", "q"])):
        formulas = enumerate_formulas(sig, 2, vs)
        for f in enumerate_frames(sig, 2):
            A = complex_algebra(f, 2)
            algebras += 1
            if truth_lemma_check(A, _all_alpha(A, vs), formulas) is not None:
                bad += 1
    return bad == 0, f"{algebras} algebras, all assignments of p and q, {bad} discrepancies", 600


def criterion_8():
    """iota is an isomorphism, and restriction to the Boolean skeleton is an R-preserving bijection."""
    bad, count = 0, 0
    for n in (1, 2):
        for g in enumerate_frames(BOX, 3, n=n):
            count += 1
            A = tight_complex_algebra(g)
            ext = canonical_frame(A)
            if not is_isomorphism(iota(g, ext, A)):
                bad += 1
                continue
            B = boolean_skeleton(A)
            ultra = {frozenset(int(b) for b in B.embedding[np.flatnonzero(h.values == n)]) for h in B.homomorphisms}
            restricted = [frozenset(int(b) for b in A.idempotents if h(b) == n) for h in A.homomorphisms]
            if len(set(restricted)) != len(restricted) or set(restricted) != ultra:
                bad += 1
                continue
            atoms_up = {frozenset(int(b) for b in A.idempotents if A.leq(a, b)) for a in A.atoms}
            if ultra != atoms_up:
                bad += 1
                continue
            skel = canonical_frame(B)
            key_b = {frozenset(int(b) for b in B.embedding[np.flatnonzero(h.values == n)]): w for h, w in zip(B.homomorphisms, skel.worlds)}
            mapping = {w: key_b[r] for w, r in zip(ext.worlds, restricted)}
            if not is_isomorphism(FrameMap(ext.base, skel.base, mapping)):
                bad += 1
    return bad == 0, f"{count} enriched frames, {bad} failures", 600


def _random_model(rng, g, vs):
    s = grains(g)
    table = {(w, p): TruthValue(int(rng.integers(0, s[w] + 1)) * (g.n // s[w]), g.n) for w in g.worlds for p in vs}
    return Model(g.base, g.n, table, tuple(vs))


def criterion_9():
    """Values are preserved by iota into the model extension; canonical extensions reflect validity."""
    rng = np.random.default_rng(SEED)
    bad, reflected = 0, 0
    for _ in range(50):
        g = random_frame(rng, BOX, 3, n=int(rng.choice([1, 2, 3])))
        m = _random_model(rng, g, ("p", "q"))
        plain_ext, plain_iota = model_extension(m)
        ext, i = model_extension(m, frame=g)
        ce = canonical_extension_ln(g)
        for _ in range(4):
            phi = random_formula(rng, BOX, max_depth=2, vs=("p", "q"))
            for model, emb in ((ext, i), (plain_ext, plain_iota)):
                vals, evals = m.values_of(phi), model.values_of(phi)
                bad += any(evals[emb(w)] != vals[w] for w in g.worlds)
            if valid(ce, phi):
                reflected += 1
                bad += not valid(g, phi)
    return bad == 0, f"50 models x 4 formulas, {reflected} reflection cases, {bad} failures", 600


def criterion_10():
    """Tight complex algebra of a disjoint union is isomorphic to the product."""
    rng = np.random.default_rng(SEED)
    bad = 0
    for _ in range(20):
        f, g = random_frame(rng, BOX, 2, n=2), random_frame(rng, BOX, 2, n=2)
        h = sum_isomorphism([f, g])
        U = tight_complex_algebra(disjoint_union_ln([f, g]))
        P = product_algebra(tight_complex_algebra(f), tight_complex_algebra(g))
        explicit = is_homomorphism(h) and h.is_injective() and h.is_onto()
        bad += not explicit or iso_check(U, P) is None
    return bad == 0, f"20 pairs, {bad} failures", 600


def criterion_11():
    """Duals of homomorphisms are bounded morphisms with the injective/surjective transfer."""
    rng = np.random.default_rng(SEED)
    universe = list(enumerate_frames(BOX, 2, n=2))
    bad, homs, inj, surj = 0, 0, 0, 0
    for a in universe:
        for b in universe:
            A, B = tight_complex_algebra(a), tight_complex_algebra(b)
            for h in enumerate_algebra_homs(A, B):
                homs += 1
                bad += not is_ln_bounded_morphism(dual_morphism(h, canonical_frame(A), canonical_frame(B)))
    for _ in range(20):
        f, g = random_frame(rng, BOX, 2, n=2), random_frame(rng, BOX, 2, n=2)
        u = disjoint_union_ln([f, g])
        for src, tgt in ((u, f), (f, u), (u, g), (g, u)):
            A, B = tight_complex_algebra(src), tight_complex_algebra(tgt)
            for h in enumerate_algebra_homs(A, B):
                d = dual_morphism(h)
                bad += not is_ln_bounded_morphism(d)
                if h.is_injective():
                    inj += 1
                    bad += not d.is_onto()
                if h.is_onto():
                    surj += 1
                    bad += not d.is_injective()
    ok = bad == 0 and inj > 0 and surj > 0
    return ok, f"{homs} homomorphisms between <= 2-world frames; 20 instances with {inj} injective, {surj} onto; {bad} failures", 600


def criterion_12():
    """Step and membership terms for every n <= 6."""
    bad, terms = 0, 0
    for n in range(1, 7):
        for i in range(1, n + 1):
            t = tau_term(n, i)
            terms += 1
            bad += t.table(n) != step_table(n, i) or not is_ds_composition(t)
        for m in divisors(n):
            terms += 1
            bad += membership_term(n, m).table(n) != tuple(n if (a * m) % n == 0 else 0 for a in range(n + 1))
    return bad == 0, f"{terms} terms, {bad} mismatches", 60


def _closure_cli(cls, ops):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = run(["closure", "--class", cls, "--n", "2", "--k", "1", "--max-worlds", "2", "--ops", ops, "--json"])
    return code, json.loads(buf.getvalue())


def criterion_13():
    """The closure command reproduces both non-definability witnesses."""
    single = lambda s: ln_frame_from_grains(frame(BOX, ["x"], {"box": []}), 2, {"x": s})
    pair = ln_frame_from_grains(frame(BOX, ["u", "v"], {"box": [("u", "v")]}), 2, {"u": 2, "v": 1})
    code1, w1 = _closure_cli("C1", "bounded-image")
    F, G = (frame_from_json(x) for x in w1["frames"])
    ok1 = code1 == 1 and w1["construction"] == "bounded-image"
    ok1 = ok1 and find_isomorphism(F, single(2)) is not None and find_isomorphism(G, single(1)) is not None
    code2, w2 = _closure_cli("C2", "gen-sub")
    H, sub = (frame_from_json(x) for x in w2["frames"])
    m = find_isomorphism(H, pair)
    ok2 = code2 == 1 and w2["construction"] == "gen-sub" and m is not None
    ok2 = ok2 and sub.worlds == tuple(w for w in H.worlds if m(w) == "v") and find_isomorphism(sub, single(1)) is not None
    return ok1 and ok2, f"C1 bounded-image witness {'matches' if ok1 else 'differs'}; C2 generated-subframe witness {'matches' if ok2 else 'differs'}", 60


def criterion_14():
    """An enriched frame in Mod(box(p \\/ ~p)) outside the lift of Mod_2."""
    rep = reproduce_counterexample_boh(2)
    g = frame_from_json(rep.data["witness"]) if rep.data["witness"] else None
    U = list(enumerate_frames(BOX, 2))
    C = mod_n(PHI, U, 2)
    ok = g is not None and validate_ln(g) is None and bool(valid(g, PHI)) and g.base not in C and bool(g.relations["box"])
    return ok, f"witness {g!r}", 60


def criterion_15():
    """Prime intersection theorem and the three-way characterisation of the canonical relation."""
    bad = 0
    two = FiniteDistributiveLattice.chain(2)
    f, seen_full = check_prime_intersection_theorem(two, 2)
    bad += f is not None
    seen = [seen_full]
    for L in (FiniteDistributiveLattice.chain(3), FiniteDistributiveLattice.boolean(2)):
        f, s = check_prime_intersection_theorem(L, 2, seeds=100, rng=np.random.default_rng(SEED))
        bad += f is not None
        seen.append(s)
    pairs, algebras = 0, 0
    for sig, name in ((BOX, "box"), (NABLA, "nabla")):
        for fr in enumerate_frames(sig, 2):
            for n in (1, 2):
                failure, checked = lemma_r_check(complex_algebra(fr, n), name)
                algebras += 1
                pairs += checked
                bad += failure is not None
    return bad == 0, f"filtroids examined {seen}; {algebras} algebras, {pairs} world tuples; {bad} failures", 600


CRITERIA = [
    (1, "Mod_n of box(p \\/ ~p), frames <= 3 worlds", criterion_1),
    (2, "Mod of box(p \\/ ~p), enriched frames <= 2 worlds", criterion_2),
    (3, "translation tr_m and grain monotonicity", criterion_3),
    (4, "trivial enrichment clauses", criterion_4),
    (5, "preservation under constructions", criterion_5),
    (6, "validity vs algebraic equations", criterion_6),
    (7, "truth lemma, unary and binary", criterion_7),
    (8, "finite duality and Boolean restriction", criterion_8),
    (9, "model extension and reflection", criterion_9),
    (10, "tight algebra of a sum", criterion_10),
    (11, "dual morphisms", criterion_11),
    (12, "step and membership terms", criterion_12),
    (13, "closure witnesses via the CLI", criterion_13),
    (14, "boh(2) counterexample", criterion_14),
    (15, "filtroid theorem and canonical relation lemma", criterion_15),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, check, record_criterion):
    with Timer() as t:
        ok, detail, limit = check()
    ok = ok and t.elapsed < limit
    record_criterion(_line(number, title, ok, f"{detail}; limit {limit}s", t.elapsed))
    assert ok


if __name__ == "__main__":
    failures = 0
    for number, title, check in CRITERIA:
        with Timer() as t:
            ok, detail, limit = check()
        ok = ok and t.elapsed < limit
        failures += not ok
        print(_line(number, title, ok, f"{detail}; limit {limit}s", t.elapsed), flush=True)
    raise SystemExit(1 if failures else 0)
