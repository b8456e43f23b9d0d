import numpy as np
import pytest

from lukmodal.frames import (
    enumerate_frames,
    find_isomorphism,
    frame,
    grains,
    ln_frame_from_grains,
    trivial_enrichment,
    validate_ln,
)
from lukmodal.harness import (
    class_predicate,
    closure_check,
    enumerate_formulas,
    godequiv_check,
    lift,
    mod,
    mod_n,
    random_formula,
    reproduce_counterexample_boh,
    theory,
)
from lukmodal.semantics import valid
from lukmodal.syntax import BOX, Signature, depth, parse, tr_n

PHI = parse("box(p \\/ ~p)")
PLAIN2 = list(enumerate_frames(BOX, 2))
ENRICHED2 = list(enumerate_frames(BOX, 2, n=2))


def test_mod_examples():
    assert mod_n([], PLAIN2, 2) == PLAIN2
    assert mod_n(PHI, PLAIN2, 2) == [f for f in PLAIN2 if not f.relations["box"]]
    assert mod(PHI, ENRICHED2) == [g for g in ENRICHED2 if class_predicate("ru-in-r1")(g)]


def test_registry():
    refl = class_predicate("reflexive")
    assert refl(frame(BOX, ["w"], {"box": [("w", "w")]}))
    assert class_predicate("not:reflexive")(frame(BOX, ["w"], {"box": []}))
    both = class_predicate("reflexive&empty-relation")
    assert not any(both(f) for f in PLAIN2)
    with pytest.raises(ValueError):
        class_predicate("bogus")
    with pytest.raises(TypeError):
        class_predicate("C1")(PLAIN2[0])
    assert lift(class_predicate("empty-relation"))(trivial_enrichment(PLAIN2[0], 2))
    assert all(isinstance(class_predicate(c)(g), bool) for c in ("all", "C1", "C2", "ru-in-r1") for g in ENRICHED2)


def test_formula_enumeration():
    fs = enumerate_formulas(BOX, 2, ["p"])
    assert len(fs) == len(set(fs))
    assert [depth(f) for f in fs] == sorted(depth(f) for f in fs)
    assert fs[:2] == [parse("0"), parse("p")]
    assert enumerate_formulas(BOX, 2, ["p"]) == fs


def test_random_formulas_are_seeded():
    a = [random_formula(np.random.default_rng(3)) for _ in range(5)]
    b = [random_formula(np.random.default_rng(3)) for _ in range(5)]
    assert a == b
    assert all(depth(f) <= 2 for f in a)


def test_theory_examples():
    dot = frame(BOX, ["w"], {"box": []})
    th = theory(dot, 1)
    assert parse("p -> p") in th and parse("box(0)") in th
    assert theory(dot, 2, n=2) == theory(trivial_enrichment(dot, 2), 2)


def test_closure_trivial_class():
    assert closure_check(class_predicate("all"), ENRICHED2) is None
    assert closure_check(class_predicate("all"), PLAIN2) is None


def test_closure_witness_c1():
    w = closure_check(class_predicate("C1"), ENRICHED2, ["bounded-image"])
    F, G = w.frames
    assert w.construction == "bounded-image"
    assert F.size == G.size == 1 and not F.relations["box"] and not G.relations["box"]
    assert list(grains(F).values()) == [2] and list(grains(G).values()) == [1]


def test_closure_witness_c2():
    w = closure_check(class_predicate("C2"), ENRICHED2, ["gen-sub"])
    F, sub = w.frames
    paper = ln_frame_from_grains(frame(BOX, ["u", "v"], {"box": [("u", "v")]}), 2, {"u": 2, "v": 1})
    m = find_isomorphism(F, paper)
    assert m is not None
    assert sub.worlds == tuple(x for x in F.worlds if m(x) == "v")


def test_mod_sets_are_closed():
    C_enriched = class_predicate("ru-in-r1")
    assert closure_check(C_enriched, ENRICHED2, ["gen-sub", "bounded-image", "disjoint-union"]) is None
    empty = class_predicate("empty-relation")
    assert closure_check(empty, PLAIN2, ["gen-sub", "bounded-image", "disjoint-union"]) is None


def test_non_definable_plain_class_detected():
    # a two-world cycle maps onto a reflexive point
    C = class_predicate("not:reflexive")
    w = closure_check(C, PLAIN2, ["bounded-image"])
    assert w is not None


def test_translation_invariant():
    rng = np.random.default_rng(0)
    for _ in range(5):
        phi = random_formula(rng, BOX, 2)
        for m in (2, 3):
            assert mod_n(tr_n(phi, m), PLAIN2, m) == mod_n(phi, PLAIN2, 1)


def test_lift_hypothesis_transfers():
    # the lift of the empty-relation class is defined by box(0) on enriched frames
    C = class_predicate("empty-relation")
    chi = parse("box(0)")
    assert [g for g in ENRICHED2 if lift(C)(g)] == mod(chi, ENRICHED2)
    assert mod_n(chi, PLAIN2, 2) == [f for f in PLAIN2 if C(f)]


def test_boh_report():
    rep = reproduce_counterexample_boh(2)
    assert rep.ok
    g = rep.data["witness"]
    assert g["relations"]["box"]
    from lukmodal.io import frame_from_json

    fr = frame_from_json(g)
    assert validate_ln(fr) is None and valid(fr, PHI)
    assert reproduce_counterexample_boh(1).data["witness"] is None


def test_godequiv_examples():
    for name, witness in (("empty-relation", "box(0)"), ("reflexive", "box(p) -> p")):
        rep = godequiv_check(class_predicate(name), PLAIN2, 2, max_depth=2)
        assert rep.agree
        assert all(str(rep.witness[g]) == witness for g in (1, 2))
    assert godequiv_check(class_predicate("all"), PLAIN2, 2).agree
    assert "never prove" in str(godequiv_check(class_predicate("all"), PLAIN2, 2))
