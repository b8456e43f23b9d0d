"""Definability workbench over finite universes of frames.

A finite universe can only refute definability (a closure witness shows a
class is not definable) or report consistency up to the search bound; it
never proves definability, because the classes in question also contain
infinite frames.
"""

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .algebra import canonical_extension_l, canonical_extension_ln
from .frames import (
    FrameMap,
    LnFrame,
    disjoint_union,
    disjoint_union_ln,
    enumerate_frames,
    generated_closure,
    is_bounded_morphism,
    is_ln_bounded_morphism,
    restrict,
    surjections,
    validate_ln,
)
from .io import frame_to_json
from .mvcore import divisors
from .semantics import DEFAULT_BUDGET, valid, valid_n
from .syntax import (
    BOX,
    Imp,
    Join,
    Meet,
    Modal,
    Neg,
    Odot,
    Oplus,
    Var,
    Zero,
    parse,
)

# ---------------------------------------------------------------- classes


@dataclass(frozen=True)
class ClassPredicate:
    """Named class of frames. ``kind`` is ``"l"`` (reads only the relations) or ``"ln"``."""

    name: str
    test: object = field(compare=False)
    kind: str = "l"

    def __call__(self, fr):
        if self.kind == "ln" and not isinstance(fr, LnFrame):
            raise TypeError(f"class {self.name} needs enriched frames")
        return bool(self.test(fr))

    def complement(self):
        return ClassPredicate(f"not:{self.name}", lambda f: not self(f), self.kind)

    def __and__(self, other):
        kind = "ln" if "ln" in (self.kind, other.kind) else "l"
        return ClassPredicate(f"{self.name}&{other.name}", lambda f: self(f) and other(f), kind)


def _rels(fr):
    return (fr.base if isinstance(fr, LnFrame) else fr).relations


def _successor_set(fr, name, u):
    return {v for v in fr.successors[name][u]}


def all_frames():
    return ClassPredicate("all", lambda f: True)


def empty_relation():
    return ClassPredicate("empty-relation", lambda f: all(not ts for ts in _rels(f).values()))


def reflexive():
    def test(f):
        return all((u,) * (f.sig.arity(name) + 1) in _rels(f)[name] for name in f.sig for u in f.worlds)

    return ClassPredicate("reflexive", test)


def successors_in_r1():
    """Every successor tuple of every world lies in ``r_1``."""

    def test(f):
        r1 = f.r[1]
        return all(w in r1 for name in f.sig for u in f.worlds for v in f.successors[name][u] for w in v)

    return ClassPredicate("ru-in-r1", test, "ln")


def avoids_r(k):
    """No world lies in ``r_k``."""
    return ClassPredicate(f"C1[k={k}]", lambda f: not f.r.get(k, frozenset()), "ln")


def some_world_sees_r(k):
    """Some world ``u`` has every world of ``r_k`` among its (unary) successors."""

    def test(f):
        rk = f.r.get(k, frozenset())
        return any(all((w,) in _successor_set(f, name, u) for w in rk) for name in f.sig for u in f.worlds)

    return ClassPredicate(f"C2[k={k}]", test, "ln")


def lift(C):
    """Enriched frames whose underlying frame is in ``C``."""
    return ClassPredicate(f"lift:{C.name}", lambda f: C(f.base), "ln")


def class_predicate(spec, k=1):
    """Look up a class by name; ``not:NAME`` complements and ``A&B`` intersects."""
    if "&" in spec:
        parts = [class_predicate(s, k) for s in spec.split("&")]
        out = parts[0]
        for p in parts[1:]:
            out = out & p
        return out
    if spec.startswith("not:"):
        return class_predicate(spec[4:], k).complement()
    if spec.startswith("lift:"):
        return lift(class_predicate(spec[5:], k))
    table = {
        "all": all_frames,
        "empty-relation": empty_relation,
        "reflexive": reflexive,
        "ru-in-r1": successors_in_r1,
        "C1": lambda: avoids_r(k),
        "C2": lambda: some_world_sees_r(k),
    }
    try:
        return table[spec]()
    except KeyError:
        raise ValueError(f"unknown class {spec!r}; known: {sorted(table)}") from None


# ---------------------------------------------------------------- formulas


def enumerate_formulas(sig, max_depth, vs, with_zero=True):
    """All formulas over ``0``, the variables, ``~``, ``->`` and the modalities up to ``max_depth``.

    Order: by depth, then constructor (``~``, ``->``, modalities in signature
    order), then argument positions in enumeration order.
    """
    atoms = ([Zero()] if with_zero else []) + [Var(p) for p in vs]
    levels = [atoms]
    allf = list(atoms)
    for d in range(1, max_depth + 1):
        prev = allf
        fresh = set(levels[-1])
        new = []
        for a in levels[-1]:
            new.append(Neg(a))
        for a, b in product(prev, repeat=2):
            if a in fresh or b in fresh:
                new.append(Imp(a, b))
        for name in sig:
            for args in product(prev, repeat=sig.arity(name)):
                if any(x in fresh for x in args):
                    new.append(Modal(name, tuple(args)))
        levels.append(new)
        allf = allf + new
    return allf


_BINARIES = (Imp, Oplus, Odot, Join, Meet)


def random_formula(rng, sig=BOX, max_depth=2, vs=("p", "q")):
    """Random formula (sugar connectives included) of depth at most ``max_depth``."""
    names = list(sig)

    def go(d):
        if d == 0 or rng.random() < 0.25:
            r = rng.random()
            if r < 0.1:
                return Zero()
            return Var(vs[int(rng.integers(len(vs)))])
        choice = int(rng.integers(2 + len(_BINARIES) + len(names)))
        if choice == 0:
            return Neg(go(d - 1))
        if choice == 1 and names:
            name = names[int(rng.integers(len(names)))]
            return Modal(name, tuple(go(d - 1) for _ in range(sig.arity(name))))
        if choice <= 1 + len(_BINARIES):
            cls = _BINARIES[(choice - 2) % len(_BINARIES)]
            return cls(go(d - 1), go(d - 1))
        name = names[(choice - 2 - len(_BINARIES)) % len(names)]
        return Modal(name, tuple(go(d - 1) for _ in range(sig.arity(name))))

    return go(max_depth)


def random_frame(rng, sig=BOX, max_worlds=3, n=None, density=0.4):
    """Random frame; with ``n`` a random valid enrichment as well."""
    from .frames import LFrame, enrichments, world_labels

    k = int(rng.integers(1, max_worlds + 1))
    worlds = world_labels(k)
    rels = {}
    for name in sig:
        tuples = list(product(worlds, repeat=sig.arity(name) + 1))
        rels[name] = [t for t in tuples if rng.random() < density]
    base = LFrame(sig, worlds, rels)
    if n is None:
        return base
    options = list(enrichments(base, n))
    return options[int(rng.integers(len(options)))]


# ---------------------------------------------------------------- Mod and theories


def _as_list(phis):
    if isinstance(phis, (list, tuple, set, frozenset)):
        return list(phis)
    return [phis]


def mod_n(phis, universe, n, budget=DEFAULT_BUDGET):
    """Frames of ``universe`` on which every formula is valid at grain ``n``."""
    phis = _as_list(phis)
    return [f for f in universe if not phis or valid_n(f, n, phis, budget)]


def mod(phis, universe, budget=DEFAULT_BUDGET):
    """Enriched frames of ``universe`` on which every formula is valid."""
    phis = _as_list(phis)
    return [f for f in universe if not phis or valid(f, phis, budget)]


def theory(fr, max_depth, nvars=1, n=None, sig=None, budget=DEFAULT_BUDGET):
    """Formulas up to the bounds valid on ``fr`` (at grain ``n`` for plain frames)."""
    sig = sig or fr.sig
    vs = [chr(ord("p") + i) for i in range(nvars)]
    out = []
    for phi in enumerate_formulas(sig, max_depth, vs):
        ok = valid(fr, phi, budget) if isinstance(fr, LnFrame) and n is None else valid_n(fr, n or 1, phi, budget)
        if ok:
            out.append(phi)
    return out


# ---------------------------------------------------------------- closure checks


CONSTRUCTIONS = ("gen-sub", "bounded-image", "disjoint-union", "canonical-ext-reflection")


@dataclass
class ClosureViolation:
    construction: str
    frames: list
    mapping: dict = None
    note: str = ""

    def as_dict(self):
        return {
            "construction": self.construction,
            "frames": [frame_to_json(f) for f in self.frames],
            "mapping": self.mapping,
            "note": self.note,
        }

    def __str__(self):
        lines = [f"closure under {self.construction} fails: {self.note}"]
        for i, f in enumerate(self.frames):
            lines.append(f"  frame {i}: {f!r}")
        if self.mapping:
            lines.append(f"  map: {self.mapping}")
        return "\n".join(lines)


def _seed_sets(worlds):
    worlds = list(worlds)
    for mask in range(1, 1 << len(worlds)):
        yield [w for i, w in enumerate(worlds) if mask >> i & 1]


def closure_check(C, universe, constructions=CONSTRUCTIONS, n=1):
    """First witness that ``C`` (restricted to ``universe``) is not closed, or ``None``.

    Members are scanned in universe order, so the witness is the first one
    in the universe's deterministic order.  ``n`` is the grain used for
    canonical extensions of plain frames.
    """
    universe = list(universe)
    member = [C(f) for f in universe]
    for con in constructions:
        if con not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction {con!r}")
    ln = bool(universe) and isinstance(universe[0], LnFrame)

    for con in constructions:
        if con == "gen-sub":
            for f, ok in zip(universe, member):
                if not ok:
                    continue
                for seeds in _seed_sets(f.worlds):
                    keep = generated_closure(f, seeds)
                    sub = restrict(f, keep)
                    if not C(sub):
                        return ClosureViolation(con, [f, sub], {w: w for w in sub.worlds}, f"generated by {seeds}")
        elif con == "bounded-image":
            check = is_ln_bounded_morphism if ln else is_bounded_morphism
            for f, ok in zip(universe, member):
                if not ok:
                    continue
                for g, gok in zip(universe, member):
                    if gok or g.size > f.size:
                        continue
                    for mapping in surjections(f.worlds, g.worlds):
                        if check(FrameMap(f, g, mapping)):
                            return ClosureViolation(con, [f, g], mapping, "onto bounded morphism from a member")
        elif con == "disjoint-union":
            union = disjoint_union_ln if ln else disjoint_union
            members = [f for f, ok in zip(universe, member) if ok]
            for i, f in enumerate(members):
                for g in members[i:]:
                    u = union([f, g])
                    if not C(u):
                        return ClosureViolation(con, [f, g, u], None, "union of members")
        elif con == "canonical-ext-reflection":
            for f, ok in zip(universe, member):
                if ok:
                    continue
                ext = canonical_extension_ln(f) if ln else canonical_extension_l(f, n)
                if C(ext):
                    return ClosureViolation(con, [f, ext], None, "canonical extension is a member")
    return None


# ---------------------------------------------------------------- paper examples


@dataclass
class Report:
    title: str
    ok: bool
    lines: list
    data: dict

    def __str__(self):
        return "\n".join([self.title] + ["  " + s for s in self.lines])

    def as_dict(self):
        return {"title": self.title, "ok": self.ok, "lines": self.lines, **self.data}


def reproduce_counterexample_boh(n, max_worlds=2):
    """An enriched frame validating ``box(p \\/ ~p)`` whose underlying frame is not in Mod_n of it."""
    phi = parse("box(p \\/ ~p)")
    plain = list(enumerate_frames(BOX, max_worlds))
    mod_plain = mod_n(phi, plain, n)
    if n == 1:
        everything = len(mod_plain) == len(plain)
        return Report(
            "boh(2) at grain 1",
            everything,
            [
                f"Mod_1 contains all {len(plain)} frames with <= {max_worlds} worlds",
                "so the lifted class is every enriched frame and no counterexample exists",
            ],
            {"witness": None},
        )
    members = {f for f in mod_plain}
    for g in enumerate_frames(BOX, max_worlds, n=n):
        if g.base not in members and valid(g, phi):
            ok = validate_ln(g) is None and any(g.relations.values())
            return Report(
                f"boh(2) at grain {n}",
                ok,
                [
                    f"witness {g!r}",
                    f"valid on the enriched frame, but the underlying frame has a nonempty relation",
                    f"and so is refuted at grain {n} (Mod_n is the empty-relation frames)",
                ],
                {"witness": frame_to_json(g)},
            )
    return Report(f"boh(2) at grain {n}", False, ["no witness within the bound"], {"witness": None})


@dataclass
class GodequivReport:
    class_name: str
    n: int
    max_depth: int
    separated: dict
    witness: dict
    agree: bool

    def __str__(self):
        lines = [f"class {self.class_name}, grains 1 and {self.n}, formulas of depth <= {self.max_depth}"]
        for g in sorted(self.separated):
            w = self.witness[g]
            lines.append(
                f"  grain {g}: {'separated' if self.separated[g] else 'not separated'} by the bounded theory"
                + (f"; single-formula witness {w}" if w is not None else "")
            )
        lines.append(f"  {'agreement' if self.agree else 'DISAGREEMENT: candidate for manual inspection'}")
        lines.append("  (a finite universe can refute a separation at this bound, never prove definability)")
        return "\n".join(lines)

    def as_dict(self):
        return {
            "class": self.class_name,
            "n": self.n,
            "max_depth": self.max_depth,
            "separated": {str(k): v for k, v in self.separated.items()},
            "witness": {str(k): (str(v) if v is not None else None) for k, v in self.witness.items()},
            "agree": self.agree,
        }


def godequiv_check(C, universe, n, max_depth=2, nvars=1, sig=None):
    """Compare bounded definability of ``C`` within ``universe`` at grains 1 and ``n``."""
    universe = list(universe)
    sig = sig or universe[0].sig
    target = [C(f) for f in universe]
    vs = [chr(ord("p") + i) for i in range(nvars)]
    formulas = enumerate_formulas(sig, max_depth, vs)
    separated, witness = {}, {}
    for g in sorted({1, n}):
        table = np.array([[bool(valid_n(f, g, phi)) for f in universe] for phi in formulas], dtype=bool)
        want = np.array(target, dtype=bool)
        in_theory = table[:, want].all(axis=1) if want.any() else np.ones(len(formulas), dtype=bool)
        defined = table[in_theory].all(axis=0) if in_theory.any() else np.ones(len(universe), dtype=bool)
        separated[g] = bool((defined == want).all())
        single = np.flatnonzero((table == want).all(axis=1))
        witness[g] = formulas[int(single[0])] if len(single) else None
    return GodequivReport(C.name, n, max_depth, separated, witness, separated[1] == separated[n])


def divisor_universe(sig, max_worlds, n):
    return list(enumerate_frames(sig, max_worlds, n=n))


__all__ = [
    "ClassPredicate",
    "class_predicate",
    "closure_check",
    "divisors",
    "enumerate_formulas",
    "godequiv_check",
    "lift",
    "mod",
    "mod_n",
    "random_formula",
    "random_frame",
    "reproduce_counterexample_boh",
    "theory",
]
