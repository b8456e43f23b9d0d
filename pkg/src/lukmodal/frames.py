"""Relational frames, enriched frames and the frame constructions.

An :class:`LFrame` is a finite set of worlds with one ``(k+1)``-ary relation
per modality.  An :class:`LnFrame` adds, for every divisor ``m`` of the grain
``n``, a set ``r[m]`` of worlds whose local truth values are restricted to the
subchain of grain ``m``.
"""

from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations, permutations, product
from math import gcd

from .errors import FrameError
from .mvcore import divisors
from .syntax import Signature


@dataclass(frozen=True)
class LFrame:
    sig: Signature
    worlds: tuple
    relations: dict = field(hash=False)

    def __post_init__(self):
        worlds = tuple(self.worlds)
        object.__setattr__(self, "worlds", worlds)
        if not worlds:
            raise FrameError("a frame needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise FrameError("duplicate world labels")
        known = set(worlds)
        rels = {}
        for name in self.sig:
            k = self.sig.arity(name)
            tuples = frozenset(tuple(t) for t in self.relations.get(name, ()))
            for t in tuples:
                if len(t) != k + 1:
                    raise FrameError(f"{name} tuple {t} should have length {k + 1}")
                bad = [w for w in t if w not in known]
                if bad:
                    raise FrameError(f"{name} tuple {t} mentions unknown world {bad[0]!r}")
            rels[name] = tuples
        extra = set(self.relations) - set(self.sig)
        if extra:
            raise FrameError(f"relations for undeclared modalities: {sorted(extra)}")
        object.__setattr__(self, "relations", rels)

    def __hash__(self):
        return hash((self.sig, self.worlds, tuple(sorted(self.relations.items()))))

    @cached_property
    def successors(self):
        """``successors[name][u]``: sorted list of k-tuples ``v`` with ``(u, *v)`` in the relation."""
        out = {}
        order = {w: i for i, w in enumerate(self.worlds)}
        for name, tuples in self.relations.items():
            table = {w: [] for w in self.worlds}
            for t in tuples:
                table[t[0]].append(t[1:])
            for w in table:
                table[w].sort(key=lambda v: [order[x] for x in v])
            out[name] = table
        return out

    def index(self, w):
        try:
            return self.worlds.index(w)
        except ValueError:
            raise FrameError(f"unknown world {w!r}") from None

    @property
    def size(self):
        return len(self.worlds)

    def __repr__(self):
        rels = {k: sorted(v) for k, v in self.relations.items()}
        return f"LFrame(worlds={list(self.worlds)}, relations={rels})"


@dataclass(frozen=True)
class LnFrame:
    base: LFrame
    n: int
    r: dict = field(hash=False)

    def __post_init__(self):
        r = {int(m): frozenset(ws) for m, ws in self.r.items()}
        known = set(self.base.worlds)
        for m, ws in r.items():
            bad = ws - known
            if bad:
                raise FrameError(f"r_{m} mentions unknown world {sorted(bad)[0]!r}")
        object.__setattr__(self, "r", r)

    def __hash__(self):
        return hash((self.base, self.n, tuple(sorted(self.r.items()))))

    @property
    def sig(self):
        return self.base.sig

    @property
    def worlds(self):
        return self.base.worlds

    @property
    def relations(self):
        return self.base.relations

    @property
    def successors(self):
        return self.base.successors

    @property
    def size(self):
        return self.base.size

    def s(self, u):
        return s_value(self, u)

    def __repr__(self):
        rels = {k: sorted(v) for k, v in self.relations.items()}
        r = {m: sorted(ws) for m, ws in sorted(self.r.items())}
        return f"LnFrame(n={self.n}, worlds={list(self.worlds)}, relations={rels}, r={r})"


def frame(sig, worlds, relations):
    if not isinstance(sig, Signature):
        sig = Signature(sig)
    return LFrame(sig, tuple(worlds), dict(relations))


def ln_frame_from_grains(base, n, grains):
    """Enriched frame where world ``u`` lies in ``r_m`` iff ``grains[u]`` divides ``m``."""
    r = {m: frozenset(u for u in base.worlds if m % grains[u] == 0) for m in divisors(n)}
    return LnFrame(base, n, r)


# ---------------------------------------------------------------- checks


@dataclass(frozen=True)
class Violation:
    clause: str
    witness: tuple

    def __str__(self):
        return f"violates {self.clause}: {self.witness}"


def validate_ln(f):
    """Return ``None`` when ``f`` is a well-formed enriched frame, else the first :class:`Violation`."""
    divs = divisors(f.n)
    if set(f.r) != set(divs):
        return Violation("r defined exactly on divisors of n", (sorted(f.r), divs))
    W = frozenset(f.worlds)
    if f.r[f.n] != W:
        return Violation("r_n=W", tuple(sorted(W - f.r[f.n])))
    for m in divs:
        for q in divs:
            if f.r[m] & f.r[q] != f.r[gcd(m, q)]:
                return Violation("r_m & r_q = r_gcd(m,q)", (m, q))
    for name in f.sig:
        succ = f.successors[name]
        for m in divs:
            for u in sorted(f.r[m], key=f.base.index):
                for v in succ[u]:
                    outside = [w for w in v if w not in f.r[m]]
                    if outside:
                        return Violation("R u within r_m for u in r_m", (name, m, u, v))
    return None


def s_value(f, u):
    """gcd of all divisors ``m`` with ``u`` in ``r_m``."""
    if u not in f.base.worlds:
        raise FrameError(f"unknown world {u!r}")
    return reduce(gcd, (m for m, ws in f.r.items() if u in ws), 0) or f.n


def grains(f):
    return {u: s_value(f, u) for u in f.worlds}


# ---------------------------------------------------------------- constructions


def trivial_enrichment(f, n):
    r = {m: frozenset() for m in divisors(n)}
    r[n] = frozenset(f.worlds)
    return LnFrame(f, n, r)


def underlying(f):
    return f.base


def _check_same_sig(frames):
    if not frames:
        raise FrameError("need at least one frame")
    sig = frames[0].sig
    for g in frames[1:]:
        if g.sig != sig:
            raise FrameError("signature mismatch")
    return sig


def disjoint_union(frames):
    """Worlds are tagged ``"j:w"`` with the index ``j`` of the source frame."""
    frames = list(frames)
    sig = _check_same_sig(frames)
    worlds, rels = [], {name: [] for name in sig}
    for j, g in enumerate(frames):
        tag = lambda w, j=j: f"{j}:{w}"
        worlds += [tag(w) for w in g.worlds]
        for name, tuples in g.relations.items():
            rels[name] += [tuple(tag(w) for w in t) for t in tuples]
    return LFrame(sig, tuple(worlds), rels)


def disjoint_union_ln(frames):
    frames = list(frames)
    if len({g.n for g in frames}) > 1:
        raise FrameError("grain mismatch in disjoint union")
    base = disjoint_union([g.base for g in frames])
    r = {m: frozenset(f"{j}:{w}" for j, g in enumerate(frames) for w in g.r[m]) for m in divisors(frames[0].n)}
    return LnFrame(base, frames[0].n, r)


def restrict(f, keep):
    """Substructure on the worlds in ``keep`` (original order preserved)."""
    keep = set(keep)
    if isinstance(f, LnFrame):
        base = restrict(f.base, keep)
        return LnFrame(base, f.n, {m: ws & keep for m, ws in f.r.items()})
    worlds = tuple(w for w in f.worlds if w in keep)
    rels = {name: [t for t in ts if all(w in keep for w in t)] for name, ts in f.relations.items()}
    return LFrame(f.sig, worlds, rels)


def generated_closure(f, seeds):
    seeds = set(seeds)
    unknown = seeds - set(f.worlds)
    if unknown:
        raise FrameError(f"unknown seed world {sorted(unknown)[0]!r}")
    closed, todo = set(seeds), list(seeds)
    while todo:
        u = todo.pop()
        for name in f.sig:
            for v in f.successors[name][u]:
                for w in v:
                    if w not in closed:
                        closed.add(w)
                        todo.append(w)
    return closed


def generated_subframe(f, seeds):
    """Smallest substructure containing ``seeds`` and closed under successors."""
    return restrict(f, generated_closure(f, seeds))


# ---------------------------------------------------------------- maps


@dataclass(frozen=True)
class FrameMap:
    source: object
    target: object
    mapping: dict = field(hash=False)

    def __post_init__(self):
        mapping = dict(self.mapping)
        missing = [w for w in self.source.worlds if w not in mapping]
        if missing:
            raise FrameError(f"map undefined on {missing[0]!r}")
        tw = set(self.target.worlds)
        bad = [w for w in self.source.worlds if mapping[w] not in tw]
        if bad:
            raise FrameError(f"image of {bad[0]!r} is not a target world")
        object.__setattr__(self, "mapping", mapping)

    def __call__(self, w):
        return self.mapping[w]

    def is_onto(self):
        return set(self.mapping[w] for w in self.source.worlds) == set(self.target.worlds)

    def is_injective(self):
        return len(set(self.mapping[w] for w in self.source.worlds)) == len(self.source.worlds)

    def compose(self, after):
        """``after`` applied after ``self``."""
        return FrameMap(self.source, after.target, {w: after(self(w)) for w in self.source.worlds})


def inclusion(sub, f):
    return FrameMap(sub, f, {w: w for w in sub.worlds})


def identity(f):
    return FrameMap(f, f, {w: w for w in f.worlds})


def is_bounded_morphism(m):
    """``f(R u) = R' f(u)`` for every world ``u`` and every modality."""
    src, tgt = m.source, m.target
    if src.sig != tgt.sig:
        return False
    for name in src.sig:
        ss, ts = src.successors[name], tgt.successors[name]
        for u in src.worlds:
            image = {tuple(m(w) for w in v) for v in ss[u]}
            if image != set(ts[m(u)]):
                return False
    return True


def is_ln_bounded_morphism(m):
    """Bounded morphism of the underlying frames that maps each ``r_m`` into ``r'_m``."""
    src, tgt = m.source, m.target
    if not isinstance(src, LnFrame) or not isinstance(tgt, LnFrame) or src.n != tgt.n:
        return False
    if not is_bounded_morphism(FrameMap(src.base, tgt.base, m.mapping)):
        return False
    return all(m(w) in tgt.r[d] for d in divisors(src.n) for w in src.r[d])


def is_isomorphism(m):
    """Bijective map that preserves and reflects every relation (and every ``r_m``)."""
    src, tgt = m.source, m.target
    if type(src) is not type(tgt) or src.sig != tgt.sig or not m.is_injective() or not m.is_onto():
        return False
    for name in src.sig:
        if {tuple(m(w) for w in t) for t in src.relations[name]} != set(tgt.relations[name]):
            return False
    if isinstance(src, LnFrame):
        if src.n != tgt.n:
            return False
        return all({m(w) for w in src.r[d]} == set(tgt.r[d]) for d in divisors(src.n))
    return True


def find_isomorphism(f, g):
    """Brute-force search for an isomorphism ``f -> g``; ``None`` if there is none."""
    if type(f) is not type(g) or f.size != g.size or f.sig != g.sig:
        return None
    if isinstance(f, LnFrame):
        if f.n != g.n:
            return None
        gf, gg = grains(f), grains(g)
    else:
        gf = {w: 1 for w in f.worlds}
        gg = {w: 1 for w in g.worlds}

    def profile(fr, gr, w):
        return (gr[w],) + tuple(len(fr.successors[name][w]) for name in fr.sig)

    pf = {w: profile(f, gf, w) for w in f.worlds}
    pg = {w: profile(g, gg, w) for w in g.worlds}
    if sorted(pf.values()) != sorted(pg.values()):
        return None
    for perm in permutations(g.worlds):
        mapping = dict(zip(f.worlds, perm))
        if any(pf[w] != pg[mapping[w]] for w in f.worlds):
            continue
        m = FrameMap(f, g, mapping)
        if is_isomorphism(m):
            return m
    return None


def surjections(src_worlds, tgt_worlds):
    """All onto maps as dicts, in lexicographic order of images."""
    src_worlds, tgt_worlds = list(src_worlds), list(tgt_worlds)
    needed = set(tgt_worlds)
    for images in product(tgt_worlds, repeat=len(src_worlds)):
        if set(images) == needed:
            yield dict(zip(src_worlds, images))


# ---------------------------------------------------------------- enumeration


def world_labels(k):
    return tuple(f"w{i}" for i in range(k))


def _relation_choices(worlds, arity):
    tuples = list(product(worlds, repeat=arity + 1))
    for size in range(len(tuples) + 1):
        for chosen in combinations(tuples, size):
            yield chosen


def enumerate_frames(sig, max_worlds, n=None, unique=False, min_worlds=1):
    """Every labelled frame with ``min_worlds..max_worlds`` worlds, each once.

    Order: by number of worlds, then by number of relation tuples, then
    lexicographically.  With ``n`` given, every valid enriched frame over
    each base frame is produced (grain assignments in lexicographic order of
    the divisors).  ``unique`` drops frames isomorphic to an earlier one.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    if not isinstance(sig, Signature):
        sig = Signature(sig)
    seen = []
    for k in range(min_worlds, max_worlds + 1):
        worlds = world_labels(k)
        names = list(sig)
        per_name = [list(_relation_choices(worlds, sig.arity(nm))) for nm in names]
        for combo in product(*per_name):
            base = LFrame(sig, worlds, dict(zip(names, combo)))
            if n is None:
                candidates = [base]
            else:
                candidates = list(enrichments(base, n))
            for fr in candidates:
                if unique:
                    if any(find_isomorphism(fr, old) for old in seen if old.size == fr.size):
                        continue
                    seen.append(fr)
                yield fr


def enrichments(base, n):
    """All valid enriched frames over ``base`` at grain ``n``."""
    divs = divisors(n)
    for choice in product(divs, repeat=base.size):
        g = dict(zip(base.worlds, choice))
        ok = all(
            g[u] % g[w] == 0
            for name in base.sig
            for u in base.worlds
            for v in base.successors[name][u]
            for w in v
        )
        if ok:
            yield ln_frame_from_grains(base, n, g)
