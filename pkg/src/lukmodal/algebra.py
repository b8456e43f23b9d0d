"""Finite modal MV-algebras and their duality with enriched frames.

An algebra is stored as a sorted list of numerator tuples (one numerator of
grain ``n`` per coordinate; coordinate ``j`` only takes multiples of
``n / grain_j``).  MV operations are pointwise; each modality is an index
table of shape ``(c,) * arity`` over the carrier.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import AlgebraError
from .frames import FrameMap, LFrame, LnFrame, grains, ln_frame_from_grains
from .mvcore import divisors, tau_term
from .semantics import Model, evaluate_batch
from .syntax import (
    Imp,
    Join,
    KPower,
    KTimes,
    Meet,
    Modal,
    Neg,
    Odot,
    One,
    Oplus,
    Var,
    Zero,
)


class FiniteMMVAlgebra:
    """Subalgebra of a finite product of Łukasiewicz chains with modal operators.

    ``coordinates`` is a sequence of ``(label, grain)``; ``carrier`` a
    collection of numerator tuples at grain ``n``; ``operators`` maps each
    modality name to an integer index table over the (sorted) carrier.
    """

    def __init__(self, n, coordinates, carrier, operators, sig=None):
        self.n = n
        self.coordinates = tuple((str(lbl), int(g)) for lbl, g in coordinates)
        for lbl, g in self.coordinates:
            if n % g:
                raise AlgebraError(f"coordinate {lbl!r} grain {g} does not divide {n}")
        carrier = sorted(set(tuple(int(x) for x in e) for e in carrier))
        d = len(self.coordinates)
        self.elements = np.array(carrier, dtype=np.int64).reshape(len(carrier), d)
        for j, (lbl, g) in enumerate(self.coordinates):
            col = self.elements[:, j]
            if ((col < 0) | (col > n) | (col % (n // g) != 0)).any():
                raise AlgebraError(f"coordinate {lbl!r} holds a value outside its chain")
        self._keys = self._encode(self.elements)
        self.operators = {}
        for name, table in operators.items():
            t = np.asarray(table, dtype=np.intp)
            if t.ndim < 1 or any(s != len(carrier) for s in t.shape):
                raise AlgebraError(f"operator {name!r} table has shape {t.shape}")
            if (t < 0).any() or (t >= len(carrier)).any():
                raise AlgebraError(f"operator {name!r} leaves the carrier")
            self.operators[name] = t
        from .syntax import Signature

        self.sig = sig or Signature({k: t.ndim for k, t in self.operators.items()})
        self.one = self.lookup([n] * d)
        self.zero = self.lookup([0] * d)
        if self.one is None or self.zero is None:
            raise AlgebraError("carrier must contain 0 and 1")
        self.neg_table = self._lookup_array(n - self.elements)
        if (self.neg_table < 0).any():
            raise AlgebraError("carrier not closed under negation")
        imp = np.minimum(n, n - self.elements[:, None, :] + self.elements[None, :, :])
        self.imp_table = self._lookup_array(imp)
        if (self.imp_table < 0).any():
            raise AlgebraError("carrier not closed under implication")

    # ------------------------------------------------------------ encoding

    def _encode(self, arr):
        arr = np.asarray(arr, dtype=np.int64)
        key = np.zeros(arr.shape[:-1], dtype=np.int64)
        for j in range(arr.shape[-1]):
            key = key * (self.n + 1) + arr[..., j]
        return key

    def _lookup_array(self, arr):
        """Carrier indices of the tuples in ``arr`` (last axis), ``-1`` when absent."""
        keys = self._encode(arr)
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, len(self._keys) - 1)
        return np.where(self._keys[pos] == keys, pos, -1)

    def lookup(self, element):
        i = int(self._lookup_array(np.asarray([element]))[0])
        return None if i < 0 else i

    def index(self, element):
        i = self.lookup(element)
        if i is None:
            raise AlgebraError(f"{tuple(element)} is not in the carrier")
        return i

    def element(self, i):
        return tuple(int(x) for x in self.elements[i])

    def __len__(self):
        return len(self.elements)

    @property
    def size(self):
        return len(self.elements)

    @property
    def labels(self):
        return [lbl for lbl, _ in self.coordinates]

    def arity(self, name):
        return self.operators[name].ndim

    def __repr__(self):
        ops = {k: t.ndim for k, t in self.operators.items()}
        return f"FiniteMMVAlgebra(n={self.n}, coordinates={list(self.coordinates)}, size={self.size}, ops={ops})"

    # ------------------------------------------------------------ operations

    def neg(self, a):
        return self.neg_table[a]

    def imp(self, a, b):
        return self.imp_table[a, b]

    def oplus(self, a, b):
        return self.imp_table[self.neg_table[a], b]

    def odot(self, a, b):
        return self.neg_table[self.oplus(self.neg_table[a], self.neg_table[b])]

    def join(self, a, b):
        return self.oplus(self.odot(b, self.neg_table[a]), a)

    def meet(self, a, b):
        return self.odot(self.oplus(b, self.neg_table[a]), a)

    def apply(self, name, *args):
        return self.operators[name][tuple(args)]

    def leq(self, a, b):
        return self.imp_table[a, b] == self.one

    def evaluate_batch(self, phi, assignment, memo=None):
        """Carrier indices of ``phi`` under a batch of assignments (var -> index array)."""
        if memo is None:
            memo = {}
        shape = np.shape(next(iter(assignment.values()))) if assignment else (1,)

        def go(f):
            r = memo.get(f)
            if r is not None:
                return r
            if isinstance(f, Var):
                r = np.asarray(assignment[f.name], dtype=np.intp)
            elif isinstance(f, One):
                r = np.full(shape, self.one, dtype=np.intp)
            elif isinstance(f, Zero):
                r = np.full(shape, self.zero, dtype=np.intp)
            elif isinstance(f, Neg):
                r = self.neg_table[go(f.arg)]
            elif isinstance(f, Imp):
                r = self.imp_table[go(f.left), go(f.right)]
            elif isinstance(f, Oplus):
                r = self.oplus(go(f.left), go(f.right))
            elif isinstance(f, Odot):
                r = self.odot(go(f.left), go(f.right))
            elif isinstance(f, Join):
                r = self.join(go(f.left), go(f.right))
            elif isinstance(f, Meet):
                r = self.meet(go(f.left), go(f.right))
            elif isinstance(f, KTimes):
                a = go(f.arg)
                r = np.full(shape, self.zero, dtype=np.intp)
                for _ in range(f.k):
                    r = self.oplus(r, a)
            elif isinstance(f, KPower):
                a = go(f.arg)
                r = np.full(shape, self.one, dtype=np.intp)
                for _ in range(f.k):
                    r = self.odot(r, a)
            elif isinstance(f, Modal):
                r = self.operators[f.name][tuple(go(a) for a in f.args)]
            else:
                raise TypeError(f"not a formula: {f!r}")
            memo[f] = r
            return r

        return go(phi)

    def evaluate(self, phi, assignment):
        return int(self.evaluate_batch(phi, {p: np.array([a]) for p, a in assignment.items()})[0])

    def unary_term_table(self, t):
        """Index table of a unary MV-term, applied pointwise."""
        table = np.array(t.table(self.n), dtype=np.int64)
        return self._lookup_array(table[self.elements])

    # ------------------------------------------------------------ Boolean skeleton

    @cached_property
    def idempotents(self):
        """Indices of elements with every coordinate in {0, 1}."""
        mask = ((self.elements == 0) | (self.elements == self.n)).all(axis=1)
        return np.flatnonzero(mask)

    @cached_property
    def atoms(self):
        """Minimal nonzero idempotents, in carrier order."""
        idem = [int(i) for i in self.idempotents if i != self.zero]
        E = self.elements
        out = []
        for a in idem:
            if not any(b != a and (E[b] <= E[a]).all() for b in idem):
                out.append(a)
        return out

    @cached_property
    def is_full_product(self):
        expected = 1
        for _, g in self.coordinates:
            expected *= g + 1
        return expected == self.size

    # ------------------------------------------------------------ homomorphisms

    @cached_property
    def homomorphisms(self):
        """Every MV-homomorphism into the chain of grain ``n``, one per Boolean atom."""
        n = self.n
        E = self.elements
        steps = [self.unary_term_table(tau_term(n, i)) for i in range(1, n + 1)]
        homs = []
        for atom in self.atoms:
            support = E[atom] == n
            values = np.zeros(self.size, dtype=np.int64)
            for i, st in enumerate(steps, start=1):
                inside = (E[st][:, support] == n).all(axis=1)
                values[inside] = i
            h = Homomorphism(self, values)
            if not h.is_mv_homomorphism():
                raise AlgebraError(f"candidate from atom {self.element(atom)} is not a homomorphism")
            homs.append(h)
        return homs


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """MV-homomorphism into the chain; ``values[i]`` is the numerator of element ``i``."""

    algebra: FiniteMMVAlgebra
    values: np.ndarray

    def __call__(self, a):
        return self.values[a]

    def is_mv_homomorphism(self):
        A, v, n = self.algebra, self.values, self.algebra.n
        if v[A.one] != n:
            return False
        if (v[A.neg_table] != n - v).any():
            return False
        return bool((v[A.imp_table] == np.minimum(n, n - v[:, None] + v[None, :])).all())

    def lands_in(self, m):
        return bool((self.values % (self.algebra.n // m) == 0).all())

    @property
    def key(self):
        return tuple(int(x) for x in self.values)

    def __eq__(self, other):
        return isinstance(other, Homomorphism) and other.algebra is self.algebra and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def enumerate_homs(A, m=None):
    """MV-homomorphisms ``A -> Ł_n`` whose image lies in the subchain of grain ``m``."""
    if m is None:
        m = A.n
    if A.n % m:
        raise AlgebraError(f"{m} does not divide {A.n}")
    return [h for h in A.homomorphisms if h.lands_in(m)]


def brute_force_homs(A, limit=10**6):
    """All maps carrier -> chain that preserve ~, -> and 1; an independent check for tiny algebras."""
    n = A.n
    if (n + 1) ** A.size > limit:
        raise AlgebraError("algebra too large for brute-force homomorphism search")
    out = []
    for vals in product(range(n + 1), repeat=A.size):
        h = Homomorphism(A, np.array(vals, dtype=np.int64))
        if h.is_mv_homomorphism():
            out.append(h)
    return out


# ---------------------------------------------------------------- constructions


def _modal_table(elements, n, worlds, successors, arity):
    """Table of ``D(a)(u) = min over v in R u of max_l a_l(v_l)`` (empty min = n)."""
    c = len(elements)
    pos = {w: i for i, w in enumerate(worlds)}
    result = np.empty((c,) * arity + (len(worlds),), dtype=np.int64)
    for ui, u in enumerate(worlds):
        acc = np.full((c,) * arity, n, dtype=np.int64)
        for v in successors[u]:
            best = np.zeros((c,) * arity, dtype=np.int64)
            for ell, w in enumerate(v):
                shape = [1] * arity
                shape[ell] = c
                best = np.maximum(best, elements[:, pos[w]].reshape(shape))
            acc = np.minimum(acc, best)
        result[..., ui] = acc
    return result


def _frame_algebra(fr, n, allowed):
    base = fr.base if isinstance(fr, LnFrame) else fr
    worlds = base.worlds
    carrier = list(product(*allowed))
    coords = [(w, len(vals) - 1) for w, vals in zip(worlds, allowed)]
    proto = FiniteMMVAlgebra(n, coords, carrier, {}, sig=base.sig)
    ops = {}
    for name in base.sig:
        k = base.sig.arity(name)
        raw = _modal_table(proto.elements, n, worlds, base.successors[name], k)
        table = proto._lookup_array(raw)
        if (table < 0).any():
            raise AlgebraError(f"carrier not closed under {name}")
        ops[name] = table
    A = FiniteMMVAlgebra(n, coords, carrier, ops, sig=base.sig)
    A.frame = fr
    return A


def complex_algebra(fr, n):
    """All maps worlds -> Ł_n with pointwise MV operations and min-max modal operators."""
    base = fr.base if isinstance(fr, LnFrame) else fr
    return _frame_algebra(base, n, [range(n + 1)] * base.size)


def tight_complex_algebra(fr):
    """Product over worlds ``u`` of the subchain of grain ``s_u``."""
    g = grains(fr)
    n = fr.n
    return _frame_algebra(fr, n, [range(0, n + 1, n // g[w]) for w in fr.worlds])


def subalgebra(A, indices):
    """Subalgebra on the given carrier indices (must be closed); records ``embedding``."""
    idx = np.array(sorted(set(int(i) for i in indices)), dtype=np.intp)
    inverse = np.full(A.size, -1, dtype=np.intp)
    inverse[idx] = np.arange(len(idx))
    ops = {}
    for name, t in A.operators.items():
        sub = t[np.ix_(*([idx] * t.ndim))]
        mapped = inverse[sub]
        if (mapped < 0).any():
            raise AlgebraError(f"subset not closed under {name}")
        ops[name] = mapped
    B = FiniteMMVAlgebra(A.n, A.coordinates, [A.element(i) for i in idx], ops, sig=A.sig)
    B.embedding = idx
    return B


def boolean_skeleton(A):
    """Idempotent elements with the restricted operators, kept at grain ``n``."""
    return subalgebra(A, A.idempotents)


def product_algebra(*algebras):
    """Coordinatewise product; coordinates are relabelled ``"i:label"``."""
    if not algebras:
        raise AlgebraError("empty product")
    n = algebras[0].n
    sig = algebras[0].sig
    for B in algebras[1:]:
        if B.n != n or B.sig != sig:
            raise AlgebraError("product factors need equal grain and signature")
    coords = [(f"{i}:{lbl}", g) for i, B in enumerate(algebras) for lbl, g in B.coordinates]
    sizes = [B.size for B in algebras]
    carrier = [sum((algebras[i].element(j) for i, j in enumerate(combo)), ()) for combo in product(*map(range, sizes))]
    total = len(carrier)
    places = [int(np.prod(sizes[i + 1 :])) for i in range(len(sizes))]
    comps = [(np.arange(total) // places[i]) % sizes[i] for i in range(len(sizes))]
    ops = {}
    for name in sig:
        k = algebras[0].arity(name)
        table = np.zeros((total,) * k, dtype=np.intp)
        for i, B in enumerate(algebras):
            table = table + places[i] * B.operators[name][np.ix_(*([comps[i]] * k))]
        ops[name] = table
    return FiniteMMVAlgebra(n, coords, carrier, ops, sig=sig)


# ---------------------------------------------------------------- axioms


@dataclass(frozen=True)
class AxiomFailure:
    scheme: str
    modality: str
    detail: dict

    def __str__(self):
        return f"{self.modality}: {self.scheme} fails at {self.detail}"


def check_mmv_axioms(A, strict_implication=False):
    """First failing instance of the modal operator equations, or ``None``.

    The implication scheme is checked as ``D(x[i:=y->z]) <= D(x[i:=y]) -> D(x[i:=z])``;
    with ``strict_implication`` it must hold with equality.
    """
    c = A.size
    allidx = np.arange(c)
    for name, T in A.operators.items():
        k = T.ndim
        for i in range(k):
            # axes: the k-1 other arguments, then y, then z
            others = [allidx] * (k - 1)
            grids = np.meshgrid(*others, allidx, allidx, indexing="ij")
            rest, y, z = grids[:-2], grids[-2], grids[-1]

            def at(val):
                args = list(rest)
                args.insert(i, val)
                return T[tuple(args)]

            lhs = at(A.imp_table[y, z])
            rhs = A.imp_table[at(y), at(z)]
            bad = lhs != rhs if strict_implication else A.imp_table[lhs, rhs] != A.one
            if bad.any():
                where = tuple(int(g[bad][0]) for g in grids)
                return AxiomFailure("implication", name, {"position": i, "args": where})
            args = list(np.meshgrid(*([allidx] * (k - 1)), indexing="ij")) if k > 1 else []
            args.insert(i, np.full(args[0].shape if args else (), A.one, dtype=np.intp))
            vals = T[tuple(args)]
            if (vals != A.one).any():
                return AxiomFailure("unit", name, {"position": i})
        grids = np.meshgrid(*([allidx] * k), indexing="ij")
        base = T[tuple(grids)]
        for star, fn in (("odot", A.odot), ("oplus", A.oplus)):
            lhs = T[tuple(fn(g, g) for g in grids)]
            rhs = fn(base, base)
            bad = lhs != rhs
            if bad.any():
                where = tuple(int(g[bad][0]) for g in grids)
                return AxiomFailure(star, name, {"args": where})
    return None


def check_equation(A, phi, vs=None):
    """First assignment (var -> element index) where ``phi`` is not 1, or ``None``."""
    from .syntax import variables

    vs = list(vs) if vs is not None else variables(phi)
    if not vs:
        return None if A.evaluate_batch(phi, {})[0] == A.one else {}
    grids = np.meshgrid(*([np.arange(A.size)] * len(vs)), indexing="ij")
    assignment = {p: g.ravel() for p, g in zip(vs, grids)}
    out = A.evaluate_batch(phi, assignment)
    bad = np.flatnonzero(out != A.one)
    if len(bad) == 0:
        return None
    return {p: int(assignment[p][bad[0]]) for p in vs}


# ---------------------------------------------------------------- canonical structures


def _canonical_relation(A, name, homs, domain):
    T = A.operators[name]
    k = T.ndim
    V = np.array([h.values for h in homs], dtype=np.int64)
    n = A.n
    grids = np.meshgrid(*([domain] * k), indexing="ij")
    image = T[tuple(grids)]
    one_at = [V[:, g] == n for g in grids]  # per position: (H, ...) truth of v(a_l) = 1
    tuples = []
    for ui in range(len(homs)):
        demand = V[ui][image] == n
        for vs in product(range(len(homs)), repeat=k):
            cover = np.zeros(demand.shape, dtype=bool)
            for ell, vi in enumerate(vs):
                cover |= one_at[ell][vi]
            if not (demand & ~cover).any():
                tuples.append((ui,) + vs)
    return tuples


def canonical_frame(A, mode="idempotent"):
    """Enriched frame whose worlds are the homomorphisms ``A -> Ł_n`` (labelled ``u0``, ``u1``, ...).

    ``mode="idempotent"`` quantifies the defining implication over tuples of
    idempotents only; ``mode="full"`` uses the whole carrier.
    """
    if mode not in ("idempotent", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    homs = A.homomorphisms
    labels = [f"u{i}" for i in range(len(homs))]
    domain = A.idempotents if mode == "idempotent" else np.arange(A.size)
    rels = {}
    for name in A.sig:
        rels[name] = [tuple(labels[i] for i in t) for t in _canonical_relation(A, name, homs, domain)]
    base = LFrame(A.sig, tuple(labels), rels)
    g = {}
    for lbl, h in zip(labels, homs):
        g[lbl] = min(m for m in divisors(A.n) if h.lands_in(m))
    fr = ln_frame_from_grains(base, A.n, g)
    fr.__dict__["homomorphisms"] = homs
    return fr


def canonical_lframe(A, mode="idempotent"):
    return canonical_frame(A, mode).base


def hom_of_world(A, fr, w):
    return A.homomorphisms[fr.base.worlds.index(w)]


def canonical_model(A, alpha, mode="idempotent"):
    """Model on the canonical frame with ``Val(u, p) = u(alpha[p])``.

    ``alpha`` maps variables to carrier indices or element tuples.
    """
    fr = canonical_lframe(A, mode)
    idx = {p: (a if isinstance(a, (int, np.integer)) else A.index(a)) for p, a in alpha.items()}
    table = {}
    for w, h in zip(fr.worlds, A.homomorphisms):
        for p, a in idx.items():
            table[(w, p)] = int(h(a))
    return Model(fr, A.n, table, tuple(idx))


@dataclass(frozen=True)
class TruthLemmaFailure:
    formula: object
    world: str
    semantic: int
    algebraic: int
    alpha: dict


def truth_lemma_check(A, alpha, formulas, mode="idempotent"):
    """Compare ``Val(u, phi)`` in the canonical model with ``u(alpha_phi)``.

    ``alpha`` maps each variable either to a single carrier index or to an
    array of indices (a batch of assignments checked at once).
    """
    fr = canonical_lframe(A, mode)
    V = np.array([h.values for h in A.homomorphisms], dtype=np.int64)
    batch = {p: np.atleast_1d(np.asarray(a, dtype=np.intp)) for p, a in alpha.items()}
    values = {p: V[:, a].T for p, a in batch.items()}
    sem_memo, alg_memo = {}, {}
    for phi in formulas:
        sem = evaluate_batch(fr, A.n, phi, values, sem_memo)
        alg = V[:, A.evaluate_batch(phi, batch, alg_memo)].T
        bad = np.argwhere(sem != alg)
        if len(bad):
            b, u = (int(x) for x in bad[0])
            return TruthLemmaFailure(
                phi, fr.worlds[u], int(sem[b, u]), int(alg[b, u]), {p: int(a[b]) for p, a in batch.items()}
            )
    return None


def projection_hom(A, coordinate):
    j = A.labels.index(coordinate)
    return Homomorphism(A, A.elements[:, j].copy())


def iota(fr, ext=None, A=None):
    """Map ``w -> projection onto w`` from a frame into its canonical extension."""
    if A is None:
        A = tight_complex_algebra(fr) if isinstance(fr, LnFrame) else complex_algebra(fr, 1)
    if ext is None:
        ext = canonical_frame(A) if isinstance(fr, LnFrame) else canonical_lframe(A)
    keys = {h.key: w for h, w in zip(A.homomorphisms, ext.worlds)}
    mapping = {}
    for w in fr.worlds:
        key = projection_hom(A, w).key
        if key not in keys:
            raise AlgebraError(f"projection onto {w!r} is not a canonical world")
        mapping[w] = keys[key]
    return FrameMap(fr, ext, mapping)


def canonical_extension_ln(fr, mode="idempotent"):
    """Canonical frame of the tight complex algebra."""
    return canonical_frame(tight_complex_algebra(fr), mode)


def canonical_extension_l(fr, n=1, mode="idempotent"):
    """Canonical frame of the Boolean skeleton of the complex algebra at grain ``n``."""
    base = fr.base if isinstance(fr, LnFrame) else fr
    return canonical_lframe(boolean_skeleton(complex_algebra(base, n)), mode)


def model_extension(m, frame=None):
    """Canonical extension of a model, with the map ``iota`` into it.

    Worlds of the result are the homomorphisms of the complex algebra of the
    model's frame (or of the tight complex algebra when ``frame`` is the
    enriched frame the model is based on).  Returns ``(model, iota_map)``.
    """
    if frame is not None:
        A = tight_complex_algebra(frame)
    else:
        A = complex_algebra(m.frame, m.n)
    alpha = {p: A.index([m.table[(w, p)].num for w in m.frame.worlds]) for p in m.variables}
    ext = canonical_model(A, alpha)
    src = frame if frame is not None else m.frame
    target = canonical_frame(A) if frame is not None else ext.frame
    return ext, iota(src, target, A)


# ---------------------------------------------------------------- algebra maps


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    source: FiniteMMVAlgebra
    target: FiniteMMVAlgebra
    mapping: np.ndarray

    def __call__(self, a):
        return self.mapping[a]

    def is_injective(self):
        return len(set(self.mapping.tolist())) == self.source.size

    def is_onto(self):
        return len(set(self.mapping.tolist())) == self.target.size


def is_homomorphism(h, modal=True):
    """``h`` preserves 1, ~, -> and (with ``modal``) every modal operator."""
    A, B, f = h.source, h.target, np.asarray(h.mapping, dtype=np.intp)
    if A.sig != B.sig or A.n != B.n:
        return False
    if f[A.one] != B.one or (f[A.neg_table] != B.neg_table[f]).any():
        return False
    if (f[A.imp_table] != B.imp_table[f[:, None], f[None, :]]).any():
        return False
    if modal:
        for name, T in A.operators.items():
            k = T.ndim
            grids = np.meshgrid(*([np.arange(A.size)] * k), indexing="ij")
            if (f[T[tuple(grids)]] != B.operators[name][tuple(f[g] for g in grids)]).any():
                return False
    return True


def enumerate_algebra_homs(A, B, modal=True):
    """Every homomorphism ``A -> B`` for ``B`` a full product of chains.

    A map into a product is a tuple of maps into the factors, so candidates
    are tuples of homomorphisms ``A -> Ł_{grain_j}``.
    """
    if not B.is_full_product:
        raise AlgebraError("target must be a full product of chains")
    per_coord = [enumerate_homs(A, g) for _, g in B.coordinates]
    out = []
    for combo in product(*per_coord):
        if combo:
            img = np.stack([h.values for h in combo], axis=1)
        else:
            img = np.zeros((A.size, 0), dtype=np.int64)
        mapping = B._lookup_array(img)
        if (mapping < 0).any():
            continue
        h = AlgebraMap(A, B, mapping)
        if is_homomorphism(h, modal=modal):
            out.append(h)
    return out


def dual_morphism(h, source_frame=None, target_frame=None):
    """Frame map ``u -> u o h`` from the canonical frame of ``h.target`` to that of ``h.source``."""
    if not is_homomorphism(h):
        raise AlgebraError("not a modal MV-homomorphism")
    A, B = h.source, h.target
    src = target_frame or canonical_frame(B)
    tgt = source_frame or canonical_frame(A)
    keys = {g.key: w for g, w in zip(A.homomorphisms, tgt.worlds)}
    mapping = {}
    for u, w in zip(B.homomorphisms, src.worlds):
        composed = tuple(int(x) for x in u.values[h.mapping])
        mapping[w] = keys[composed]
    return FrameMap(src, tgt, mapping)


# ---------------------------------------------------------------- isomorphism


def _profiles(A):
    below = (A.imp_table == A.one).sum(axis=0)
    above = (A.imp_table == A.one).sum(axis=1)
    idem = np.zeros(A.size, dtype=bool)
    idem[A.idempotents] = True
    cols = [idem.astype(np.int64), below, above]
    for name in sorted(A.operators):
        T = A.operators[name]
        if T.ndim == 1:
            cols.append((T == A.one).astype(np.int64))
            cols.append((T == np.arange(A.size)).astype(np.int64))
    return [tuple(int(c[i]) for c in cols) for i in range(A.size)]


def _extend(A, B, pairs, assigned, inv):
    """Close a partial map under ~ and ->; return the new dicts or ``None`` on conflict."""
    fwd, back = dict(assigned), dict(inv)
    queue = []
    for a, b in pairs:
        if a in fwd:
            if fwd[a] != b:
                return None
            continue
        if b in back:
            return None
        fwd[a], back[b] = b, a
        queue.append(a)
    while queue:
        x = queue.pop()
        new = [(int(A.neg_table[x]), int(B.neg_table[fwd[x]]))]
        for y in list(fwd):
            new.append((int(A.imp_table[x, y]), int(B.imp_table[fwd[x], fwd[y]])))
            new.append((int(A.imp_table[y, x]), int(B.imp_table[fwd[y], fwd[x]])))
        for a, b in new:
            if a in fwd:
                if fwd[a] != b:
                    return None
            elif b in back:
                return None
            else:
                fwd[a], back[b] = b, a
                queue.append(a)
    return fwd, back


def iso_check(A, B):
    """An isomorphism ``A -> B`` as an :class:`AlgebraMap`, or ``None``."""
    if A.n != B.n or A.size != B.size or A.sig != B.sig:
        return None
    if len(A.idempotents) != len(B.idempotents):
        return None
    pa, pb = _profiles(A), _profiles(B)
    if sorted(pa) != sorted(pb):
        return None
    by_profile = {}
    for j, p in enumerate(pb):
        by_profile.setdefault(p, []).append(j)

    start = _extend(A, B, [(A.one, B.one)], {}, {})
    if start is None:
        return None

    def search(fwd, back):
        if len(fwd) == A.size:
            h = AlgebraMap(A, B, np.array([fwd[i] for i in range(A.size)], dtype=np.intp))
            return h if is_homomorphism(h) else None
        pending = [a for a in range(A.size) if a not in fwd]
        g = min(pending, key=lambda a: len(by_profile[pa[a]]))
        for b in by_profile[pa[g]]:
            if b in back:
                continue
            ext = _extend(A, B, [(g, b)], fwd, back)
            if ext is None:
                continue
            found = search(*ext)
            if found is not None:
                return found
        return None

    return search(*start)


def sum_isomorphism(frames):
    """The coordinate-matching map from the tight algebra of a disjoint union to the product."""
    from .frames import disjoint_union_ln

    union = disjoint_union_ln(frames)
    U = tight_complex_algebra(union)
    P = product_algebra(*[tight_complex_algebra(f) for f in frames])
    order = [U.labels.index(lbl) for lbl in P.labels]
    mapping = P._lookup_array(U.elements[:, order])
    if (mapping < 0).any():
        raise AlgebraError("coordinate rearrangement leaves the product")
    return AlgebraMap(U, P, mapping)
