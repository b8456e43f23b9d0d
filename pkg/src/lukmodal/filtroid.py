"""Filtroids on powers of finite distributive lattices.

A filtroid of ``L^k`` is an up-set containing every tuple with some
component equal to top, closed under meets of tuples that differ in at most
one position.  It is prime when it is a sum ``F_1 + ... + F_k`` of prime
filters, i.e. the set of tuples ``x`` with ``x_l in F_l`` for some ``l``.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

import numpy as np

from .errors import BudgetExceeded


class FiniteDistributiveLattice:
    """Elements ``0..size-1`` with an order matrix ``leq[i, j]`` (i <= j)."""

    def __init__(self, leq, names=None):
        leq = np.asarray(leq, dtype=bool)
        self.leq = leq
        self.size = len(leq)
        self.names = list(names) if names is not None else [str(i) for i in range(self.size)]
        self.join = np.empty((self.size, self.size), dtype=np.intp)
        self.meet = np.empty((self.size, self.size), dtype=np.intp)
        for a in range(self.size):
            for b in range(self.size):
                ups = [c for c in range(self.size) if leq[a, c] and leq[b, c]]
                downs = [c for c in range(self.size) if leq[c, a] and leq[c, b]]
                lub = [c for c in ups if all(leq[c, d] for d in ups)]
                glb = [c for c in downs if all(leq[d, c] for d in downs)]
                if len(lub) != 1 or len(glb) != 1:
                    raise ValueError(f"not a lattice at ({a}, {b})")
                self.join[a, b] = lub[0]
                self.meet[a, b] = glb[0]
        self.bottom = int(next(i for i in range(self.size) if leq[i].all()))
        self.top = int(next(i for i in range(self.size) if leq[:, i].all()))

    @classmethod
    def chain(cls, k):
        idx = np.arange(k)
        return cls(idx[:, None] <= idx[None, :])

    @classmethod
    def boolean(cls, atoms):
        subsets = list(range(1 << atoms))
        leq = [[(a & b) == a for b in subsets] for a in subsets]
        return cls(leq, names=[format(s, f"0{atoms}b") for s in subsets])

    @classmethod
    def from_algebra(cls, A, indices=None):
        """Lattice of the given carrier elements (default: the idempotents) under the pointwise order."""
        idx = list(A.idempotents if indices is None else indices)
        leq = [[bool(A.leq(a, b)) for b in idx] for a in idx]
        L = cls(leq, names=[str(A.element(i)) for i in idx])
        L.carrier_index = idx
        return L

    def is_distributive(self):
        j, m = self.join, self.meet
        r = range(self.size)
        return all(m[a, j[b, c]] == j[m[a, b], m[a, c]] for a in r for b in r for c in r)

    def up(self, a):
        return frozenset(int(c) for c in np.flatnonzero(self.leq[a]))

    @cached_property
    def join_irreducibles(self):
        out = []
        for a in range(self.size):
            if a == self.bottom:
                continue
            below = [b for b in range(self.size) if b != a and self.leq[b, a]]
            if not any(self.join[b, c] == a for b in below for c in below):
                out.append(a)
        return out

    @cached_property
    def prime_filters(self):
        """Principal filters of join-irreducible elements."""
        return [self.up(a) for a in self.join_irreducibles]

    def prime_filters_brute_force(self):
        """Every proper nonempty subset that is a prime filter (feasible for small lattices)."""
        if self.size > 12:
            raise BudgetExceeded(2**self.size, 2**12)
        out = []
        elems = range(self.size)
        for r in range(1, self.size):
            for sub in combinations(elems, r):
                F = frozenset(sub)
                if self.bottom in F:
                    continue
                up = all(b in F for a in F for b in elems if self.leq[a, b])
                meets = all(self.meet[a, b] in F for a in F for b in F)
                prime = all(a in F or b in F for a in elems for b in elems if self.join[a, b] in F)
                if up and meets and prime:
                    out.append(F)
        return out


@dataclass(frozen=True)
class Filtroid:
    lattice: FiniteDistributiveLattice
    k: int
    members: frozenset

    def __contains__(self, x):
        return tuple(x) in self.members

    @property
    def is_proper(self):
        return len(self.members) < self.lattice.size**self.k


def all_tuples(L, k):
    return list(product(range(L.size), repeat=k))


def top_sum(L, k):
    """Tuples with at least one component equal to top."""
    return frozenset(x for x in all_tuples(L, k) if L.top in x)


def filter_sum(L, filters):
    """``F_1 + ... + F_k``."""
    k = len(filters)
    return frozenset(x for x in all_tuples(L, k) if any(x[i] in filters[i] for i in range(k)))


def _similar(x, y):
    return sum(a != b for a, b in zip(x, y)) <= 1


def _meet(L, x, y):
    return tuple(int(L.meet[a, b]) for a, b in zip(x, y))


def is_filtroid(F):
    L, k, S = F.lattice, F.k, F.members
    for x in S:
        for i in range(k):
            for b in range(L.size):
                if L.leq[x[i], b] and b != x[i]:
                    if x[:i] + (b,) + x[i + 1 :] not in S:
                        return False
    if not top_sum(L, k) <= S:
        return False
    for x in S:
        for y in S:
            if _similar(x, y) and _meet(L, x, y) not in S:
                return False
    return True


def is_prime(F):
    """A tuple of prime filters summing to ``F``, or ``None``."""
    if not F.is_proper:
        return None
    L = F.lattice
    for combo in product(L.prime_filters, repeat=F.k):
        if filter_sum(L, combo) == F.members:
            return combo
    return None


def prime_filtroids(L, k):
    return [Filtroid(L, k, filter_sum(L, combo)) for combo in product(L.prime_filters, repeat=k)]


def close(L, k, seed):
    """Smallest filtroid containing ``seed``."""
    S = set(top_sum(L, k)) | {tuple(x) for x in seed}
    changed = True
    while changed:
        changed = False
        for x in list(S):
            for i in range(k):
                for b in range(L.size):
                    if L.leq[x[i], b]:
                        y = x[:i] + (b,) + x[i + 1 :]
                        if y not in S:
                            S.add(y)
                            changed = True
        items = list(S)
        for x in items:
            for y in items:
                if _similar(x, y):
                    z = _meet(L, x, y)
                    if z not in S:
                        S.add(z)
                        changed = True
    return Filtroid(L, k, frozenset(S))


def enumerate_filtroids(L, k, budget=1 << 20):
    """Every filtroid of ``L^k`` by subset search over the non-forced tuples."""
    forced = top_sum(L, k)
    free = [x for x in all_tuples(L, k) if x not in forced]
    if 2 ** len(free) > budget:
        raise BudgetExceeded(2 ** len(free), budget)
    out = []
    for mask in range(2 ** len(free)):
        S = forced | {free[i] for i in range(len(free)) if mask >> i & 1}
        F = Filtroid(L, k, frozenset(S))
        if is_filtroid(F):
            out.append(F)
    return out


@dataclass(frozen=True)
class PrimeIntersectionFailure:
    filtroid: Filtroid
    intersection: frozenset


def check_prime_intersection_theorem(L, k, filtroids=None, seeds=None, rng=None):
    """Check that each proper filtroid equals the intersection of the prime filtroids above it.

    Candidates come from ``filtroids``, else from closing random ``seeds``
    (a count, drawn with ``rng``), else from full enumeration.
    Returns ``(failure or None, number of proper filtroids examined)``.
    """
    if filtroids is None:
        if seeds is None:
            filtroids = enumerate_filtroids(L, k)
        else:
            rng = rng or np.random.default_rng(0)
            tuples = all_tuples(L, k)
            filtroids = []
            for _ in range(seeds):
                size = int(rng.integers(0, 3))
                picks = rng.choice(len(tuples), size=size, replace=False) if size else []
                filtroids.append(close(L, k, [tuples[i] for i in picks]))
    primes = prime_filtroids(L, k)
    everything = frozenset(all_tuples(L, k))
    examined = 0
    for F in filtroids:
        if not F.is_proper:
            continue
        examined += 1
        inter = everything
        for P in primes:
            if F.members <= P.members:
                inter = inter & P.members
        if inter != F.members:
            return PrimeIntersectionFailure(F, inter), examined
    return None, examined


# ---------------------------------------------------------------- the three-way lemma


@dataclass(frozen=True)
class LemmaRFailure:
    modality: str
    u: int
    v: tuple
    conditions: tuple


def lemma_r_check(A, modality, mode="idempotent"):
    """Three characterisations of the canonical relation must agree.

    (i) membership in the canonical relation; (ii) ``u(D a) <= max_l v_l(a_l)``
    for every carrier tuple; (iii) the sum of the ``v_l``-ultrafilters of the
    Boolean skeleton is a prime filtroid containing the skeleton tuples
    sent to 1 by ``u o D``.  Returns ``(failure or None, pairs checked)``.
    """
    from .algebra import canonical_frame

    fr = canonical_frame(A, mode)
    homs = A.homomorphisms
    T = A.operators[modality]
    k = T.ndim
    n = A.n
    V = np.array([h.values for h in homs], dtype=np.int64)
    idx = {w: i for i, w in enumerate(fr.worlds)}
    rel = {tuple(idx[w] for w in t) for t in fr.relations[modality]}

    grids = np.meshgrid(*([np.arange(A.size)] * k), indexing="ij")
    image = T[tuple(grids)]

    L = FiniteDistributiveLattice.from_algebra(A)
    pos = {a: i for i, a in enumerate(L.carrier_index)}
    bgrid = list(product(L.carrier_index, repeat=k))
    checked = 0
    for ui in range(len(homs)):
        target = frozenset(tuple(pos[a] for a in bt) for bt in bgrid if V[ui][T[bt]] == n)
        if not is_filtroid(Filtroid(L, k, target)):
            return LemmaRFailure(modality, ui, (), ("preimage is not a filtroid",)), checked
        for vs in product(range(len(homs)), repeat=k):
            c1 = (ui,) + vs in rel
            rhs = V[vs[0]][grids[0]]
            for ell in range(1, k):
                rhs = np.maximum(rhs, V[vs[ell]][grids[ell]])
            c2 = bool((V[ui][image] <= rhs).all())
            filters = [frozenset(pos[a] for a in L.carrier_index if V[vi][a] == n) for vi in vs]
            S = Filtroid(L, k, filter_sum(L, filters))
            c3 = is_prime(S) is not None and is_filtroid(S) and target <= S.members
            checked += 1
            if not c1 == c2 == c3:
                return LemmaRFailure(modality, ui, vs, (c1, c2, c3)), checked
    return None, checked
