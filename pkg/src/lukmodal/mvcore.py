"""Arithmetic on the finite Łukasiewicz chain and characteristic unary terms.

Truth values are exact: a value of grain ``n`` is an integer numerator in
``0..n`` standing for ``num/n``.  Nothing here touches floating point.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd

from .errors import GrainMismatchError, SynthesisError


def divisors(n):
    """Positive divisors of ``n`` in increasing order."""
    if n < 1:
        raise ValueError(f"grain must be positive, got {n}")
    return [d for d in range(1, n + 1) if n % d == 0]


@total_ordering
@dataclass(frozen=True)
class TruthValue:
    """The element ``num/n`` of the chain with grain ``n``."""

    num: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"grain must be positive, got {self.n}")
        if not 0 <= self.num <= self.n:
            raise ValueError(f"numerator {self.num} outside 0..{self.n}")

    @classmethod
    def parse(cls, text, n):
        """Read ``"1/2"``, ``"0"``, ``"1"`` or an int as a value of grain ``n``."""
        if isinstance(text, int):
            frac = Fraction(text)
        else:
            frac = Fraction(str(text).strip())
        scaled = frac * n
        if scaled.denominator != 1:
            raise ValueError(f"{text} is not a value of grain {n}")
        return cls(int(scaled), n)

    def _check(self, other):
        if not isinstance(other, TruthValue):
            return NotImplemented
        if other.n != self.n:
            raise GrainMismatchError(f"grain {self.n} vs grain {other.n}")
        return other

    def __lt__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self.num < other.num

    def as_fraction(self):
        return Fraction(self.num, self.n)

    def embed(self, n):
        """Image of this value in the chain of grain ``n`` (a multiple of ``self.n``)."""
        if n % self.n:
            raise GrainMismatchError(f"grain {self.n} does not divide {n}")
        return TruthValue(self.num * (n // self.n), n)

    def lies_in(self, m):
        """True when the value belongs to the subchain of grain ``m``."""
        return (self.num * m) % self.n == 0

    def __str__(self):
        if self.num == 0:
            return "0"
        if self.num == self.n:
            return "1"
        f = self.as_fraction()
        return f"{f.numerator}/{f.denominator}"


def zero(n):
    return TruthValue(0, n)


def one(n):
    return TruthValue(n, n)


def chain(n):
    """All values of grain ``n``, ascending."""
    return [TruthValue(i, n) for i in range(n + 1)]


def _pair(a, b):
    if a.n != b.n:
        raise GrainMismatchError(f"grain {a.n} vs grain {b.n}")
    return a.n


def neg(a):
    return TruthValue(a.n - a.num, a.n)


def imp(a, b):
    n = _pair(a, b)
    return TruthValue(min(n, n - a.num + b.num), n)


def oplus(a, b):
    n = _pair(a, b)
    return TruthValue(min(a.num + b.num, n), n)


def odot(a, b):
    n = _pair(a, b)
    return TruthValue(max(a.num + b.num - n, 0), n)


def join(a, b):
    n = _pair(a, b)
    return TruthValue(max(a.num, b.num), n)


def meet(a, b):
    n = _pair(a, b)
    return TruthValue(min(a.num, b.num), n)


# Numerator-level kernels, used by the vectorised evaluators.
def _neg_num(n, a):
    return n - a


def _imp_num(n, a, b):
    return min(n, n - a + b)


def _oplus_num(n, a, b):
    return min(a + b, n)


def _odot_num(n, a, b):
    return max(a + b - n, 0)


_BINARY = {
    "imp": ("->", _imp_num),
    "oplus": ("(+)", _oplus_num),
    "odot": ("(.)", _odot_num),
    "join": ("\\/", lambda n, a, b: max(a, b)),
    "meet": ("/\\", lambda n, a, b: min(a, b)),
}


@dataclass(frozen=True)
class UnaryMVTerm:
    """MV-term in the single variable ``x``.

    ``kind`` is one of ``var``, ``zero``, ``one``, ``neg``, ``imp``,
    ``oplus``, ``odot``, ``join``, ``meet``.
    """

    kind: str
    args: tuple = ()

    def __post_init__(self):
        arity = {"var": 0, "zero": 0, "one": 0, "neg": 1}.get(self.kind)
        if arity is None:
            if self.kind not in _BINARY:
                raise ValueError(f"unknown term kind {self.kind!r}")
            arity = 2
        if len(self.args) != arity:
            raise ValueError(f"{self.kind} takes {arity} arguments")

    def table(self, n):
        """Values at ``0/n, 1/n, ..., n/n`` as a tuple of numerators."""
        return tuple(self._eval_num(n, a) for a in range(n + 1))

    def _eval_num(self, n, a):
        k = self.kind
        if k == "var":
            return a
        if k == "zero":
            return 0
        if k == "one":
            return n
        if k == "neg":
            return n - self.args[0]._eval_num(n, a)
        left = self.args[0]._eval_num(n, a)
        right = self.args[1]._eval_num(n, a)
        return _BINARY[k][1](n, left, right)

    def substitute(self, t):
        """Replace ``x`` by the term ``t``."""
        if self.kind == "var":
            return t
        return UnaryMVTerm(self.kind, tuple(s.substitute(t) for s in self.args))

    def size(self):
        return 1 + sum(s.size() for s in self.args)

    def __str__(self):
        k = self.kind
        if k == "var":
            return "x"
        if k == "zero":
            return "0"
        if k == "one":
            return "1"
        if k == "neg":
            return "~" + str(self.args[0])
        return f"({self.args[0]} {_BINARY[k][0]} {self.args[1]})"


X = UnaryMVTerm("var")


def term(kind, *args):
    return UnaryMVTerm(kind, tuple(args))


def eval_unary_term(t, a):
    """Evaluate ``t`` at the truth value ``a``."""
    return TruthValue(t._eval_num(a.n, a.num), a.n)


def double(t):
    return term("oplus", t, t)


def square(t):
    return term("odot", t, t)


def is_ds_composition(t):
    """True when ``t`` is ``x`` wrapped in any number of ``y(+)y`` / ``y(.)y`` layers."""
    while t.kind != "var":
        if t.kind not in ("oplus", "odot") or t.args[0] != t.args[1]:
            return False
        t = t.args[0]
    return True


def step_table(n, i):
    return tuple(n if a >= i else 0 for a in range(n + 1))


def tau_term(n, i):
    """Term made only of ``x(+)x`` and ``x(.)x`` layers computing ``[x >= i/n]``.

    Breadth-first search over compositions; the state is the function table
    on the chain, so the search space is finite and revisits are pruned.
    """
    if not 1 <= i <= n:
        raise ValueError(f"threshold index {i} outside 1..{n}")
    target = step_table(n, i)
    start = tuple(range(n + 1))
    parent = {start: None}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        if f == target:
            ops = []
            while parent[f] is not None:
                f, op = parent[f]
                ops.append(op)
            t = X
            for op in reversed(ops):
                t = double(t) if op == "d" else square(t)
            return t
        for op in ("d", "s"):
            g = (
                tuple(min(2 * v, n) for v in f)
                if op == "d"
                else tuple(max(2 * v - n, 0) for v in f)
            )
            if g not in parent:
                parent[g] = (f, op)
                queue.append(g)
    raise SynthesisError(f"no composition of doubling/squaring realises tau_{i}/{n}")


def membership_term(n, m):
    """{0,1}-valued term that is 1 exactly on the subchain of grain ``m``."""
    if n < 1 or m < 1 or n % m:
        raise ValueError(f"{m} does not divide {n}")
    step = n // m
    disjuncts = []
    for j in range(m):
        lo = j * step
        if lo == 0:
            disjuncts.append(term("neg", tau_term(n, 1)))
        else:
            disjuncts.append(term("meet", tau_term(n, lo), term("neg", tau_term(n, lo + 1))))
    disjuncts.append(tau_term(n, n))
    t = disjuncts[0]
    for d in disjuncts[1:]:
        t = term("join", t, d)
    return t


def check_abbreviations(n):
    """Return the first ``(name, a, b)`` where a derived connective disagrees with its definition."""
    for a in chain(n):
        for b in chain(n):
            if oplus(a, b) != imp(neg(a), b):
                return ("oplus", a, b)
            if odot(a, b) != neg(oplus(neg(a), neg(b))):
                return ("odot", a, b)
            if join(a, b) != oplus(odot(b, neg(a)), a):
                return ("join", a, b)
            if meet(a, b) != odot(oplus(b, neg(a)), a):
                return ("meet", a, b)
    return None

