"""Many-valued models, formula evaluation and the two validity relations.

All evaluation runs on integer numerators.  The batch evaluator works on
arrays of shape ``(batch, worlds)``, one row per valuation, so exhaustive
validity checks enumerate valuations in vectorised chunks.
"""

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import BudgetExceeded, FrameError, LukModalError
from .frames import LFrame, LnFrame, grains
from .mvcore import TruthValue
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
    variables,
)

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 15


class UndeclaredVariable(LukModalError, KeyError):
    pass


def _modal_index(fr):
    """Per modality, per world: integer array (tuples, k) of successor indices."""
    cache = fr.__dict__.get("_modal_index")
    if cache is None:
        base = fr.base if isinstance(fr, LnFrame) else fr
        pos = {w: i for i, w in enumerate(base.worlds)}
        cache = {}
        for name in base.sig:
            k = base.sig.arity(name)
            cache[name] = [
                np.array([[pos[w] for w in v] for v in base.successors[name][u]], dtype=np.intp).reshape(-1, k)
                for u in base.worlds
            ]
        fr.__dict__["_modal_index"] = cache
    return cache


def evaluate_batch(fr, n, phi, values, memo=None):
    """Values of ``phi`` at every world for a batch of valuations.

    ``values`` maps each variable of ``phi`` to an int array ``(batch, |W|)``
    of numerators.  Returns an array of the same shape.
    """
    index = _modal_index(fr)
    if memo is None:
        memo = {}
    shape = next(iter(values.values())).shape if values else (1, len(fr.worlds))

    def go(f):
        r = memo.get(f)
        if r is not None:
            return r
        if isinstance(f, Var):
            try:
                r = values[f.name]
            except KeyError:
                raise UndeclaredVariable(f.name) from None
        elif isinstance(f, One):
            r = np.full(shape, n, dtype=np.int64)
        elif isinstance(f, Zero):
            r = np.zeros(shape, dtype=np.int64)
        elif isinstance(f, Neg):
            r = n - go(f.arg)
        elif isinstance(f, Imp):
            r = np.minimum(n, n - go(f.left) + go(f.right))
        elif isinstance(f, Oplus):
            r = np.minimum(go(f.left) + go(f.right), n)
        elif isinstance(f, Odot):
            r = np.maximum(go(f.left) + go(f.right) - n, 0)
        elif isinstance(f, Join):
            r = np.maximum(go(f.left), go(f.right))
        elif isinstance(f, Meet):
            r = np.minimum(go(f.left), go(f.right))
        elif isinstance(f, KTimes):
            r = np.minimum(f.k * go(f.arg), n)
        elif isinstance(f, KPower):
            r = np.maximum(f.k * go(f.arg) - (f.k - 1) * n, 0) if f.k else np.full(shape, n, dtype=np.int64)
        elif isinstance(f, Modal):
            args = [go(a) for a in f.args]
            r = np.empty(shape, dtype=np.int64)
            for u, tuples in enumerate(index[f.name]):
                if len(tuples) == 0:
                    r[:, u] = n
                    continue
                best = args[0][:, tuples[:, 0]]
                for ell in range(1, len(args)):
                    best = np.maximum(best, args[ell][:, tuples[:, ell]])
                r[:, u] = best.min(axis=1)
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[f] = r
        return r

    return go(phi)


@dataclass(frozen=True)
class Model:
    """A frame with a valuation table ``(world, variable) -> TruthValue``."""

    frame: LFrame
    n: int
    table: dict = field(hash=False)
    variables: tuple = ()

    def __post_init__(self):
        fr = self.frame.base if isinstance(self.frame, LnFrame) else self.frame
        object.__setattr__(self, "frame", fr)
        vs = tuple(self.variables) or tuple(sorted({p for _, p in self.table}))
        object.__setattr__(self, "variables", vs)
        table = {}
        for w in fr.worlds:
            for p in vs:
                try:
                    v = self.table[(w, p)]
                except KeyError:
                    raise FrameError(f"valuation missing for world {w!r}, variable {p!r}") from None
                if not isinstance(v, TruthValue):
                    v = TruthValue(int(v), self.n)
                if v.n != self.n:
                    v = v.embed(self.n)
                table[(w, p)] = v
        object.__setattr__(self, "table", table)

    def value(self, w, p):
        return self.table[(w, p)]

    def arrays(self):
        """Valuation as a batch of one row per variable."""
        return {
            p: np.array([[self.table[(w, p)].num for w in self.frame.worlds]], dtype=np.int64)
            for p in self.variables
        }

    def values_of(self, phi):
        """Mapping world -> TruthValue of ``phi``."""
        missing = [p for p in variables(phi) if p not in self.variables]
        if missing:
            raise UndeclaredVariable(missing[0])
        row = evaluate_batch(self.frame, self.n, phi, self.arrays())[0]
        return {w: TruthValue(int(row[i]), self.n) for i, w in enumerate(self.frame.worlds)}

    def __repr__(self):
        cells = ", ".join(f"{w}.{p}={v}" for (w, p), v in self.table.items())
        return f"Model(n={self.n}, worlds={list(self.frame.worlds)}, {{{cells}}})"


def eval_formula(m, u, phi):
    """Truth value of ``phi`` at world ``u`` of model ``m``."""
    if u not in m.frame.worlds:
        raise FrameError(f"unknown world {u!r}")
    return m.values_of(phi)[u]


def is_true(m, phi):
    return all(v.num == m.n for v in m.values_of(phi).values())


# ---------------------------------------------------------------- enumeration


def _allowed_values(fr, n):
    """Per world, the numerators a valuation may take there."""
    if isinstance(fr, LnFrame):
        if fr.n != n:
            raise FrameError(f"frame grain {fr.n} differs from {n}")
        g = grains(fr)
        return [np.arange(0, n + 1, n // g[w], dtype=np.int64) for w in fr.worlds]
    return [np.arange(n + 1, dtype=np.int64) for _ in fr.worlds]


def _columns(fr, vs):
    return [(wi, p) for wi in range(len(fr.worlds)) for p in vs]


def valuation_count(fr, n, vs):
    allowed = _allowed_values(fr, n)
    return prod(len(allowed[wi]) for wi, _ in _columns(fr, vs))


def valuation_chunks(fr, n, vs, budget=DEFAULT_BUDGET, chunk=CHUNK):
    """Yield ``(offset, values)`` blocks covering every admissible valuation.

    Valuations are ordered lexicographically on (world, variable) pairs,
    worlds first, then variables, then ascending value.
    """
    allowed = _allowed_values(fr, n)
    cols = _columns(fr, vs)
    radices = [len(allowed[wi]) for wi, _ in cols]
    total = prod(radices)
    if total > budget:
        raise BudgetExceeded(total, budget)
    places = [prod(radices[j + 1 :]) for j in range(len(cols))]
    W = len(fr.worlds)
    for start in range(0, total, chunk):
        rows = np.arange(start, min(start + chunk, total), dtype=np.int64)
        values = {p: np.empty((len(rows), W), dtype=np.int64) for p in vs}
        for (wi, p), place, radix in zip(cols, places, radices):
            values[p][:, wi] = allowed[wi][(rows // place) % radix]
        yield start, values


def _row_model(fr, n, vs, values, row):
    base = fr.base if isinstance(fr, LnFrame) else fr
    table = {(w, p): TruthValue(int(values[p][row, wi]), n) for wi, w in enumerate(base.worlds) for p in vs}
    return Model(base, n, table, tuple(vs))


def models_based_on(fr, vs, n=None, budget=DEFAULT_BUDGET):
    """Every model on ``fr`` over the variables ``vs``.

    For an enriched frame the value at ``u`` is restricted to the subchain
    of grain ``s_u``; for a plain frame ``n`` must be given.
    """
    vs = list(vs)
    if n is None:
        if not isinstance(fr, LnFrame):
            raise ValueError("grain required for a plain frame")
        n = fr.n
    for _, values in valuation_chunks(fr, n, vs, budget):
        rows = len(next(iter(values.values()))) if vs else 1
        for row in range(rows):
            yield _row_model(fr, n, vs, values, row)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a validity check; truthy when valid."""

    valid: bool
    countermodel: object = None
    world: object = None
    checked: int = 0

    def __bool__(self):
        return self.valid


def _check(fr, n, phis, vs, budget):
    phis = list(phis)
    if vs is None:
        seen = {}
        for phi in phis:
            for p in variables(phi):
                seen.setdefault(p, None)
        vs = list(seen)
    checked = 0
    for _, values in valuation_chunks(fr, n, vs, budget):
        memo = {}
        for phi in phis:
            out = evaluate_batch(fr, n, phi, values, memo)
            bad = out < n
            if bad.any():
                rows = np.flatnonzero(bad.any(axis=1))
                row = int(rows[0])
                wi = int(np.flatnonzero(bad[row])[0])
                model = _row_model(fr, n, vs, values, row) if vs else Model(
                    fr.base if isinstance(fr, LnFrame) else fr, n, {}, ()
                )
                return Verdict(False, model, fr.worlds[wi], checked + row + 1)
        checked += len(next(iter(values.values()))) if vs else 1
    return Verdict(True, checked=checked)


def valid_n(fr, n, phi, budget=DEFAULT_BUDGET, vs=None):
    """Validity on a plain frame over every model with values of grain ``n``.

    ``phi`` may be a single formula or an iterable of formulas.  Only the
    formula's own variables are enumerated: its value depends on nothing else.
    """
    if isinstance(fr, LnFrame):
        fr = fr.base
    phis = [phi] if not isinstance(phi, (list, tuple, set, frozenset)) else phi
    return _check(fr, n, phis, vs, budget)


def valid(fr, phi, budget=DEFAULT_BUDGET, vs=None):
    """Validity on an enriched frame over the models based on it."""
    if not isinstance(fr, LnFrame):
        raise TypeError("valid() needs an enriched frame; use valid_n for plain frames")
    phis = [phi] if not isinstance(phi, (list, tuple, set, frozenset)) else phi
    return _check(fr, fr.n, phis, vs, budget)


def embed_model(m, n):
    """Same model read at grain ``n`` (a multiple of the model's grain)."""
    return Model(m.frame, n, {k: v.embed(n) for k, v in m.table.items()}, m.variables)
