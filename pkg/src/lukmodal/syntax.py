"""Modal formulas: signatures, ASTs, a text parser and printer.

Concrete syntax, tightest binding first::

    atoms      p   0   1   name(f1, ..., fk)   ( f )
    postfix    f^k
    prefix     ~f    k.f
    (.)        left associative
    (+)        left associative
    /\\         left associative
    \\/         left associative
    ->         right associative
"""

import re
from dataclasses import dataclass

from .errors import FormulaSyntaxError, SignatureError

RESERVED = frozenset({"0", "1", "~", "->", "(+)", "(.)", "\\/", "/\\", "^", "."})
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Signature:
    """Modality names with their arities."""

    def __init__(self, modalities=None):
        modalities = dict(modalities or {})
        for name, k in modalities.items():
            if not isinstance(name, str) or not _NAME.match(name) or name in RESERVED:
                raise SignatureError(f"bad modality name {name!r}")
            if not isinstance(k, int) or k < 1:
                raise SignatureError(f"modality {name!r} needs arity >= 1, got {k!r}")
        self._m = modalities

    @property
    def modalities(self):
        return dict(self._m)

    def arity(self, name):
        try:
            return self._m[name]
        except KeyError:
            raise SignatureError(f"unknown modality {name!r}") from None

    def __contains__(self, name):
        return name in self._m

    def __iter__(self):
        return iter(self._m)

    def __len__(self):
        return len(self._m)

    def __eq__(self, other):
        return isinstance(other, Signature) and self._m == other._m

    def __hash__(self):
        return hash(tuple(sorted(self._m.items())))

    def __repr__(self):
        return f"Signature({self._m!r})"


BOX = Signature({"box": 1})


class Formula:
    """Base class of AST nodes. Subclasses are frozen dataclasses."""

    __slots__ = ()

    @property
    def children(self):
        return ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class One(Formula):
    pass


@dataclass(frozen=True)
class Zero(Formula):
    pass


@dataclass(frozen=True)
class Neg(Formula):
    arg: Formula

    @property
    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    @property
    def children(self):
        return (self.left, self.right)


class Imp(_Binary):
    pass


class Oplus(_Binary):
    pass


class Odot(_Binary):
    pass


class Join(_Binary):
    pass


class Meet(_Binary):
    pass


@dataclass(frozen=True)
class KTimes(Formula):
    """``k.arg``: ``arg (+) ... (+) arg`` with ``k`` copies (``0`` when k = 0)."""

    k: int
    arg: Formula

    @property
    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class KPower(Formula):
    """``arg^k``: ``arg (.) ... (.) arg`` with ``k`` copies (``1`` when k = 0)."""

    k: int
    arg: Formula

    @property
    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class Modal(Formula):
    name: str
    args: tuple

    @property
    def children(self):
        return self.args


def modal(name, *args):
    return Modal(name, tuple(args))


def rebuild(phi, children):
    """Copy of ``phi`` with its children replaced."""
    if isinstance(phi, (Var, One, Zero)):
        return phi
    if isinstance(phi, Neg):
        return Neg(children[0])
    if isinstance(phi, _Binary):
        return type(phi)(children[0], children[1])
    if isinstance(phi, (KTimes, KPower)):
        return type(phi)(phi.k, children[0])
    if isinstance(phi, Modal):
        return Modal(phi.name, tuple(children))
    raise TypeError(f"not a formula: {phi!r}")


def variables(phi):
    """Variable names in order of first occurrence."""
    seen = {}
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, Var):
            seen.setdefault(f.name, None)
        else:
            stack.extend(reversed(f.children))
    return list(seen)


def subformulas(phi):
    """All subformulas, children before parents, without repetition."""
    out, seen = [], set()

    def walk(f):
        if f in seen:
            return
        for c in f.children:
            walk(c)
        seen.add(f)
        out.append(f)

    walk(phi)
    return out


def depth(phi):
    if not phi.children:
        return 0
    return 1 + max(depth(c) for c in phi.children)


def check_signature(phi, sig):
    for f in subformulas(phi):
        if isinstance(f, Modal):
            k = sig.arity(f.name)
            if len(f.args) != k:
                raise SignatureError(f"{f.name} expects {k} arguments, got {len(f.args)}")


def _fold(cls, items, unit):
    if not items:
        return unit
    acc = items[0]
    for it in items[1:]:
        acc = cls(acc, it)
    return acc


def desugar(phi):
    """Rewrite into the primitive connectives: variables, 1, ~, ->, modalities."""
    memo = {}

    def go(f):
        if f in memo:
            return memo[f]
        if isinstance(f, (Var, One)):
            r = f
        elif isinstance(f, Zero):
            r = Neg(One())
        elif isinstance(f, Neg):
            r = Neg(go(f.arg))
        elif isinstance(f, Imp):
            r = Imp(go(f.left), go(f.right))
        elif isinstance(f, Oplus):
            r = _oplus(go(f.left), go(f.right))
        elif isinstance(f, Odot):
            r = _odot(go(f.left), go(f.right))
        elif isinstance(f, Join):
            a, b = go(f.left), go(f.right)
            r = _oplus(_odot(b, Neg(a)), a)
        elif isinstance(f, Meet):
            a, b = go(f.left), go(f.right)
            r = _odot(_oplus(b, Neg(a)), a)
        elif isinstance(f, KTimes):
            a = go(f.arg)
            r = _fold(_oplus, [a] * f.k, Neg(One()))
        elif isinstance(f, KPower):
            a = go(f.arg)
            r = _fold(_odot, [a] * f.k, One())
        elif isinstance(f, Modal):
            r = Modal(f.name, tuple(go(a) for a in f.args))
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[f] = r
        return r

    return go(phi)


def _oplus(a, b):
    return Imp(Neg(a), b)


def _odot(a, b):
    return Neg(_oplus(Neg(a), Neg(b)))


def tr_n(phi, m):
    """Replace every variable ``p`` by ``p^m``."""
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"power must be a positive integer, got {m!r}")
    memo = {}

    def go(f):
        if f not in memo:
            if isinstance(f, Var):
                memo[f] = KPower(m, f) if m > 1 else f
            else:
                memo[f] = rebuild(f, [go(c) for c in f.children])
        return memo[f]

    return go(phi)


def _power_of_var(f):
    """If ``f`` is a product ``p (.) ... (.) p`` (sugar allowed), return (name, count)."""
    if isinstance(f, Var):
        return f.name, 1
    if isinstance(f, KPower):
        inner = _power_of_var(f.arg)
        if inner and f.k >= 1:
            return inner[0], inner[1] * f.k
        return None
    if isinstance(f, Odot):
        a, b = _power_of_var(f.left), _power_of_var(f.right)
        if a and b and a[0] == b[0]:
            return a[0], a[1] + b[1]
    return None


def is_pform(phi, m):
    """True when every variable occurs only inside an ``m``-fold product of itself.

    The remaining structure may use any connective, since the derived
    connectives are abbreviations over ~ and ->.
    """
    memo = {}

    def go(f):
        if f in memo:
            return memo[f]
        pw = _power_of_var(f)
        if pw is not None and pw[1] == m:
            r = True
        elif isinstance(f, Var):
            r = False
        else:
            r = all(go(c) for c in f.children)
        memo[f] = r
        return r

    return go(phi)


# ---------------------------------------------------------------- printing

_BIN_TOKEN = {Imp: "->", Join: "\\/", Meet: "/\\", Oplus: "(+)", Odot: "(.)"}
_BIN_LEVEL = {Imp: 0, Join: 1, Meet: 2, Oplus: 3, Odot: 4}
_PREFIX, _POSTFIX, _ATOM = 5, 6, 7


def _level(f):
    if isinstance(f, _Binary):
        return _BIN_LEVEL[type(f)]
    if isinstance(f, (Neg, KTimes)):
        return _PREFIX
    if isinstance(f, KPower):
        return _POSTFIX
    return _ATOM


def to_text(phi):
    """Print with the minimal parentheses that parse back to the same tree."""

    def wrap(f, min_level):
        s = go(f)
        return f"({s})" if _level(f) < min_level else s

    def go(f):
        if isinstance(f, Var):
            return f.name
        if isinstance(f, One):
            return "1"
        if isinstance(f, Zero):
            return "0"
        if isinstance(f, Neg):
            return "~" + wrap(f.arg, _PREFIX)
        if isinstance(f, KTimes):
            return f"{f.k}." + wrap(f.arg, _PREFIX)
        if isinstance(f, KPower):
            return wrap(f.arg, _ATOM) + f"^{f.k}"
        if isinstance(f, Modal):
            return f"{f.name}(" + ", ".join(go(a) for a in f.args) + ")"
        lvl = _BIN_LEVEL[type(f)]
        tok = _BIN_TOKEN[type(f)]
        if isinstance(f, Imp):
            return f"{wrap(f.left, lvl + 1)} {tok} {wrap(f.right, lvl)}"
        return f"{wrap(f.left, lvl)} {tok} {wrap(f.right, lvl + 1)}"

    return go(phi)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<op>\(\+\)|\(\.\)|->|\\/|/\\|[~^().,])|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, sig):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, value):
        kind, v, pos = self.take()
        if v != value:
            raise FormulaSyntaxError(f"expected {value!r}, found {v or 'end of input'!r}", pos, self.text)

    def error(self, msg):
        raise FormulaSyntaxError(msg, self.peek()[2], self.text)

    def parse(self):
        f = self.imp()
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")
        return f

    def imp(self):
        left = self.binary(1)
        if self.peek()[1] == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    _LEVELS = {1: ("\\/", Join), 2: ("/\\", Meet), 3: ("(+)", Oplus), 4: ("(.)", Odot)}

    def binary(self, level):
        if level > 4:
            return self.prefix()
        tok, cls = self._LEVELS[level]
        left = self.binary(level + 1)
        while self.peek()[1] == tok:
            self.take()
            left = cls(left, self.binary(level + 1))
        return left

    def prefix(self):
        kind, v, pos = self.peek()
        if v == "~":
            self.take()
            return Neg(self.prefix())
        if kind == "int" and self.toks[self.i + 1][1] == ".":
            self.take()
            self.take()
            return KTimes(int(v), self.prefix())
        return self.postfix()

    def postfix(self):
        f = self.atom()
        while self.peek()[1] == "^":
            self.take()
            kind, v, pos = self.take()
            if kind != "int":
                raise FormulaSyntaxError("exponent must be an integer", pos, self.text)
            f = KPower(int(v), f)
        return f

    def atom(self):
        kind, v, pos = self.take()
        if v == "(":
            f = self.imp()
            self.expect(")")
            return f
        if kind == "int":
            if v == "0":
                return Zero()
            if v == "1":
                return One()
            raise FormulaSyntaxError(f"integer {v} is not a constant (did you mean {v}.phi?)", pos, self.text)
        if kind == "name":
            if self.peek()[1] == "(":
                if v not in self.sig:
                    raise SignatureError(f"unknown modality {v!r} at position {pos}")
                self.take()
                args = [self.imp()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.imp())
                self.expect(")")
                k = self.sig.arity(v)
                if len(args) != k:
                    raise SignatureError(f"{v} expects {k} arguments, got {len(args)} at position {pos}")
                return Modal(v, tuple(args))
            if v in self.sig:
                raise SignatureError(f"modality {v!r} used without arguments at position {pos}")
            return Var(v)
        raise FormulaSyntaxError(f"unexpected {v or 'end of input'!r}", pos, self.text)


def parse(text, sig=BOX):
    """Parse ``text`` over the signature ``sig``."""
    return _Parser(text, sig).parse()
