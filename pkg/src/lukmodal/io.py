"""JSON file formats for frames, models and algebras.

Frame::

    {"n": 2, "signature": {"box": 1}, "worlds": ["u", "v"],
     "relations": {"box": [["u", "v"]]}, "r": {"1": ["v"], "2": ["u", "v"]}}

``n`` and ``r`` are present only for enriched frames.  A model file is a
frame file plus ``"valuation": {"u": {"p": "1/2"}}`` (and ``"n"`` for the
grain when the frame is plain).
"""

import json

import numpy as np

from .algebra import FiniteMMVAlgebra
from .errors import AlgebraError, FrameError
from .frames import LFrame, LnFrame, validate_ln
from .mvcore import TruthValue, divisors
from .semantics import Model
from .syntax import Signature


def frame_to_json(fr):
    base = fr.base if isinstance(fr, LnFrame) else fr
    out = {}
    if isinstance(fr, LnFrame):
        out["n"] = fr.n
    out["signature"] = base.sig.modalities
    out["worlds"] = list(base.worlds)
    order = {w: i for i, w in enumerate(base.worlds)}
    out["relations"] = {
        name: [list(t) for t in sorted(ts, key=lambda t: [order[w] for w in t])]
        for name, ts in base.relations.items()
    }
    if isinstance(fr, LnFrame):
        out["r"] = {str(m): [w for w in base.worlds if w in fr.r[m]] for m in sorted(fr.r)}
    return out


def frame_from_json(data, validate=True):
    try:
        sig = Signature(data.get("signature", {"box": 1}))
        worlds = [str(w) for w in data["worlds"]]
        rels = {name: [tuple(str(w) for w in t) for t in ts] for name, ts in data.get("relations", {}).items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise FrameError(f"malformed frame file: {exc}") from None
    base = LFrame(sig, tuple(worlds), rels)
    if "n" not in data:
        return base
    n = int(data["n"])
    if "r" not in data:
        raise FrameError("enriched frame needs an \"r\" map")
    keys = set(data["r"])
    expected = {str(m) for m in divisors(n)}
    if keys != expected:
        raise FrameError(f"keys of r must be exactly {sorted(expected, key=int)}, got {sorted(keys)}")
    fr = LnFrame(base, n, {int(m): frozenset(str(w) for w in ws) for m, ws in data["r"].items()})
    if validate:
        problem = validate_ln(fr)
        if problem is not None:
            raise FrameError(str(problem))
    return fr


def model_to_json(m, frame=None):
    out = frame_to_json(frame if frame is not None else m.frame)
    if "n" not in out:
        out["grain"] = m.n
    out["valuation"] = {w: {p: str(m.table[(w, p)]) for p in m.variables} for w in m.frame.worlds}
    return out


def model_from_json(data, validate=True):
    """Return ``(model, frame)``; ``frame`` is enriched when the file carries ``n`` and ``r``."""
    fr = frame_from_json({k: v for k, v in data.items() if k not in ("valuation", "grain")}, validate)
    n = fr.n if isinstance(fr, LnFrame) else int(data.get("grain", 1))
    val = data.get("valuation", {})
    vs = []
    for w in fr.worlds:
        for p in val.get(w, {}):
            if p not in vs:
                vs.append(p)
    table = {}
    for w in fr.worlds:
        for p in vs:
            raw = val.get(w, {}).get(p)
            if raw is None:
                raise FrameError(f"valuation missing for world {w!r}, variable {p!r}")
            table[(w, p)] = TruthValue.parse(raw, n)
    model = Model(fr.base if isinstance(fr, LnFrame) else fr, n, table, tuple(vs))
    if isinstance(fr, LnFrame):
        from .frames import grains

        g = grains(fr)
        for (w, p), v in table.items():
            if not v.lies_in(g[w]):
                raise FrameError(f"value {v} at {w!r} is not admissible in a world of grain {g[w]}")
    return model, fr


def algebra_to_json(A):
    """Carrier values are written at each coordinate's own grain."""
    scale = [A.n // g for _, g in A.coordinates]
    carrier = [[int(x) // s for x, s in zip(A.element(i), scale)] for i in range(A.size)]
    return {
        "n": A.n,
        "coordinates": [{"label": lbl, "grain": g} for lbl, g in A.coordinates],
        "carrier": carrier,
        "operators": {
            name: {"arity": int(T.ndim), "table": [int(x) for x in T.ravel()]} for name, T in A.operators.items()
        },
    }


def algebra_from_json(data):
    try:
        n = int(data["n"])
        coords = [(c["label"], int(c["grain"])) for c in data["coordinates"]]
        scale = [n // g for _, g in coords]
        carrier = [tuple(int(x) * s for x, s in zip(e, scale)) for e in data["carrier"]]
        c = len(carrier)
        ops = {}
        for name, spec in data.get("operators", {}).items():
            k = int(spec["arity"])
            ops[name] = np.array(spec["table"], dtype=np.intp).reshape((c,) * k)
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraError(f"malformed algebra file: {exc}") from None
    if sorted(set(carrier)) != carrier:
        raise AlgebraError("carrier must be listed in increasing lexicographic order without repeats")
    return FiniteMMVAlgebra(n, coords, carrier, ops, sig=Signature({k: t.ndim for k, t in ops.items()}))


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, path=None, **kw):
    text = json.dumps(obj, indent=kw.pop("indent", 2), **kw)
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text + "\n")
    return text
