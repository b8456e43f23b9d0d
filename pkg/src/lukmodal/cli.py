"""Command-line front end.

Exit codes: 0 success or valid, 1 countermodel or violation found, 2 usage
error, 3 enumeration budget exceeded.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import algebra as alg
from . import filtroid as flt
from . import harness
from .errors import BudgetExceeded, LukModalError
from .frames import (
    LnFrame,
    enumerate_frames,
    is_isomorphism,
    trivial_enrichment,
)
from .io import (
    algebra_from_json,
    algebra_to_json,
    dump_json,
    frame_from_json,
    frame_to_json,
    load_json,
    model_from_json,
    model_to_json,
)
from .mvcore import TruthValue, chain, divisors, is_ds_composition, membership_term, step_table, tau_term
from .semantics import DEFAULT_BUDGET, eval_formula, valid, valid_n
from .syntax import BOX, Signature, depth, desugar, is_pform, parse, to_text, tr_n, variables

OK, FOUND, USAGE, BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_signature(text):
    """``"box:1,nabla:2"`` to a signature."""
    if not text:
        return BOX
    mods = {}
    for part in text.split(","):
        name, _, k = part.strip().partition(":")
        try:
            mods[name] = int(k or 1)
        except ValueError:
            raise UsageError(f"bad arity in signature item {part!r}") from None
    return Signature(mods)


def _formulas(args, sig):
    if not args.formula:
        raise UsageError("at least one --formula is required")
    return [parse(t, sig) for t in args.formula]


def _out(args, text, data):
    print(dump_json(data) if args.json else text)


def _frame(args):
    if not args.frame:
        raise UsageError("--frame is required")
    return frame_from_json(load_json(args.frame))


# ---------------------------------------------------------------- commands


def cmd_parse(args):
    sig = parse_signature(args.signature)
    rows, data = [], []
    for phi in _formulas(args, sig):
        info = {
            "formula": to_text(phi),
            "desugared": to_text(desugar(phi)),
            "depth": depth(phi),
            "variables": variables(phi),
        }
        if args.m:
            info["pform"] = is_pform(phi, args.m)
        data.append(info)
        rows.append("\n".join(f"{k}: {v}" for k, v in info.items()))
    _out(args, "\n\n".join(rows), data)
    return OK


def cmd_eval(args):
    if not args.model:
        raise UsageError("--model is required")
    model, fr = model_from_json(load_json(args.model))
    sig = model.frame.sig
    phis = _formulas(args, sig)
    table = {to_text(phi): {w: str(eval_formula(model, w, phi)) for w in model.frame.worlds} for phi in phis}
    lines = []
    for text, row in table.items():
        lines.append(text)
        lines.extend(f"  {w}: {v}" for w, v in row.items())
    _out(args, "\n".join(lines), {"grain": model.n, "values": table})
    return OK


def _verdict_report(args, verdict, fr, n, phis):
    text = ", ".join(to_text(p) for p in phis)
    if verdict:
        _out(args, f"valid ({verdict.checked} valuations checked): {text}", {"valid": True, "checked": verdict.checked})
        return OK
    cm = verdict.countermodel
    lines = [f"not valid: {text}", f"countermodel refuting at world {verdict.world}:"]
    lines.extend(f"  {w}.{p} = {v}" for (w, p), v in cm.table.items())
    data = {"valid": False, "world": verdict.world, "countermodel": model_to_json(cm, fr if isinstance(fr, LnFrame) else None)}
    _out(args, "\n".join(lines), data)
    return FOUND


def cmd_valid(args):
    fr = _frame(args)
    if not isinstance(fr, LnFrame):
        if not args.n:
            raise UsageError("plain frame given: pass --n to use its trivial enrichment, or use validn")
        fr = trivial_enrichment(fr, args.n)
    elif args.n and args.n != fr.n:
        raise UsageError(f"--n {args.n} differs from the frame's grain {fr.n}")
    phis = _formulas(args, fr.sig)
    return _verdict_report(args, valid(fr, phis, args.budget), fr, fr.n, phis)


def cmd_validn(args):
    fr = _frame(args)
    n = args.n or (fr.n if isinstance(fr, LnFrame) else None)
    if not n:
        raise UsageError("--n is required")
    phis = _formulas(args, fr.sig)
    return _verdict_report(args, valid_n(fr, n, phis, args.budget), fr, n, phis)


def cmd_trn(args):
    if not args.m:
        raise UsageError("--m is required")
    sig = parse_signature(args.signature)
    outs = [to_text(tr_n(phi, args.m)) for phi in _formulas(args, sig)]
    _out(args, "\n".join(outs), outs)
    return OK


def _dump_algebra(args, A):
    data = algebra_to_json(A)
    if args.out:
        dump_json(data, args.out)
        print(f"algebra with {A.size} elements written to {args.out}")
    else:
        print(dump_json(data))
    return OK


def cmd_complex(args):
    fr = _frame(args)
    n = args.n or (fr.n if isinstance(fr, LnFrame) else None)
    if not n:
        raise UsageError("--n is required for a plain frame")
    return _dump_algebra(args, alg.complex_algebra(fr, n))


def cmd_tight(args):
    fr = _frame(args)
    if not isinstance(fr, LnFrame):
        if not args.n:
            raise UsageError("tight needs an enriched frame, or --n for the trivial enrichment")
        fr = trivial_enrichment(fr, args.n)
    return _dump_algebra(args, alg.tight_complex_algebra(fr))


def _algebra(args):
    if not args.algebra:
        raise UsageError("--algebra is required")
    return algebra_from_json(load_json(args.algebra))


def cmd_axioms(args):
    A = _algebra(args)
    failure = alg.check_mmv_axioms(A, strict_implication=args.strict_implication)
    if failure is None:
        _out(args, f"modal operator equations hold on all {A.size} elements", {"ok": True})
        return OK
    _out(args, str(failure), {"ok": False, "scheme": failure.scheme, "modality": failure.modality, "detail": failure.detail})
    return FOUND


def cmd_canext(args):
    fr = _frame(args)
    if isinstance(fr, LnFrame):
        A = alg.tight_complex_algebra(fr)
        ext = alg.canonical_frame(A)
    else:
        if not args.n:
            raise UsageError("--n is required for a plain frame")
        A = alg.complex_algebra(fr, args.n)
        ext = alg.canonical_lframe(A)
    m = alg.iota(fr, ext, A)
    iso = is_isomorphism(m)
    lines = [f"canonical extension with {ext.size} worlds", f"iota: {m.mapping}", f"iota is an isomorphism: {iso}"]
    _out(args, "\n".join(lines), {"extension": frame_to_json(ext), "iota": m.mapping, "isomorphism": bool(iso)})
    return OK if iso else FOUND


def cmd_homs(args):
    A = _algebra(args)
    homs = A.homomorphisms if not args.m else [h for h in A.homomorphisms if h.lands_in(args.m)]
    rows = [[int(x) for x in h.values] for h in homs]
    lines = [f"{len(rows)} homomorphisms into the {A.n}-grain chain (value at each carrier element, numerators)"]
    lines.extend(f"  h{i}: {r}" for i, r in enumerate(rows))
    _out(args, "\n".join(lines), {"n": A.n, "homomorphisms": rows})
    return OK


def _table(t, n):
    return [str(TruthValue(int(v), n)) for v in t.table(n)]


def cmd_tau(args):
    if not args.n or args.i is None:
        raise UsageError("--n and --i are required")
    t = tau_term(args.n, args.i)
    tab = _table(t, args.n)
    ok = tuple(int(v) for v in t.table(args.n)) == step_table(args.n, args.i) and is_ds_composition(t)
    points = [str(a) for a in chain(args.n)]
    lines = [str(t)] + [f"  {a} -> {v}" for a, v in zip(points, tab)]
    _out(args, "\n".join(lines), {"term": str(t), "table": dict(zip(points, tab)), "ok": ok})
    return OK if ok else FOUND


def cmd_imterm(args):
    if not args.n or not args.m:
        raise UsageError("--n and --m are required")
    if args.n % args.m:
        raise UsageError(f"--m {args.m} does not divide --n {args.n}")
    t = membership_term(args.n, args.m)
    tab = _table(t, args.n)
    points = list(chain(args.n))
    ok = all(int(v) == (args.n if a.lies_in(args.m) else 0) for a, v in zip(points, t.table(args.n)))
    lines = [str(t)] + [f"  {a} -> {v}" for a, v in zip(points, tab)]
    _out(args, "\n".join(lines), {"term": str(t), "table": dict(zip(map(str, points), tab)), "ok": ok})
    return OK if ok else FOUND


def parse_lattice(text):
    kind, _, size = (text or "").partition(":")
    try:
        k = int(size)
    except ValueError:
        raise UsageError(f"lattice must be chain:K or boolean:K, got {text!r}") from None
    if kind == "chain":
        return flt.FiniteDistributiveLattice.chain(k)
    if kind == "boolean":
        return flt.FiniteDistributiveLattice.boolean(k)
    raise UsageError(f"lattice must be chain:K or boolean:K, got {text!r}")


def parse_tuples(text):
    out = []
    for part in (text or "").split(";"):
        part = part.strip()
        if part:
            try:
                out.append(tuple(int(x) for x in part.split(",")))
            except ValueError:
                raise UsageError(f"bad tuple {part!r}") from None
    return out


def cmd_filtroid(args):
    L = parse_lattice(args.lattice)
    k = args.k or 2
    if args.action == "theorem":
        if args.seeds:
            failure, seen = flt.check_prime_intersection_theorem(L, k, seeds=args.seeds, rng=np.random.default_rng(args.seed))
        else:
            failure, seen = flt.check_prime_intersection_theorem(L, k)
        if failure is None:
            _out(args, f"every one of {seen} proper filtroids is the intersection of the prime filtroids above it", {"ok": True, "examined": seen})
            return OK
        _out(args, f"counterexample: {sorted(failure.filtroid.members)}", {"ok": False, "filtroid": sorted(failure.filtroid.members)})
        return FOUND
    members = parse_tuples(args.members)
    if any(len(x) != k or not all(0 <= a < L.size for a in x) for x in members):
        raise UsageError(f"tuples must have {k} entries in 0..{L.size - 1}")
    if args.action == "close":
        F = flt.close(L, k, members)
        rows = sorted(F.members)
        _out(args, "; ".join(",".join(map(str, x)) for x in rows), {"members": rows, "prime": flt.is_prime(F) is not None})
        return OK
    F = flt.Filtroid(L, k, frozenset(members))
    ok = flt.is_filtroid(F)
    prime = flt.is_prime(F) if ok else None
    _out(args, f"filtroid: {ok}; prime: {prime is not None}", {"filtroid": ok, "prime": prime is not None})
    return OK if ok else FOUND


def _universe(args, enriched):
    sig = parse_signature(args.signature)
    if enriched:
        if not args.n:
            raise UsageError("--n is required")
        return list(enumerate_frames(sig, args.max_worlds, n=args.n, unique=args.unique))
    return list(enumerate_frames(sig, args.max_worlds, unique=args.unique))


def _valid_flags(task):
    frames, n, phis, budget, enriched = task
    return [bool(valid(f, phis, budget) if enriched else valid_n(f, n, phis, budget)) for f in frames]


def _parallel_filter(frames, n, phis, budget, enriched, jobs):
    if jobs <= 1 or len(frames) < 2:
        flags = _valid_flags((frames, n, phis, budget, enriched))
    else:
        size = -(-len(frames) // jobs)
        parts = [frames[i : i + size] for i in range(0, len(frames), size)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            flags = [x for part in ex.map(_valid_flags, [(p, n, phis, budget, enriched) for p in parts]) for x in part]
    return [f for f, ok in zip(frames, flags) if ok]


def cmd_modset(args):
    U = _universe(args, args.enriched)
    sig = parse_signature(args.signature)
    phis = [parse(t, sig) for t in args.formula or []]
    if not args.enriched and not args.n:
        raise UsageError("--n is required")
    members = _parallel_filter(U, args.n, phis, args.budget, args.enriched, args.jobs) if phis else U
    lines = [f"{len(members)} of {len(U)} frames"] + [f"  {f!r}" for f in members]
    _out(args, "\n".join(lines), {"total": len(U), "members": [frame_to_json(f) for f in members]})
    return OK


def cmd_closure(args):
    if not args.class_:
        raise UsageError("--class is required")
    C = harness.class_predicate(args.class_, args.k or 1)
    enriched = C.kind == "ln" or bool(args.enriched)
    if enriched and not args.n:
        raise UsageError("--n is required for a class of enriched frames")
    U = _universe(args, enriched)
    ops = args.ops.split(",") if args.ops else list(harness.CONSTRUCTIONS)
    unknown = [o for o in ops if o not in harness.CONSTRUCTIONS]
    if unknown:
        raise UsageError(f"unknown construction {unknown[0]!r}; choose from {', '.join(harness.CONSTRUCTIONS)}")
    w = harness.closure_check(C, U, ops, n=args.n or 1)
    note = "(a finite universe can only refute closure; no witness means consistent up to this bound)"
    if w is None:
        _out(args, f"no closure violation for {C.name} among {len(U)} frames under {', '.join(ops)}\n{note}", {"ok": True, "frames": len(U)})
        return OK
    _out(args, f"{w}\n{note}", {"ok": False, **w.as_dict()})
    return FOUND


def cmd_enumerate(args):
    U = _universe(args, bool(args.n) and args.enriched)
    if args.sample:
        rng = np.random.default_rng(args.seed)
        pick = sorted(rng.choice(len(U), size=min(args.sample, len(U)), replace=False))
        U = [U[i] for i in pick]
    if args.count:
        _out(args, str(len(U)), {"count": len(U)})
    else:
        _out(args, "\n".join(repr(f) for f in U), [frame_to_json(f) for f in U])
    return OK


def cmd_godequiv(args):
    if not args.class_:
        raise UsageError("--class is required")
    if not args.n:
        raise UsageError("--n is required")
    C = harness.class_predicate(args.class_, args.k or 1)
    if C.kind != "l":
        raise UsageError("godequiv compares classes of plain frames")
    U = _universe(args, False)
    rep = harness.godequiv_check(C, U, args.n, max_depth=args.depth, nvars=args.vars)
    _out(args, str(rep), rep.as_dict())
    return OK if rep.agree else FOUND


COMMANDS = {
    "parse": (cmd_parse, "parse formulas and show their structure"),
    "eval": (cmd_eval, "value table of formulas in a model"),
    "valid": (cmd_valid, "validity on an enriched frame"),
    "validn": (cmd_validn, "validity at a grain on a plain frame"),
    "trn": (cmd_trn, "translate p to p^m"),
    "complex": (cmd_complex, "complex algebra of a frame"),
    "tight": (cmd_tight, "tight complex algebra of an enriched frame"),
    "axioms": (cmd_axioms, "check the modal operator equations on an algebra"),
    "canext": (cmd_canext, "canonical extension and the map iota"),
    "homs": (cmd_homs, "homomorphisms of an algebra into its chain"),
    "tau": (cmd_tau, "step term at threshold i/n"),
    "imterm": (cmd_imterm, "membership term for a subchain"),
    "filtroid": (cmd_filtroid, "filtroid checks and the prime intersection theorem"),
    "modset": (cmd_modset, "frames of a finite universe validating formulas"),
    "closure": (cmd_closure, "closure of a frame class under constructions"),
    "enumerate": (cmd_enumerate, "list the frames of a finite universe"),
    "godequiv": (cmd_godequiv, "compare bounded definability at grains 1 and n"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max valuations per check")

    p = argparse.ArgumentParser(prog="lukmodal", description="Finite-valued Lukasiewicz modal logic workbench")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text, parents=[common])
        if name in ("parse", "eval", "valid", "validn", "trn", "modset"):
            s.add_argument("--formula", action="append", help="formula text (repeatable)")
        if name in ("parse", "trn", "modset", "closure", "enumerate", "godequiv"):
            s.add_argument("--signature", help='modalities as "box:1,nabla:2" (default box:1)')
        if name in ("valid", "validn", "complex", "tight", "canext"):
            s.add_argument("--frame", help="frame JSON file")
        if name == "eval":
            s.add_argument("--model", help="model JSON file")
        if name in ("axioms", "homs"):
            s.add_argument("--algebra", help="algebra JSON file")
        if name in ("valid", "validn", "complex", "tight", "canext", "tau", "imterm", "modset", "closure", "enumerate", "godequiv"):
            s.add_argument("--n", type=int, help="grain")
        if name in ("parse", "trn", "homs", "imterm"):
            s.add_argument("--m", type=int, help="exponent / subchain grain")
        if name == "tau":
            s.add_argument("--i", type=int, help="threshold numerator")
        if name in ("complex", "tight"):
            s.add_argument("--out", help="write the dump here instead of stdout")
        if name == "axioms":
            s.add_argument("--strict-implication", action="store_true", help="require the implication scheme as an equality")
        if name == "filtroid":
            s.add_argument("--action", choices=["verify", "close", "theorem"], default="verify")
            s.add_argument("--lattice", default="chain:2", help="chain:K or boolean:K")
            s.add_argument("--k", type=int, default=2, help="power of the lattice")
            s.add_argument("--members", help='tuples as "0,1;1,1" (element indices)')
            s.add_argument("--seeds", type=int, help="random closure seeds instead of full enumeration")
        if name in ("modset", "closure", "enumerate", "godequiv"):
            s.add_argument("--max-worlds", type=int, default=2)
            s.add_argument("--unique", action="store_true", help="drop isomorphic copies")
        if name in ("modset", "closure", "enumerate"):
            s.add_argument("--enriched", action="store_true", help="universe of enriched frames at grain --n")
        if name in ("closure", "godequiv"):
            s.add_argument("--class", dest="class_", help="class name: all, empty-relation, reflexive, ru-in-r1, C1, C2, not:X, X&Y, lift:X")
            s.add_argument("--k", type=int, default=1, help="divisor used by C1 and C2")
        if name == "closure":
            s.add_argument("--ops", help="comma-separated constructions")
        if name == "godequiv":
            s.add_argument("--depth", type=int, default=2, help="formula depth bound")
            s.add_argument("--vars", type=int, default=1)
        if name == "enumerate":
            s.add_argument("--count", action="store_true")
            s.add_argument("--sample", type=int, help="random sample of this size")
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    func = COMMANDS[args.command][0]
    try:
        return func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except (LukModalError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(run())
