"""Command-line front end.

Every verb reads carrier documents, calls the corresponding library
operation and prints a deterministic report.  Exit status: 0 when every
check passes, 1 when a mathematical check or hypothesis fails (the
witness is printed), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys

from . import quotients as qt
from . import ratfunc as rf
from . import supertropical as st
from . import valuations as val
from .bipotent import as_bipotent, classify
from .carriers import FiniteSemiring, MaxPlus, RatFuncField, verify_semiring
from .errors import CheckFailed, ParseError, PreconditionError, StructureError
from .formats import (parse_carrier, parse_element_list, parse_partition,
                      serialize_carrier, serialize_partition)

OK, BAD = "✓", "✗"

RATFUNC_SUBSETS = {
    "closed-unit": rf.CLOSED_UNIT,
    "open-unit": rf.OPEN_UNIT,
    "finite": rf.FINITE,
    "infinitesimal": rf.INFINITESIMAL,
    "zero": rf.ZeroSet(),
}


class UsageError(Exception):
    pass


class CheckFailedExit(Exception):
    """Raised by a verb after printing its report when a check failed."""


def _mark(flag):
    return OK if flag else BAD


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_carrier(text)


def _finite(c, verb):
    if not c.finite:
        raise UsageError(f"{verb} needs a finite carrier")
    return c


def _subset(args, c, required=True, allow_invalid=False):
    """The subset named by ``--prime`` / ``--cmc`` as a ``SubsetWitness``."""
    if args.prime is not None and args.cmc is not None:
        raise UsageError("give either --prime or --cmc, not both")
    text, side = (args.prime, "prime") if args.prime is not None else (args.cmc, "cmc")
    if text is None:
        if required:
            raise UsageError("a subset is required (--prime or --cmc)")
        return None
    if isinstance(c, RatFuncField):
        if text not in RATFUNC_SUBSETS:
            raise UsageError(f"unknown closed-form subset {text!r}; choose from "
                             + ", ".join(sorted(RATFUNC_SUBSETS)))
        exp = _exponent(args, c)
        w = val.classify_subset(c, RATFUNC_SUBSETS[text], side, exp, args.budget, args.seed)
    elif isinstance(c, FiniteSemiring):
        w = val.classify_subset(c, parse_element_list(text, c), side)
    else:
        raise UsageError(f"subsets are not supported on {c.name}")
    if not w.valid and not allow_invalid:
        print(f"subset {w.fmt()}")
        raise CheckFailedExit()
    return w


def _exponent(args, c):
    text = getattr(args, "exponent", None)
    if text is None:
        return None
    if isinstance(c, RatFuncField):
        try:
            return rf.parse_ratfunc(text)
        except ValueError as exc:
            raise UsageError(f"bad exponent {text!r}: {exc}") from None
    if text not in c.names:
        raise UsageError(f"unknown element {text!r}")
    return c.index(text)


# -- verbs -------------------------------------------------------------------------------

def cmd_verify(args):
    c = _load(args.file)
    report = verify_semiring(c, args.budget, args.seed)
    if not report.ok:
        print("\n".join(report.lines(c.fmt)))
        print(f"semiring {BAD}")
        raise CheckFailedExit()
    parts = [f"semiring {OK}"]
    if not report.exhaustive:
        parts[0] += " (sampled)"
    try:
        m = as_bipotent(c, args.budget, args.seed)
    except CheckFailed as exc:
        wit = " ".join(exc.witness or ())
        parts.append(f"bipotent {BAD} (witness {wit})")
        m = None
    if m is not None:
        parts.append(f"bipotent {OK}")
        if isinstance(c, FiniteSemiring) or isinstance(c, MaxPlus):
            cls = classify(m, args.budget, args.seed)
            for p in ("UIC", "strictUIC", "SepV", "SepV0"):
                if cls.flags[p]:
                    parts.append(f"{p} {OK}")
                else:
                    a, b = cls.witnesses[p]
                    parts.append(f"{p} {BAD} (witness {m.fmt(a)}<{m.fmt(b)})")
                    if p == "UIC":
                        break
            if cls.cases:
                parts.append(f"case {','.join(cls.cases)}")
    elif isinstance(c, FiniteSemiring):
        try:
            st.verify_supertropical(c)
            parts.append(f"supertropical {OK}")
        except CheckFailed as exc:
            parts.append(f"supertropical {BAD} ({exc})")
            print(" ".join(parts))
            if c.order is not None:
                raise CheckFailedExit() from None
            return 0
    if isinstance(c, FiniteSemiring) and c.order is not None:
        try:
            st.verify_total_order(c)
            parts.append(f"ordered {OK}")
        except CheckFailed as exc:
            parts.append(f"ordered {BAD} ({exc})")
            print(" ".join(parts))
            raise CheckFailedExit() from None
    print(" ".join(parts))
    return 0


def cmd_enumerate(args):
    if args.what == "semirings":
        from .corpus import random_semirings
        for s in random_semirings(args.count, args.seed, args.size):
            print(f"# {s.name}")
            print(serialize_carrier(s), end="")
        return 0
    if args.what == "bipotent":
        from .corpus import bipotent_semirings
        for s in bipotent_semirings(args.size):
            print(serialize_carrier(s), end="")
        return 0
    c = _finite(_load(args.file), "enumerate")
    if args.what == "primes":
        found = val.enumerate_primes(c, args.force)
    else:
        found = val.enumerate_cmc(c, args.force, proper_only=not args.improper)
    for w in found:
        print(w.fmt())
    print(f"{len(found)} found")
    return 0


def _print_map(v):
    s, t = v.source, v.target
    if s.finite:
        print("\n".join(v.dump()))
        print(f"target {t.name}: {t.fmt_chain()}")
        print(serialize_carrier(t.base), end="")
    else:
        print(f"target {t.name}")
        for x in s.sample(8, 0):
            print(f"{s.fmt(x)}\t{t.fmt(v(x))}")


def cmd_valuate(args):
    c = _load(args.file)
    L = _subset(args, c)
    v = val.quotient_valuation(c, L, args.budget, args.seed)
    print(f"{v.name} on {c.name} ({L.kind})")
    _print_map(v)
    A, p = val.valuation_pair(v, args.budget, args.seed)
    fmt = c.fmt_set if c.finite else str
    print(f"valuation pair: A = {fmt(A)}, p = {fmt(p)}")
    return 0


def cmd_coarsen(args):
    c = _finite(_load(args.file), "coarsen")
    L = _subset(args, c)
    v = val.quotient_valuation(c, L)
    down = val.v0_coarsening(v)
    ups = []
    if v.target.is_proper():
        ups.append(val.v_coarsening(v))
    if args.dot:
        nodes = [v, down] + ups
        print("digraph coarsening {")
        for i, w in enumerate(nodes):
            print(f'  n{i} [label="{w.name}"];')
        for i in range(1, len(nodes)):
            print(f"  n0 -> n{i};")
        print("}")
        return 0
    for w in [down] + ups:
        print(f"{w.name}")
        _print_map(w)
    if not ups:
        print(f"no V-coarsening: target {v.target.name} is not proper")
    return 0


def cmd_envelope(args):
    c = _load(args.file)
    L = _subset(args, c)
    u = _exponent(args, c)
    if u is None:
        raise UsageError("--exponent is required")
    rep = val.envelope_core(c, L, u, args.budget, args.seed)
    print(f"L = {L.fmt()}")
    print(f"B = {rep.B.fmt()}")
    print(f"Q = {rep.Q.fmt()}")
    if not rep.hypothesis_met:
        print(rep.note)
        return 0
    for k in sorted(rep.checks):
        print(f"{k}: {_mark(rep.checks[k])}")
    return 0 if rep.ok else 1


def _ostr_map(T, G, rule):
    if rule == "const":
        return lambda a: G.one if a != T.zero else G.zero
    if rule == "id":
        return lambda a: a
    if not (T.finite and G.finite):
        raise UsageError("explicit --map tables need finite carriers")
    table = {}
    for item in rule.split(","):
        src, _, dst = item.partition(":")
        if src not in T.base.names or dst not in G.base.names:
            raise UsageError(f"bad map entry {item!r}")
        table[T.base.index(src)] = G.base.index(dst)
    return lambda a: table.get(a, G.zero)


def cmd_ostr(args):
    T, G = as_bipotent(_load(args.tangibles)), as_bipotent(_load(args.ghosts))
    rule = args.map or ("id" if T == G else "const")
    u = st.build_ostr(T, G, _ostr_map(T, G, rule), budget=args.budget, seed=args.seed)
    if u.finite:
        print(serialize_carrier(u.base), end="")
    print(f"chain: {u.fmt_chain()}" if u.finite else f"{u.name}: total order verified on samples")
    total, single = st.minimal_order_total(u, args.budget, args.seed)
    print(f"minimal order total: {_mark(total)}; one tangible per ghost fiber: {_mark(single)}")
    return 0


def _supervaluation(args, c, L):
    if isinstance(c, RatFuncField) and args.exponent is not None:
        return st.build_phi_L(c, L, _exponent(args, c), args.side, args.budget, args.seed)
    return st.phi_of_subset(c, L, args.budget, args.seed)


def cmd_supervaluate(args):
    c = _load(args.file)
    L = _subset(args, c)
    phi = _supervaluation(args, c, L)
    print(f"{phi.name}: {c.name} -> {phi.target.name}")
    if c.finite:
        print("\n".join(phi.dump()))
        print(f"target chain: {phi.target.fmt_chain()}")
    rep = st.classify_supervaluation(phi, args.budget, args.seed)
    print("\n".join(rep.lines(phi.target.fmt)))
    return 0


def _all_valuations(c, force):
    out = []
    for L in val.enumerate_primes(c, force) + val.enumerate_cmc(c, force):
        v = val.quotient_valuation(c, L)
        out.append((("V0 " if L.side == "prime" else "V ") + c.fmt_set(L.members), v))
    return out


def cmd_dominance(args):
    c = _load(args.file)
    if args.all:
        _finite(c, "dominance --all")
        vals = _all_valuations(c, args.force)
        edges = [(i, j) for i, (_, v) in enumerate(vals) for j, (_, w) in enumerate(vals)
                 if i != j and val.dominates(v, w).holds]
        if args.dot:
            print("digraph dominance {")
            for i, (label, _) in enumerate(vals):
                print(f'  n{i} [label="{label}"];')
            for i, j in edges:
                print(f"  n{i} -> n{j};")
            print("}")
        else:
            for i, j in edges:
                print(f"{vals[i][0]} >= {vals[j][0]}")
        return 0
    if len(args.subsets) != 2:
        raise UsageError("give two subsets (--prime/--cmc, in order) or --all")
    ws = [_subset(argparse.Namespace(**{**vars(args), "prime": text if side == "prime" else None,
                                        "cmc": text if side == "cmc" else None}), c)
          for side, text in args.subsets]
    if args.super:
        phi = _supervaluation(args, c, ws[0])
        psi = _supervaluation(args, c, ws[1])
        verdict = st.dominance(phi, psi, "TOTAL" if args.total else "PLAIN",
                               args.budget, args.seed)
        print("\n".join(verdict.lines()))
        return 0
    v = val.quotient_valuation(c, ws[0], args.budget, args.seed)
    w = val.quotient_valuation(c, ws[1], args.budget, args.seed)
    res = val.dominates(v, w, args.budget, args.seed)
    line = f"{v.name} >= {w.name}: {'yes' if res.holds else 'no'}"
    if res.witness:
        line += f" (witness {' '.join(res.witness)})"
    print(line)
    if res.gamma is not None and res.gamma.table is not None:
        g = res.gamma
        for y in v.target.elements():
            print(f"  γ: {v.target.fmt(y)} -> {w.target.fmt(g(y))}")
    return 0


def cmd_quotient(args):
    c = _finite(_load(args.file), "quotient")
    u = st.verify_total_order(c, budget=args.budget, seed=args.seed)
    if args.partition:
        try:
            with open(args.partition, encoding="utf-8") as fh:
                blocks = parse_partition(fh.read(), c)
        except OSError as exc:
            raise UsageError(f"cannot read {args.partition}: {exc.strerror}") from None
        rel = qt.verify_octe(u, blocks)
    elif args.ideal is not None:
        rel = qt.ideal_relation(u, parse_element_list(args.ideal, c))
    elif args.fiber is not None:
        phi = None
        if args.phi:
            phi = [parse_element_list(b, c) for b in args.phi.split("|")]
        res = qt.fiber_relation(u, parse_element_list(args.fiber, c), phi)
        if not res.ok:
            print(f"not OCTE: condition {res.condition} (witness {' '.join(res.witness)})")
            raise CheckFailedExit()
        rel = res.relation
    else:
        raise UsageError("give a partition file, --ideal or --fiber")
    print(serialize_partition(rel.classes, c), end="")
    if rel.degenerate:
        print("degenerate: at most one nonzero class")
    if len(rel.classes) < 2:
        return 0
    q = qt.octe_quotient(rel, args.budget, args.seed)
    print(serialize_carrier(q.quotient.base), end="")
    print(f"chain: {q.quotient.fmt_chain()}")
    print("\n".join(q.transmission.lines()))
    return 0


def cmd_classify(args):
    c = _load(args.file)
    L = _subset(args, c, required=False, allow_invalid=True)
    if L is not None:
        print(L.fmt())
        return 0
    cls = classify(as_bipotent(c, args.budget, args.seed), args.budget, args.seed)
    print("\n".join(cls.lines(c.fmt)))
    return 0


# -- argument parsing ----------------------------------------------------------------------

class _SubsetAction(argparse.Action):
    """Collect ``--prime`` / ``--cmc`` in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        side = "prime" if option_string == "--prime" else "cmc"
        setattr(namespace, self.dest, values)
        items = list(getattr(namespace, "subsets", None) or [])
        items.append((side, values))
        namespace.subsets = items


def build_parser():
    p = argparse.ArgumentParser(prog="supertrop", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    common.add_argument("--budget", type=int, default=1000,
                        help="sampled pairs/triples on infinite carriers (default 1000)")
    common.add_argument("--force", action="store_true",
                        help="allow enumeration on carriers with more than 16 elements")
    subsets = argparse.ArgumentParser(add_help=False)
    subsets.add_argument("--prime", action=_SubsetAction, default=None,
                         help="prime: element list (finite) or closed-form name (ratfunc)")
    subsets.add_argument("--cmc", action=_SubsetAction, default=None,
                         help="CMC-subsemiring: element list or closed-form name")
    subsets.add_argument("--exponent", help="exponent unit (element name or rational function)")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("verify", parents=[common], help="semiring axioms and classification")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("enumerate", parents=[common], help="primes, CMC-subsemirings, corpora")
    s.add_argument("what", choices=["primes", "cmc", "semirings", "bipotent"])
    s.add_argument("file", nargs="?")
    s.add_argument("--improper", action="store_true", help="include the whole carrier")
    s.add_argument("--count", type=int, default=None, help="corpus size (default: all)")
    s.add_argument("--size", type=int, default=4, help="maximal corpus carrier size")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("valuate", parents=[common, subsets], help="colon-set valuation")
    s.add_argument("file")
    s.set_defaults(func=cmd_valuate)

    s = sub.add_parser("coarsen", parents=[common, subsets], help="V0 and V coarsenings")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true")
    s.set_defaults(func=cmd_coarsen)

    s = sub.add_parser("envelope", parents=[common, subsets], help="B_u(L) and Q_u(L)")
    s.add_argument("file")
    s.set_defaults(func=cmd_envelope)

    s = sub.add_parser("ostr", parents=[common], help="ordered supertropical semiring of (T, G, v)")
    s.add_argument("tangibles")
    s.add_argument("ghosts")
    s.add_argument("--map", help="'id', 'const' or 'x:y,...' (default: id if T = G, else const)")
    s.set_defaults(func=cmd_ostr)

    for name, fn, helptext in (("supervaluate", cmd_supervaluate, "tangible supervaluation"),
                               ("dominance", cmd_dominance, "dominance between valuations")):
        s = sub.add_parser(name, parents=[common, subsets], help=helptext)
        s.add_argument("file")
        s.add_argument("--side", choices=["Q", "B"], default="Q",
                       help="core (Q) or envelope (B) cover for artinian supervaluations")
        s.set_defaults(func=fn)
    s.add_argument("--all", action="store_true", help="all V0/V valuations of the carrier")
    s.add_argument("--dot", action="store_true")
    s.add_argument("--super", action="store_true", help="compare the supervaluations")
    s.add_argument("--total", action="store_true", help="total instead of plain dominance")

    s = sub.add_parser("quotient", parents=[common], help="OCTE quotient")
    s.add_argument("file")
    s.add_argument("partition", nargs="?")
    s.add_argument("--ideal", help="E(a) for the ideal a")
    s.add_argument("--fiber", help="E(U, A, Φ) for the ideal A")
    s.add_argument("--phi", help="Φ as blocks 'x,y|z|...' (default diagonal)")
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("classify", parents=[common, subsets], help="separation classification")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "subsets"):
        args.subsets = []
    if args.verb == "enumerate" and args.what in ("primes", "cmc") and args.file is None:
        parser.error("enumerate primes/cmc needs a carrier file")
    try:
        return args.func(args)
    except CheckFailedExit:
        return 1
    except (CheckFailed, PreconditionError) as exc:
        print(f"check failed: {exc}")
        return 1
    except (UsageError, ParseError, StructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
