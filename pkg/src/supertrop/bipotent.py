"""Bipotent semirings: the induced order, nilradical, the minimal
cancellative quotient, separation classes and the canonical coarsening maps.

A bipotent semiring is totally ordered by ``x <= y  iff  x + y = y``.
Finite carriers get an explicit rank list; the graded max-plus family and
the absolute-value semiring carry their order natively.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .carriers import AbsValueSemiring, FiniteSemiring, MaxPlus, RatFuncField, verify_semiring
from .errors import CheckFailed, NotBipotent, PreconditionError, TheoremViolation
from .morphisms import canonical_classes, congruence_quotient, homomorphisms, random_maps


class BipotentSemiring:
    """Bipotent view of a carrier.  ``rank`` is given for finite carriers."""

    def __init__(self, base, rank=None):
        self.base = base
        self.rank = rank

    def __repr__(self):
        return f"BipotentSemiring({self.base.name})"

    def __eq__(self, other):
        return isinstance(other, BipotentSemiring) and other.base == self.base

    def __hash__(self):
        return hash(("bip", self.base))

    @property
    def name(self):
        return self.base.name

    @property
    def finite(self):
        return self.base.finite

    @property
    def zero(self):
        return self.base.zero

    @property
    def one(self):
        return self.base.one

    def add(self, x, y):
        return self.base.add(x, y)

    def mul(self, x, y):
        return self.base.mul(x, y)

    def fmt(self, x):
        return self.base.fmt(x)

    def elements(self):
        return self.base.elements()

    def sample(self, n=200, seed=0):
        return self.base.sample(n, seed)

    def is_unit(self, x):
        return self.base.is_unit(x)

    def inverse(self, x):
        return self.base.inverse(x)

    def le(self, x, y):
        if self.rank is not None:
            return self.rank[x] <= self.rank[y]
        return self.base.le(x, y)

    def lt(self, x, y):
        return self.le(x, y) and not self.le(y, x)

    def max(self, x, y):
        return y if self.le(x, y) else x

    def chain(self):
        """Elements in ascending order (finite only)."""
        return sorted(self.elements(), key=lambda x: self.rank[x])

    def lower_one(self):
        """``A_M = {x <= 1}``."""
        return frozenset(x for x in self.elements() if self.le(x, self.one))

    def below_one(self):
        """``p_M = {x < 1}``."""
        return frozenset(x for x in self.elements() if self.lt(x, self.one))

    def is_proper(self):
        if not self.finite:
            return True
        return len(self.lower_one()) != len(self.base.names)

    def is_cancellative(self):
        if isinstance(self.base, (MaxPlus, AbsValueSemiring)):
            return True
        return cancellation_witness(self) is None

    def fmt_chain(self):
        return " < ".join(self.fmt(x) for x in self.chain())


def cancellation_witness(m):
    """``(x, y, z)`` with ``z != 0``, ``xz = yz`` and ``x != y``, or ``None``."""
    els = list(m.elements())
    for z in els:
        if z == m.zero:
            continue
        seen = {}
        for x in els:
            p = m.mul(x, z)
            if p in seen:
                return (seen[p], x, z)
            seen[p] = x
    return None


def as_bipotent(c, budget=1000, seed=0):
    """Bipotent view of ``c`` or ``NotBipotent`` with a witness ``(x, y)``."""
    if isinstance(c, BipotentSemiring):
        return c
    if c.finite:
        report = verify_semiring(c)
        if not report.ok:
            ax = next(a for a in report.failures)
            raise CheckFailed(f"not a semiring ({ax})",
                              tuple(c.fmt(x) for x in report.failures[ax]))
        pairs = [(x, y) for x in c.elements() for y in c.elements()]
    else:
        pool = c.sample(min(max(budget, 50), 400), seed)
        pairs = [(x, x) for x in pool] + c.pairs(budget, seed)
    for x, y in pairs:
        s = c.add(x, y)
        if s != x and s != y:
            raise NotBipotent("x + y is neither x nor y", (c.fmt(x), c.fmt(y)))
    if not c.finite:
        if isinstance(c, RatFuncField):  # unreachable: 1 + 1 = 2 is caught above
            raise NotBipotent("a field is not bipotent", ("1", "1"))
        return BipotentSemiring(c)
    n = len(c.names)
    below = [sum(1 for y in range(n) if c.add(x, y) == x) for x in range(n)]
    if sorted(below) != list(range(1, n + 1)):
        raise TheoremViolation("addition does not induce a total order")
    return BipotentSemiring(c, tuple(b - 1 for b in below))


def finite_bipotent(name, chain, mul, one):
    """Bipotent semiring from an ascending chain of names and a product rule.

    ``mul(x, y)`` takes and returns names; addition is the maximum.
    """
    chain = tuple(chain)
    pos = {x: i for i, x in enumerate(chain)}
    n = len(chain)
    add = tuple(tuple(max(i, j) for j in range(n)) for i in range(n))
    mt = tuple(tuple(pos[mul(chain[i], chain[j])] for j in range(n)) for i in range(n))
    return FiniteSemiring(name, chain, 0, pos[one], add, mt)


# -- nilradical --------------------------------------------------------------

def nilradical(m):
    """``{x : x^k = 0 for some k}``; asserts it is a lower set and a prime ideal."""
    m = as_bipotent(m)
    if not m.finite:
        return frozenset({m.zero})
    n = len(m.base.names)
    nil = set()
    for x in m.elements():
        p = x
        for _ in range(n + 1):
            if p == m.zero:
                nil.add(x)
                break
            p = m.mul(p, x)
    nil = frozenset(nil)
    for x in m.elements():
        for y in nil:
            if m.le(x, y) and x not in nil:
                raise TheoremViolation("nilradical is not a lower set", (m.fmt(x), m.fmt(y)))
            if m.mul(x, y) not in nil:
                raise TheoremViolation("nilradical is not an ideal", (m.fmt(x), m.fmt(y)))
        for y in m.elements():
            if m.mul(x, y) in nil and x not in nil and y not in nil:
                raise TheoremViolation("nilradical is not prime", (m.fmt(x), m.fmt(y)))
    for x in nil:
        for y in nil:
            if m.add(x, y) not in nil:
                raise TheoremViolation("nilradical not closed under +", (m.fmt(x), m.fmt(y)))
    if m.one in nil:
        raise TheoremViolation("1 is nilpotent")
    return nil


# -- minimal cancellative relation ---------------------------------------------

@dataclass(frozen=True)
class CancelQuotient:
    source: BipotentSemiring
    classes: tuple
    quotient: BipotentSemiring
    projection: tuple
    nil: frozenset = field(default=frozenset())

    def fmt_classes(self):
        c = self.source.base
        return " ".join("{" + " ".join(c.names[x] for x in sorted(cls)) + "}"
                        for cls in self.classes)


def cancel_relation_classes(m):
    """Partition realizing ``x ~ y`` iff both nilpotent, or ``sx = sy`` for
    some non-nilpotent ``s``."""
    nil = nilradical(m)
    els = list(m.elements())
    outside = [s for s in els if s not in nil]
    parent = {x: x for x in els}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for x in nil:
        union(x, m.zero)
    for i, x in enumerate(outside):
        for y in outside[i + 1:]:
            if any(m.mul(s, x) == m.mul(s, y) for s in outside):
                union(x, y)
    groups = {}
    for x in els:
        groups.setdefault(find(x), set()).add(x)
    classes = canonical_classes(groups.values())
    # the relation is transitive on its own; union-find must not have merged more
    for cls in classes:
        for x in cls:
            for y in cls:
                if x in nil and y in nil:
                    continue
                if (x in nil) != (y in nil) or not any(
                        m.mul(s, x) == m.mul(s, y) for s in outside):
                    raise TheoremViolation("cancellation relation is not transitive",
                                           (m.fmt(x), m.fmt(y)))
    return classes, nil


def cancellative_quotient(m):
    m = as_bipotent(m)
    if not m.finite:
        if isinstance(m.base, (MaxPlus, AbsValueSemiring)):
            # already cancellative: the relation is the diagonal
            return CancelQuotient(m, (), m, (), frozenset({m.zero}))
        raise PreconditionError("cancellative quotient needs a finite carrier")
    classes, nil = cancel_relation_classes(m)
    try:
        q, proj = congruence_quotient(m.base, classes, f"{m.name}/C")
    except CheckFailed as exc:
        raise TheoremViolation(f"cancellation relation is not homomorphic: {exc}") from None
    qb = as_bipotent(q)
    wit = cancellation_witness(qb)
    if wit is not None:
        raise TheoremViolation("quotient is not cancellative", tuple(q.names[x] for x in wit))
    kernel = frozenset(x for x in m.elements() if proj[x] == q.zero)
    if kernel != nil:
        raise TheoremViolation("kernel of the projection differs from the nilradical")
    return CancelQuotient(m, classes, qb, proj, nil)


def cancel_relation_simple(m):
    """On UIC semirings: ``x ~ y`` iff ``xz = yz`` for some ``z != 0``."""
    els = list(m.elements())
    return {(x, y) for x in els for y in els
            if any(m.mul(x, z) == m.mul(y, z) for z in els if z != m.zero)}


@dataclass
class UniversalReport:
    target: str
    exhaustive: bool
    examined: int
    qualifying: int
    factor_unique: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def check_universal_property(q, n, cap=5, budget=2000, seed=0):
    """Every homomorphism ``source -> n`` with kernel ``Nil`` factors uniquely
    through the projection.  ``n`` must be cancellative."""
    n = as_bipotent(n)
    if not n.finite or not q.source.finite:
        raise PreconditionError("universal property check needs finite semirings")
    if not n.is_cancellative():
        raise PreconditionError(f"{n.name} is not cancellative")
    src, quo = q.source.base, q.quotient.base
    exhaustive = len(n.base.names) <= cap
    if exhaustive:
        candidates = homomorphisms(src, n.base)
    else:
        from .morphisms import is_homomorphism
        candidates = [f for f in random_maps(src, n.base, budget, seed)
                      if is_homomorphism(src, n.base, f)]
    from_quotient = homomorphisms(quo, n.base)
    qualifying = unique = 0
    failures = []
    for g in candidates:
        kernel = frozenset(x for x in src.elements() if g[x] == n.zero)
        if kernel != q.nil:
            continue
        qualifying += 1
        lifts = [h for h in from_quotient
                 if all(h[q.projection[x]] == g[x] for x in src.elements())]
        if len(lifts) == 1:
            unique += 1
        else:
            failures.append((g, len(lifts)))
    return UniversalReport(n.name, exhaustive, len(candidates), qualifying, unique, failures)


# -- separation classes ------------------------------------------------------------

PROPERTIES = ("UIC", "strictUIC", "SepV", "SepV0")


def _separates(m, prop, a, b, g):
    ag, bg = m.mul(a, g), m.mul(b, g)
    one = m.one
    if prop == "UIC":
        return m.le(ag, one) and m.le(one, bg)
    if prop == "strictUIC":
        return m.lt(ag, one) and m.lt(one, bg)
    if prop == "SepV":
        return m.le(ag, one) and m.lt(one, bg)
    return m.lt(ag, one) and m.le(one, bg)


@dataclass
class Classification:
    name: str
    flags: dict
    witnesses: dict
    proper: bool
    cancellative: bool
    cases: tuple
    method: str

    @property
    def theorem_case(self):
        return self.cases[0] if self.cases else "n/a"

    def lines(self, fmt=str):
        out = [f"classification of {self.name} ({self.method})"]
        for p in PROPERTIES:
            if self.flags[p]:
                out.append(f"  {p}: yes")
            else:
                a, b = self.witnesses[p]
                out.append(f"  {p}: no (pair {fmt(a)} < {fmt(b)})")
        out.append(f"  proper: {'yes' if self.proper else 'no'}")
        out.append(f"  cancellative: {'yes' if self.cancellative else 'no'}")
        extra = f" (all: {', '.join(self.cases)})" if len(self.cases) > 1 else ""
        out.append(f"  separation case: {self.theorem_case}{extra}")
        return out


def separation_flags(m):
    """Exhaustive flags with a failing pair per property (finite ``m``)."""
    els = m.chain()
    flags, wit = {}, {}
    for p in PROPERTIES:
        flags[p] = True
        for i, a in enumerate(els):
            for b in els[i + 1:]:
                if not any(_separates(m, p, a, b, g) for g in els):
                    flags[p] = False
                    wit[p] = (a, b)
                    break
            if not flags[p]:
                break
    return flags, wit


def separation_cases(m, flags, cancellative, chain=None):
    """Applicable clauses of the separation classifier for cancellative UIC
    semirings with nonzero elements below 1."""
    if not (cancellative and flags["UIC"]):
        return ()
    if isinstance(m.base, MaxPlus):
        kind = m.base.kind
        if kind in ("N", "NP"):
            return ()
        if kind == "Z":
            return ("i", "ii")
        return ("iv",)
    below = [x for x in chain if m.lt(x, m.one)]
    above = [x for x in chain if m.lt(m.one, x)]
    if below == [m.zero]:
        return ()
    cases = ["i"]  # a finite nonempty chain has a biggest element
    if above:
        cases.append("ii")
    else:
        cases.append("iii")
    return tuple(cases)


def _graded_closed_form(m):
    """Flags and failing pairs for the graded family (proved by hand)."""
    kind = m.base.kind
    if kind == "Z":
        flags = {"UIC": True, "strictUIC": False, "SepV": True, "SepV0": True}
        wit = {"strictUIC": (0, 1)}
    elif kind == "N":
        flags = {"UIC": False, "strictUIC": False, "SepV": False, "SepV0": False}
        wit = {"UIC": (1, 2), "strictUIC": (0, 1), "SepV": (1, 2), "SepV0": (0, 1)}
    elif kind == "NP":
        # nothing lies above 1, so no gamma can lift b past 1 once b < 1
        flags = {p: False for p in PROPERTIES}
        wit = {"UIC": (-2, -1), "strictUIC": (-2, -1), "SepV": (-1, 0), "SepV0": (-2, -1)}
    else:
        flags = {p: True for p in PROPERTIES}
        wit = {}
    return flags, wit


def _graded_gamma(m, prop, a, b):
    """A separating grade for ``a < b`` in the graded family, from the proofs."""
    if a is None:
        return -b + 1 if prop in ("strictUIC", "SepV") else -b
    if prop == "UIC":
        return -a
    if prop == "SepV":
        return -a
    if prop == "SepV0":
        return -a - 1 if m.base.kind != "Q" else -(a + b) / 2
    return -(a + b) / 2


def graded_sanity(m, flags, wit, budget=1000, seed=0, window=40):
    """Sampled check of the closed form: positive flags via the explicit
    gamma, negative flags via a grade-window search at the witness pair."""
    import random
    rng = random.Random(seed)
    pool = m.sample(200, seed)
    for _ in range(budget):
        a, b = rng.choice(pool), rng.choice(pool)
        if not m.lt(a, b):
            a, b = b, a
        if not m.lt(a, b):
            continue
        for p in PROPERTIES:
            if flags[p]:
                g = _graded_gamma(m, p, a, b)
                if m.base.kind != "Q":
                    g = int(g)
                if not (m.base.valid(g) and _separates(m, p, a, b, g)):
                    raise TheoremViolation(f"closed form for {p} fails",
                                           (m.fmt(a), m.fmt(b)))
    step = Fraction(1, 8) if m.base.kind == "Q" else 1
    grades = [None] + [k * step for k in range(-window * 8, window * 8 + 1)]
    for p in PROPERTIES:
        if not flags[p]:
            a, b = wit[p]
            if any(m.base.valid(g) and _separates(m, p, a, b, g) for g in grades):
                raise TheoremViolation(f"window search separates the {p} witness",
                                       (m.fmt(a), m.fmt(b)))


def classify(m, budget=1000, seed=0):
    m = as_bipotent(m)
    if m.finite:
        flags, wit = separation_flags(m)
        cancel = m.is_cancellative()
        cases = separation_cases(m, flags, cancel, m.chain())
        method = "exhaustive"
    elif isinstance(m.base, MaxPlus):
        flags, wit = _graded_closed_form(m)
        graded_sanity(m, flags, wit, budget, seed)
        cancel = True
        cases = separation_cases(m, flags, cancel)
        method = f"closed form, sanity-checked on {budget} sampled pairs"
    else:
        raise PreconditionError(f"classification needs a finite or graded carrier, not {m.name}")
    result = Classification(m.name, flags, wit, m.is_proper(), cancel, cases, method)
    check_implications(result)
    return result


def check_implications(cls):
    """Implication chart between the separation classes, and the
    classifier's promises."""
    f = cls.flags
    if f["strictUIC"] and not (f["SepV"] and f["SepV0"]):
        raise TheoremViolation(f"strict UIC without V and V0 on {cls.name}")
    if (f["SepV"] or f["SepV0"]) and not f["UIC"]:
        raise TheoremViolation(f"separation without UIC on {cls.name}")
    for case in cls.cases:
        need = {"i": "SepV0", "ii": "SepV", "iii": "SepV0", "iv": "strictUIC"}[case]
        if not f[need]:
            raise TheoremViolation(f"case {case} applies but {need} fails on {cls.name}")


def uic_of_map(v, source_elements):
    """UIC for an m-valuation given as a map on finitely many source elements."""
    t = v.target
    els = list(source_elements)
    for x in els:
        for y in els:
            if t.lt(v(x), v(y)):
                if not any(t.le(v(v.source.mul(x, z)), t.one)
                           and t.le(t.one, v(v.source.mul(y, z))) for z in els):
                    return False, (x, y)
    return True, None


# -- canonical coarsening maps ---------------------------------------------------------

def gamma_v0(m):
    """``M -> M`` modulo equal colon sets of ``p_M = {x < 1}``."""
    from . import valuations as val
    m = as_bipotent(m)
    if not m.finite:
        raise PreconditionError("gamma_v0 needs a finite carrier")
    p = m.below_one()
    w = val.classify_subset(m.base, p, as_kind="prime")
    v = val.quotient_valuation(m.base, w)
    _assert_homomorphism(v, "gamma_v0")
    A, pv = val.valuation_pair(v)
    if A != val.colon_of_sets(m.base, p, p) or pv != p:
        raise TheoremViolation("gamma_v0 valuation pair differs from ([p:p], p)")
    return v.renamed("gamma_v0", kind="HOMOMORPHISM")


def gamma_v(m):
    """``M -> M`` modulo equal colon sets of ``A_M = {x <= 1}``."""
    from . import valuations as val
    m = as_bipotent(m)
    if not m.finite:
        raise PreconditionError("gamma_v needs a finite carrier")
    if not m.is_proper():
        raise PreconditionError(f"{m.name} is not proper (A_M = M)")
    A = m.lower_one()
    w = val.classify_subset(m.base, A, as_kind="cmc")
    v = val.quotient_valuation(m.base, w)
    _assert_homomorphism(v, "gamma_v")
    target = classify(v.target)
    if not target.flags["SepV"]:
        raise TheoremViolation("target of gamma_v lacks SepV")
    return v.renamed("gamma_v", kind="HOMOMORPHISM")


def _assert_homomorphism(v, label):
    from .morphisms import homomorphism_witness
    wit = homomorphism_witness(v.source, v.target.base, v.table)
    if wit is not None:
        raise TheoremViolation(f"{label} is not a homomorphism ({wit[0]})",
                               tuple(v.source.names[x] for x in wit[1]))
