"""Primes, CMC-subsemirings and their generalized (exponent) versions;
colon-set quotient valuations, coarsenings, dominance, envelope and core.

Subsets of a finite carrier are frozensets of element indices.  Over the
rational-function field a subset is one of the closed forms from
``ratfunc`` (balls ``|x| <= r``, ``|x| < r``, order sets ``ord x >= k``),
and every check that cannot be decided symbolically runs on the
deterministic sample and says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import combinations

from . import ratfunc as rf
from .bipotent import BipotentSemiring, as_bipotent, classify, separation_flags
from .carriers import AbsValueSemiring, FiniteSemiring, MaxPlus, RatFuncField
from .errors import CheckFailed, PreconditionError, TheoremViolation
from .morphisms import is_homomorphism, ordered_quotient

PRIME = "PRIME"
CMC_SUBSEMIRING = "CMC_SUBSEMIRING"
PRIME_SUBSET = "PRIME_SUBSET"
CMC_SUBSET = "CMC_SUBSET"
INVALID = "INVALID"

MVALUATION = "MVALUATION"
VALUATION = "VALUATION"
MULT01 = "MULT01"
HOMOMORPHISM = "HOMOMORPHISM"

ENUMERATION_LIMIT = 16


def _base(c):
    return c.base if isinstance(c, BipotentSemiring) else c


# -- subsets -------------------------------------------------------------------

@dataclass(frozen=True)
class SubsetWitness:
    carrier: object
    members: object
    kind: str
    exponents: tuple = ()
    is_true: bool = False
    proper: bool = True
    witness: str | None = None
    sampled: bool = False

    def __contains__(self, x):
        return x in self.members

    @property
    def side(self):
        return "prime" if self.kind in (PRIME, PRIME_SUBSET) else "cmc"

    @property
    def valid(self):
        return self.kind != INVALID

    def fmt_members(self):
        c = self.carrier
        if c.finite:
            return c.fmt_set(self.members)
        return str(self.members)

    def fmt(self):
        c = self.carrier
        exps = ", ".join(c.fmt(u) for u in self.exponents) or "none"
        line = f"{self.fmt_members()}: {self.kind}"
        if self.kind != INVALID:
            line += f", exponents {exps}, true {'yes' if self.is_true else 'no'}"
            if not self.proper:
                line += ", improper"
        if self.witness:
            line += f" ({self.witness})"
        if self.sampled:
            line += " [sampled]"
        return line


def _finite_subset_classification(c, s, as_kind):
    names = c.names
    if c.zero not in s:
        return INVALID, (), "0 not in L"
    has_one = c.one in s
    if as_kind == "prime" and has_one:
        return INVALID, (), "1 ∈ 𝔭 forbidden"
    if as_kind == "cmc" and not has_one:
        return INVALID, (), "1 not in A"
    comp = [x for x in c.elements() if x not in s]
    for x in s:
        for y in s:
            if c.mul(x, y) not in s:
                return INVALID, (), f"L not closed under * at ({names[x]}, {names[y]})"
    for x in comp:
        for y in comp:
            if c.mul(x, y) in s:
                return INVALID, (), (f"complement not closed under * at "
                                     f"({names[x]}, {names[y]}) -> {names[c.mul(x, y)]}")
    sums = {c.add(x, y) for x in s for y in s}
    exps = tuple(u for u in c.elements()
                 if c.is_unit(u) and all(c.mul(u, z) in s for z in sums))
    if not exps:
        x, y = next((x, y) for x in sorted(s) for y in sorted(s) if c.add(x, y) not in s)
        return INVALID, (), f"no exponent: L + L not in L at ({names[x]}, {names[y]})"
    one_ok = c.one in exps
    if has_one:
        kind = CMC_SUBSEMIRING if one_ok else CMC_SUBSET
    else:
        kind = PRIME if one_ok else PRIME_SUBSET
    return kind, exps, None


def classify_subset(c, s, as_kind=None, exponent=None, budget=1000, seed=0):
    """Classify ``s`` as prime / CMC-subsemiring / prime subset / CMC-subset.

    ``as_kind`` ("prime" or "cmc") states which side the caller intends;
    a mismatch is reported as INVALID.  Over the rational-function field
    the exponent has to be declared.
    """
    c = _base(c)
    if c.finite:
        s = frozenset(s)
        if not s <= frozenset(c.elements()):
            raise PreconditionError("subset is not contained in the carrier")
        kind, exps, wit = _finite_subset_classification(c, s, as_kind)
        proper = len(s) != len(c.names)
        return SubsetWitness(c, s, kind, exps, kind in (PRIME_SUBSET, CMC_SUBSET), proper, wit)
    if not isinstance(c, RatFuncField):
        raise PreconditionError(f"subset classification not supported on {c.name}")
    return _ratfunc_subset(c, s, as_kind, exponent, budget, seed)


def _ratfunc_subset(c, s, as_kind, exponent, budget, seed):
    pool = c.sample(max(budget, 50), seed)
    members = [x for x in pool if x in s]
    outside = [x for x in pool if x not in s]
    sample = c.pairs(budget, seed)

    def result(kind, exps=(), wit=None, true=False):
        return SubsetWitness(c, s, kind, exps, true, not isinstance(s, rf.Everything),
                             wit, sampled=True)

    if rf.ZERO not in s:
        return result(INVALID, wit="0 not in L")
    has_one = rf.ONE in s
    if as_kind == "prime" and has_one:
        return result(INVALID, wit="1 ∈ 𝔭 forbidden")
    if as_kind == "cmc" and not has_one:
        return result(INVALID, wit="1 not in A")
    for x, y in sample:
        if x in s and y in s and x * y not in s:
            return result(INVALID, wit=f"L not closed under * at ({x}, {y})")
        if x not in s and y not in s and x * y in s:
            return result(INVALID, wit=f"complement not closed under * at ({x}, {y})")
    member_pairs = [(x, y) for x, y in zip(members, members[1:] + members[:1])]
    member_pairs += [(x, x) for x in members]
    member_pairs += [(x, y) for x, y in sample if x in s and y in s]

    def exponent_ok(u):
        return all(u * (x + y) in s for x, y in member_pairs)

    exps = []
    one_ok = exponent_ok(rf.ONE)
    if one_ok:
        exps.append(rf.ONE)
    if exponent is not None and exponent != rf.ONE:
        if exponent.is_zero():
            raise PreconditionError("an exponent must be a unit")
        if exponent_ok(exponent):
            exps.append(exponent)
    if not exps:
        return result(INVALID, wit="declared exponent fails on the sample")
    del outside
    if has_one:
        kind = CMC_SUBSEMIRING if one_ok else CMC_SUBSET
    else:
        kind = PRIME if one_ok else PRIME_SUBSET
    return result(kind, tuple(exps), true=not one_ok)


def colon_set(c, L, x):
    """``[L:x] = {z : zx in L}``."""
    c = _base(c)
    members = L.members if isinstance(L, SubsetWitness) else L
    if c.finite:
        return frozenset(z for z in c.elements() if c.mul(z, x) in members)
    return members.colon(x)


def colon_of_sets(c, L, S):
    """``[L:S] = {z : zS ⊆ L}`` on a finite carrier."""
    c = _base(c)
    return frozenset(z for z in c.elements() if all(c.mul(z, s) in L for s in S))


def enumerate_subsets(c, kinds, force=False):
    """All subsets of a finite carrier whose classification is in ``kinds``."""
    c = _base(c)
    n = len(c.names)
    if n > ENUMERATION_LIMIT and not force:
        raise PreconditionError(f"{c.name} has {n} elements; enumeration needs --force")
    rest = [x for x in c.elements() if x != c.zero]
    out = []
    for k in range(len(rest) + 1):
        for combo in combinations(rest, k):
            w = classify_subset(c, frozenset((c.zero,) + combo))
            if w.kind in kinds:
                out.append(w)
    out.sort(key=lambda w: (len(w.members), sorted(w.members)))
    return out


def enumerate_primes(c, force=False):
    return enumerate_subsets(c, (PRIME,), force)


def enumerate_cmc(c, force=False, proper_only=True):
    found = enumerate_subsets(c, (CMC_SUBSEMIRING,), force)
    return [w for w in found if w.proper or not proper_only]


# -- 0-1-multiplicative maps -------------------------------------------------------

@dataclass(frozen=True)
class MultMap:
    """A 0-1-multiplicative map ``source -> target``.

    Finite sources store ``table``; infinite sources a callable ``fn`` and,
    when available, a ``section`` picking a preimage of each value and the
    closed forms ``pair = (A_v, p_v)``.
    """

    source: object
    target: object
    kind: str
    table: tuple | None = None
    fn: object = None
    section: object = None
    name: str = "v"
    origin: object = None
    pair: tuple | None = None

    def __call__(self, x):
        if self.table is not None:
            return self.table[x]
        return self.fn(x)

    def renamed(self, name, kind=None):
        return replace(self, name=name, kind=kind or self.kind)

    def source_points(self, budget=400, seed=0):
        if self.source.finite:
            return list(self.source.elements())
        return self.source.sample(budget, seed)

    def image(self):
        return frozenset(self.table)

    def is_surjective(self):
        if self.table is None:
            return self.section is not None
        return self.image() == frozenset(self.target.elements())

    def then(self, gamma, name=None, kind=None):
        """``gamma ∘ self`` where ``gamma`` is a MultMap on the target."""
        if self.table is not None:
            table = tuple(gamma(y) for y in self.table)
            return MultMap(self.source, gamma.target, kind or self.kind, table,
                           name=name or f"{gamma.name}∘{self.name}")
        f, g = self.fn, gamma
        return MultMap(self.source, gamma.target, kind or self.kind, None,
                       lambda x: g(f(x)), name=name or f"{gamma.name}∘{self.name}")

    def dump(self):
        """Two-column ``element -> value`` lines (finite source)."""
        s, t = self.source, self.target
        return [f"{s.fmt(x)}\t{t.fmt(self.table[x])}" for x in s.elements()]

    @classmethod
    def from_table(cls, source, target, table, kind=MULT01, name="v"):
        target = as_bipotent(target) if not isinstance(target, BipotentSemiring) else target
        table = tuple(target.base.index(v) if isinstance(v, str) else v for v in table)
        v = cls(source, target, kind, table, name=name)
        problems = mult_map_violations(v)
        if problems:
            label, wit = problems[0]
            raise CheckFailed(f"{name} is not {kind}: {label}", wit)
        return v


def mult_map_violations(v, budget=1000, seed=0):
    """Violated clauses of the declared kind as ``(label, witness)`` pairs."""
    s, t = v.source, v.target
    out = []
    if v(s.zero) != t.zero:
        out.append(("v(0) != 0", (s.fmt(s.zero),)))
    if v(s.one) != t.one:
        out.append(("v(1) != 1", (s.fmt(s.one),)))
    pairs = s.pairs(budget, seed)
    for x, y in pairs:
        if v(s.mul(x, y)) != t.mul(v(x), v(y)):
            out.append(("not multiplicative", (s.fmt(x), s.fmt(y))))
            break
    if v.kind in (MVALUATION, VALUATION):
        for x, y in pairs:
            if not t.le(v(s.add(x, y)), t.max(v(x), v(y))):
                out.append(("v(a+b) > max(v(a), v(b))", (s.fmt(x), s.fmt(y))))
                break
    if v.kind == VALUATION and not t.is_cancellative():
        out.append(("target not cancellative", ()))
    if v.kind == HOMOMORPHISM:
        for x, y in pairs:
            if v(s.add(x, y)) != t.add(v(x), v(y)):
                out.append(("not additive", (s.fmt(x), s.fmt(y))))
                break
    return out


# -- colon-set quotients ----------------------------------------------------------

def quotient_valuation(c, L, budget=1000, seed=0):
    """``v_L : R -> M(R, L)``, classes of equal colon sets ordered by reverse
    inclusion, addition the maximum."""
    c = _base(c)
    if not isinstance(L, SubsetWitness):
        L = classify_subset(c, L)
    if L.kind == INVALID:
        raise PreconditionError(f"subset is INVALID: {L.witness}")
    if L.side == "cmc" and not L.proper:
        raise PreconditionError("improper CMC-subsemiring (A = R)")
    kind = MVALUATION if L.kind in (PRIME, CMC_SUBSEMIRING) else MULT01
    if not c.finite:
        return _ratfunc_quotient_valuation(c, L, kind, budget, seed)
    colons = {x: colon_set(c, L, x) for x in c.elements()}
    keys = []
    for x in c.elements():
        if colons[x] not in keys:
            keys.append(colons[x])
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            if not (a >= b or b >= a):
                raise TheoremViolation("colon sets are not totally ordered by inclusion")
    classes = [frozenset(x for x in c.elements() if colons[x] == k) for k in keys]
    classes.sort(key=min)
    key_of = [colons[min(cls)] for cls in classes]
    rank = tuple(sum(1 for k in key_of if k > key_of[i]) for i in range(len(classes)))
    try:
        q, proj = ordered_quotient(c, classes, rank, f"M({c.name},{_short(c, L)})")
    except CheckFailed as exc:
        raise TheoremViolation(f"colon-set relation is not multiplicative: {exc}") from None
    target = as_bipotent(q)
    v = MultMap(c, target, kind, proj, name=f"v_{_short(c, L)}", origin=L)
    problems = mult_map_violations(v)
    if problems:
        raise TheoremViolation(f"v_L fails: {problems[0][0]}", problems[0][1])
    _assert_support(c, L, v)
    for u in L.exponents:
        _assert_exponent_bound(c, v, u)
    return v


def _short(c, L):
    return "{" + ",".join(c.names[x] for x in sorted(L.members)) + "}"


def _assert_support(c, L, v):
    supp = frozenset(x for x in c.elements() if v(x) == v.target.zero)
    expected = frozenset(x for x in c.elements()
                         if all(c.mul(z, x) in L.members for z in c.elements()))
    if supp != expected:
        raise TheoremViolation("support differs from {x : Rx ⊆ L}")
    if c.one in supp:
        raise TheoremViolation("support contains 1")
    for x in supp:
        for y in c.elements():
            if c.mul(x, y) not in supp:
                raise TheoremViolation("support is not an ideal", (c.names[x], c.names[y]))
            if y in supp and c.add(x, y) not in supp:
                raise TheoremViolation("support not closed under +", (c.names[x], c.names[y]))
    for x in c.elements():
        for y in c.elements():
            if c.mul(x, y) in supp and x not in supp and y not in supp:
                raise TheoremViolation("support is not prime", (c.names[x], c.names[y]))


def _assert_exponent_bound(c, v, u):
    t = v.target
    k = v(c.inverse(u))
    for x in c.elements():
        for y in c.elements():
            if not t.le(v(c.add(x, y)), t.mul(k, t.max(v(x), v(y)))):
                raise TheoremViolation("v(x+y) exceeds v(1/u) max(v(x), v(y))",
                                       (c.names[x], c.names[y]))


_BOOL = None


def boolean():
    """The two-element semiring {0 < 1} as a bipotent view."""
    global _BOOL
    if _BOOL is None:
        b = FiniteSemiring("B", ("0", "1"), 0, 1, ((0, 1), (1, 1)), ((0, 0), (0, 1)))
        _BOOL = as_bipotent(b)
    return _BOOL


def _grade(x):
    return None if x.is_zero() else -x.ord()


def _grade_section(k):
    return rf.ZERO if k is None else rf.RatFunc.t_power(-k)


def _ratfunc_quotient_valuation(c, L, kind, budget, seed):
    s = L.members
    if isinstance(s, rf.AbsBall):
        target = as_bipotent(AbsValueSemiring())
        v = MultMap(c, target, kind, None, abs, lambda y: y, name=f"v_{s}", origin=L,
                    pair=(rf.CLOSED_UNIT, rf.OPEN_UNIT))
    elif isinstance(s, rf.OrdSet):
        target = BipotentSemiring(MaxPlus("Z"))
        v = MultMap(c, target, kind, None, _grade, _grade_section, name=f"v_{s}",
                    origin=L, pair=(rf.FINITE, rf.INFINITESIMAL))
    elif isinstance(s, rf.ZeroSet):
        target = boolean()
        v = MultMap(c, target, kind, None, lambda x: 0 if x.is_zero() else 1,
                    lambda y: rf.ZERO if y == 0 else rf.ONE, name="v_{0}", origin=L,
                    pair=(rf.Everything(), rf.ZeroSet()))
    else:
        raise PreconditionError(f"no closed form for the quotient by {s}")
    # second route: the order of the map against inclusion of colon sets
    for x, y in c.pairs(budget, seed):
        by_map = target.le(v(x), v(y))
        by_colon = rf.includes(s.colon(x), s.colon(y))
        if by_map != by_colon:
            raise TheoremViolation("closed-form valuation disagrees with colon sets",
                                   (str(x), str(y)))
    problems = mult_map_violations(v, budget, seed)
    if problems:
        raise TheoremViolation(f"v_L fails: {problems[0][0]}", problems[0][1])
    return v


# -- valuation pair, central prime, A(p) -------------------------------------------------

def valuation_pair(v, budget=1000, seed=0):
    """``(A_v, p_v) = ({v <= 1}, {v < 1})``."""
    t = v.target
    if not v.source.finite:
        if v.pair is None:
            raise PreconditionError("no closed form for the valuation pair")
        A, p = v.pair
        for x in v.source.sample(budget, seed):
            if (x in A) != t.le(v(x), t.one) or (x in p) != t.lt(v(x), t.one):
                raise TheoremViolation("closed-form valuation pair disagrees", (str(x),))
        return A, p
    c = v.source
    A = frozenset(x for x in c.elements() if t.le(v(x), t.one))
    p = frozenset(x for x in c.elements() if t.lt(v(x), t.one))
    L = v.origin
    if isinstance(L, SubsetWitness) and c.finite:
        if L.side == "prime":
            if p != L.members or A != colon_of_sets(c, L.members, L.members):
                raise TheoremViolation("valuation pair of v_p is not ([p:p], p)")
        else:
            if A != L.members or p != central_prime_set(c, L.members):
                raise TheoremViolation("valuation pair of v_A is not (A, P(A))")
    return A, p


def central_prime_set(c, A):
    comp = [y for y in c.elements() if y not in A]
    return frozenset(x for x in c.elements() if any(c.mul(x, y) in A for y in comp))


def central_prime(c, A, budget=1000, seed=0):
    """``P(A) = {x : xy in A for some y not in A}``."""
    c = _base(c)
    if A.side != "cmc" or A.kind == INVALID:
        raise PreconditionError("central prime needs a CMC-subset")
    if not A.proper:
        raise PreconditionError("A is not proper")
    if c.finite:
        P = classify_subset(c, central_prime_set(c, A.members), as_kind="prime")
        if P.kind == INVALID or not set(A.exponents) <= set(P.exponents):
            raise TheoremViolation("central prime is not a prime subset with the exponents of A")
        return P
    s = A.members
    if isinstance(s, rf.AbsBall) and s.closed:
        closed = rf.AbsBall(s.radius, False)
    elif s == rf.FINITE:
        closed = rf.INFINITESIMAL
    else:
        raise PreconditionError(f"no closed form for the central prime of {s}")
    # second route: x in P(A) iff [A:x] is not contained in A
    for x in c.sample(max(budget, 1000), seed):
        if (x in closed) != (not rf.includes(s, s.colon(x))):
            raise TheoremViolation("central prime closed form disagrees", (str(x),))
    exponent = next((u for u in A.exponents if u != rf.ONE), None)
    return classify_subset(c, closed, "prime", exponent, budget, seed)


def a_of_prime(c, p, budget=1000, seed=0):
    """``A(p) = [p:p] = {x : xp ⊆ p}``."""
    c = _base(c)
    if p.side != "prime" or p.kind == INVALID:
        raise PreconditionError("A(p) needs a prime subset")
    if c.finite:
        A = classify_subset(c, colon_of_sets(c, p.members, p.members), as_kind="cmc")
        if A.kind == INVALID or not set(p.exponents) <= set(A.exponents):
            raise TheoremViolation("A(p) is not a CMC-subset with the exponents of p")
        return A
    s = p.members
    if isinstance(s, rf.AbsBall) and not s.closed:
        closed = rf.CLOSED_UNIT
    elif isinstance(s, rf.OrdSet):
        closed = rf.OrdSet(0)
    elif isinstance(s, rf.ZeroSet):
        closed = rf.Everything()
    else:
        raise PreconditionError(f"no closed form for A({s})")
    for x in c.sample(max(budget, 1000), seed):
        if (x in closed) != rf.includes(s.colon(x), s):
            raise TheoremViolation("A(p) closed form disagrees", (str(x),))
    exponent = next((u for u in p.exponents if u != rf.ONE), None)
    return classify_subset(c, closed, "cmc", exponent, budget, seed)


# -- dominance and equivalence ------------------------------------------------------

@dataclass
class DominanceResult:
    holds: bool
    exhaustive: bool
    witness: tuple | None = None
    gamma: MultMap | None = None
    note: str = ""


def dominates(v, w, budget=1000, seed=0):
    """``v >= w``: ``v(a) <= v(b)`` implies ``w(a) <= w(b)``.  When ``v`` is
    surjective the induced ``gamma`` with ``gamma ∘ v = w`` is built and
    checked to be a semiring homomorphism."""
    s = v.source
    tv, tw = v.target, w.target
    if s.finite:
        pairs = [(a, b) for a in s.elements() for b in s.elements()]
    else:
        pool = s.sample(min(max(budget, 50), 400), seed)
        pairs = [(a, a) for a in pool] + s.pairs(budget, seed)
    for a, b in pairs:
        if tv.le(v(a), v(b)) and not tw.le(w(a), w(b)):
            return DominanceResult(False, s.finite, (s.fmt(a), s.fmt(b)))
    if not v.is_surjective():
        return DominanceResult(True, s.finite, note="v not surjective; no gamma")
    if v.table is not None:
        table = [None] * len(tv.base.names)
        for a in s.elements():
            table[v(a)] = w(a)
        gamma = MultMap(tv.base, tw, HOMOMORPHISM, tuple(table), name=f"γ({w.name},{v.name})")
        if tw.finite and not is_homomorphism(tv.base, tw.base, gamma.table):
            raise TheoremViolation("induced gamma is not a semiring homomorphism")
    else:
        sec = v.section
        gamma = MultMap(tv.base, tw, HOMOMORPHISM, None, lambda y: w(sec(y)),
                        name=f"γ({w.name},{v.name})")
        for y, z in tv.base.pairs(budget, seed):
            if gamma(tv.add(y, z)) != tw.add(gamma(y), gamma(z)) or \
                    gamma(tv.mul(y, z)) != tw.mul(gamma(y), gamma(z)):
                raise TheoremViolation("induced gamma is not a homomorphism on the sample",
                                       (tv.fmt(y), tv.fmt(z)))
        for a in pool:
            if gamma(v(a)) != w(a):
                raise TheoremViolation("gamma ∘ v differs from w", (s.fmt(a),))
    return DominanceResult(True, s.finite, gamma=gamma)


def equivalence(v, w, budget=1000, seed=0):
    """Order-preserving multiplicative bijection ``gamma`` between the images
    with ``gamma ∘ v = w``, as a dict on finite images, or ``None``."""
    s = v.source
    tv, tw = v.target, w.target
    pts = v.source_points(budget, seed)
    for a in pts:
        for b in pts if s.finite else pts[:60]:
            if tv.le(v(a), v(b)) != tw.le(w(a), w(b)):
                return None
    if not s.finite:
        return {}
    gamma = {}
    for a in pts:
        gamma.setdefault(v(a), w(a))
        if gamma[v(a)] != w(a):
            return None
    if len(set(gamma.values())) != len(gamma):
        return None
    for y in gamma:
        for z in gamma:
            p = tv.mul(y, z)
            if p in gamma and gamma[p] != tw.mul(gamma[y], gamma[z]):
                return None
    return gamma


def kernel(v):
    return frozenset(x for x in v.source.elements() if v(x) == v.target.zero)


# -- coarsenings and recognition --------------------------------------------------

def v0_coarsening(v):
    """``v↓ = v_{R, p_v}``; checks ``v >= v↓`` and the factorization through
    the canonical map on the target."""
    from .bipotent import gamma_v0
    if not v.source.finite or not v.is_surjective():
        raise PreconditionError("V0-coarsening needs a surjective map on a finite carrier")
    A, p = valuation_pair(v)
    P = classify_subset(v.source, p, as_kind="prime")
    if P.kind != PRIME:
        raise TheoremViolation("p_v is not a prime", (P.witness,))
    down = quotient_valuation(v.source, P).renamed(f"{v.name}↓")
    if not dominates(v, down).holds:
        raise TheoremViolation("v does not dominate its V0-coarsening")
    via = v.then(gamma_v0(v.target))
    if equivalence(down, via) is None:
        raise TheoremViolation("V0-coarsening is not equivalent to gamma_v0 ∘ v")
    return down


def v_coarsening(v):
    """``v↑ = v_{R, A_v}``; checks ``v >= v↑`` and ``v↑ ~ gamma_V ∘ v``."""
    from .bipotent import gamma_v
    if not v.source.finite or not v.is_surjective():
        raise PreconditionError("V-coarsening needs a surjective map on a finite carrier")
    if not v.target.is_proper():
        raise PreconditionError(f"target {v.target.name} is not proper")
    A, p = valuation_pair(v)
    W = classify_subset(v.source, A, as_kind="cmc")
    if W.kind != CMC_SUBSEMIRING:
        raise TheoremViolation("A_v is not a CMC-subsemiring", (W.witness,))
    up = quotient_valuation(v.source, W).renamed(f"{v.name}↑")
    if not dominates(v, up).holds:
        raise TheoremViolation("v does not dominate its V-coarsening")
    via = v.then(gamma_v(v.target))
    if equivalence(up, via) is None:
        raise TheoremViolation("V-coarsening is not equivalent to gamma_V ∘ v")
    return up


@dataclass
class Recognition:
    ok: bool
    kind: str
    subset: frozenset | None = None
    gamma: dict | None = None
    clause: str = ""
    witness: tuple | None = None


def recognize(v, kind="V0"):
    """Decide whether ``v`` is a V0- (or V-) valuation and rebuild it."""
    s, t = v.source, v.target
    if not s.finite or not t.finite:
        raise PreconditionError("recognition needs finite source and target")
    if not v.is_surjective():
        return Recognition(False, kind, clause="v not surjective")
    if mult_map_violations(replace(v, kind=MULT01)):
        return Recognition(False, kind, clause="v not 0-1-multiplicative")
    flags, wit = separation_flags(t)
    prop = "SepV0" if kind == "V0" else "SepV"
    if not flags[prop]:
        a, b = wit[prop]
        return Recognition(False, kind, clause=f"target lacks {prop}",
                           witness=(t.fmt(a), t.fmt(b)))
    if kind == "V" and not t.is_proper():
        return Recognition(False, kind, clause="target not proper")
    strict = kind == "V0"
    for x in s.elements():
        for y in s.elements():
            bx, by, bs = v(x), v(y), v(s.add(x, y))
            if strict:
                if t.lt(bx, t.one) and t.lt(by, t.one) and not t.lt(bs, t.one):
                    return Recognition(False, kind, clause="rule v(x),v(y) < 1 => v(x+y) < 1",
                                       witness=(s.fmt(x), s.fmt(y)))
            elif t.le(bx, t.one) and t.le(by, t.one) and not t.le(bs, t.one):
                return Recognition(False, kind, clause="rule v(x),v(y) <= 1 => v(x+y) <= 1",
                                   witness=(s.fmt(x), s.fmt(y)))
    members = frozenset(x for x in s.elements()
                        if (t.lt(v(x), t.one) if strict else t.le(v(x), t.one)))
    L = classify_subset(s, members, as_kind="prime" if strict else "cmc")
    if L.kind != (PRIME if strict else CMC_SUBSEMIRING):
        raise TheoremViolation("recognized subset has the wrong kind", (L.witness,))
    rebuilt = quotient_valuation(s, L)
    gamma = equivalence(v, rebuilt)
    if gamma is None:
        raise TheoremViolation("v is not equivalent to the rebuilt valuation")
    return Recognition(True, kind, members, gamma)


# -- envelope and core ---------------------------------------------------------------

@dataclass
class EnvelopeReport:
    B: SubsetWitness
    Q: SubsetWitness
    hypothesis_met: bool
    note: str = ""
    checks: dict = field(default_factory=dict)
    sampled: bool = False

    @property
    def ok(self):
        return all(self.checks.values())


def _unit_order(c, u):
    p, d = u, 1
    while p != c.one:
        p = c.mul(p, u)
        d += 1
        if d > len(c.names) + 1:
            raise PreconditionError("unit of infinite order in a finite carrier")
    return d


def envelope_core(c, L, u, budget=1000, seed=0):
    """``B_u(L)`` (union of ``u^-n L``) and ``Q_u(L)`` (intersection of ``u^n L``)."""
    c = _base(c)
    if L.kind == INVALID:
        raise PreconditionError("subset is INVALID")
    if not c.finite:
        return _ratfunc_envelope(c, L, u, budget, seed)
    if not c.is_unit(u):
        raise PreconditionError(f"{c.fmt(u)} is not a unit")
    if u not in L.exponents:
        raise PreconditionError(f"{c.fmt(u)} is not an exponent")
    d = _unit_order(c, u)
    uinv = c.inverse(u)
    powers, inv_powers = [c.one], [c.one]
    for _ in range(d):
        powers.append(c.mul(powers[-1], u))
        inv_powers.append(c.mul(inv_powers[-1], uinv))
    B = frozenset(c.mul(g, x) for g in inv_powers for x in L.members)
    Q = frozenset.intersection(*[frozenset(c.mul(g, x) for x in L.members) for g in powers])
    B1 = frozenset(c.mul(g, x) for g in inv_powers[1:] for x in L.members)
    Q1 = frozenset.intersection(*[frozenset(c.mul(g, x) for x in L.members)
                                  for g in powers[1:]])
    if (B, Q) != (B1, Q1):
        raise TheoremViolation("index conventions for the envelope disagree")
    Bw = classify_subset(c, B, as_kind="cmc")
    Qw = classify_subset(c, Q, as_kind="prime")
    if not L.is_true:
        return EnvelopeReport(Bw, Qw, False, "hypothesis not met (L not true)")
    checks = _envelope_checks(c, L, Bw, Qw)
    if not all(checks.values()):
        bad = [k for k, ok in checks.items() if not ok]
        raise TheoremViolation(f"envelope/core clauses fail: {', '.join(bad)}")
    return EnvelopeReport(Bw, Qw, True, "", checks)


def _envelope_checks(c, L, Bw, Qw):
    B, Q = Bw.members, Qw.members
    checks = {
        "B CMC-subsemiring": Bw.kind == CMC_SUBSEMIRING,
        "L ⊆ B": L.members <= B,
        "Q prime": Qw.kind == PRIME,
        "Q ⊆ L": Q <= L.members,
        "Q ideal of B": all(c.mul(b, q) in Q for b in B for q in Q),
        "Q prime in B": all(c.mul(x, y) not in Q or x in Q or y in Q for x in B for y in B),
    }
    vL = quotient_valuation(c, L)
    vQ = quotient_valuation(c, Qw)
    checks["v_L >= v_Q"] = dominates(vL, vQ).holds
    checks["ker v_L = ker v_Q"] = kernel(vL) == kernel(vQ)
    if Bw.proper:
        vB = quotient_valuation(c, Bw)
        checks["v_L >= v_B"] = dominates(vL, vB).holds
        checks["ker v_L = ker v_B"] = kernel(vL) == kernel(vB)
    return checks


def ratfunc_envelope_closed_form(s, u):
    """Closed forms of ``(B_u, Q_u)`` for balls and order sets."""
    k = u.ord()
    if isinstance(s, rf.AbsBall):
        if k < 0 or (k == 0 and abs(u.leading()) >= 1):
            raise PreconditionError(f"{u} is not an exponent of {s}")
        if k > 0:
            return rf.Everything(), rf.ZeroSet()
        r = s.radius.ord()
        return rf.OrdSet(r), rf.OrdSet(r + 1)
    if isinstance(s, rf.OrdSet):
        if k < 0:
            raise PreconditionError(f"{u} is not an exponent of {s}")
        return (rf.Everything(), rf.ZeroSet()) if k > 0 else (s, s)
    if isinstance(s, rf.ZeroSet):
        return s, s
    raise PreconditionError(f"no closed form for the envelope of {s}")


def truncated_envelope_member(x, s, u, depth=16):
    """Oracle: ``x in B`` iff ``u^n x in L`` for some ``n <= depth``;
    ``x in Q`` iff ``u^-n x in L`` for all ``n <= depth``."""
    in_b = in_q = False
    y = x
    for _ in range(depth + 1):
        if y in s:
            in_b = True
            break
        y = y * u
    uinv = u.inverse()
    y = x
    in_q = True
    for _ in range(depth + 1):
        if y not in s:
            in_q = False
            break
        y = y * uinv
    return in_b, in_q


def _ratfunc_envelope(c, L, u, budget, seed):
    if u not in L.exponents:
        raise PreconditionError(f"{u} is not a declared exponent of {L.members}")
    B, Q = ratfunc_envelope_closed_form(L.members, u)
    sample = c.sample(max(budget, 1000), seed)
    for x in sample:
        in_b, in_q = truncated_envelope_member(x, L.members, u)
        if in_b != (x in B) or in_q != (x in Q):
            raise TheoremViolation("envelope closed form disagrees with the truncated oracle",
                                   (str(x),))
    Bw = classify_subset(c, B, "cmc", None, budget, seed)
    Qw = classify_subset(c, Q, "prime", None, budget, seed)
    if not L.is_true:
        return EnvelopeReport(Bw, Qw, False, "hypothesis not met (L not true)", sampled=True)
    vL = quotient_valuation(c, L, budget, seed)
    vQ = quotient_valuation(c, Qw, budget, seed)
    checks = {
        "B CMC-subsemiring": Bw.kind == CMC_SUBSEMIRING,
        "L ⊆ B": all(x in B for x in sample if x in L.members),
        "Q prime": Qw.kind == PRIME,
        "Q ⊆ L": all(x in L.members for x in sample if x in Q),
        "Q ideal of B": all(x * y in Q for x, y in c.pairs(budget, seed) if x in B and y in Q),
        "Q prime in B": all(x * y not in Q or x in Q or y in Q
                            for x, y in c.pairs(budget, seed) if x in B and y in B),
        "v_L >= v_Q": dominates(vL, vQ, budget, seed).holds,
        "ker v_L = ker v_Q": all((vL(x) == vL.target.zero) == (vQ(x) == vQ.target.zero)
                                 for x in sample),
    }
    if Bw.proper:
        vB = quotient_valuation(c, Bw, budget, seed)
        checks["v_L >= v_B"] = dominates(vL, vB, budget, seed).holds
        checks["ker v_L = ker v_B"] = all(
            (vL(x) == vL.target.zero) == (vB(x) == vB.target.zero) for x in sample)
    if not all(checks.values()):
        bad = [k for k, ok in checks.items() if not ok]
        raise TheoremViolation(f"envelope/core clauses fail: {', '.join(bad)}")
    return EnvelopeReport(Bw, Qw, True, "", checks, sampled=True)


def classify_target(v):
    """Separation classification of the target of a finite-source map."""
    return classify(v.target)
