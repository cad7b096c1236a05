"""Totally ordered supertropical semirings, supervaluations, transmissions
and (total) dominance.

A supertropical semiring is checked operationally: ``e = 1 + 1`` is
idempotent, ``eU`` is bipotent, ``ex = 0`` forces ``x = 0``, and sums
follow the ghost rule (the larger ghost companion wins; equal companions
give the ghost).  ``OstrCarrier`` builds the semiring of a triple
``(T, G, v)`` with the extended order; finite outputs are tabulated into
a ``FiniteSemiring`` with a declared order.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from . import ratfunc as rf
from .bipotent import BipotentSemiring, as_bipotent, cancellative_quotient
from .carriers import Carrier, FiniteSemiring, RatFuncField, verify_semiring
from .errors import CheckFailed, PreconditionError, TheoremViolation
from .morphisms import find_isomorphism, is_homomorphism
from . import valuations as val


# -- the structured view ----------------------------------------------------------

class Supertropical:
    """Supertropical view of a carrier; ``le`` makes it ordered.

    ``decode`` (finite OSTR outputs only) maps an element index to
    ``("0", None)``, ``("t", n)`` or ``("g", m)``.
    """

    def __init__(self, base, le=None, decode=None, parts=None):
        self.base = base
        self._le = le
        self.decode = decode
        self.parts = parts
        self.e = base.add(base.one, base.one)

    def __repr__(self):
        return f"Supertropical({self.name})"

    @property
    def name(self):
        return self.base.name

    @property
    def finite(self):
        return self.base.finite

    @property
    def ordered(self):
        return self._le is not None

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

    def points(self, budget=400, seed=0):
        return list(self.elements()) if self.finite else self.sample(budget, seed)

    def pairs(self, budget=1000, seed=0):
        return self.base.pairs(budget, seed)

    def triples(self, budget=1000, seed=0):
        return self.base.triples(budget, seed)

    def ghost(self, x):
        return self.base.mul(self.e, x)

    def is_ghost(self, x):
        return self.ghost(x) == x

    def is_tangible(self, x):
        """Strictly tangible: outside ``eU`` (so ``0`` is excluded)."""
        return self.ghost(x) != x

    def le(self, x, y):
        return self._le(x, y)

    def lt(self, x, y):
        return self._le(x, y) and not self._le(y, x)

    def max(self, x, y):
        return y if self._le(x, y) else x

    def is_unit(self, x):
        return self.base.is_unit(x)

    def inverse(self, x):
        return self.base.inverse(x)

    def units(self):
        return [x for x in self.elements() if self.is_unit(x)]

    def chain(self):
        els = list(self.elements())
        return sorted(els, key=functools.cmp_to_key(
            lambda x, y: 0 if x == y else (-1 if self.le(x, y) else 1)))

    def fmt_chain(self):
        return " < ".join(self.fmt(x) for x in self.chain())

    def with_order(self, le):
        return Supertropical(self.base, le, self.decode, self.parts)


def _rank_le(order):
    rank = {x: i for i, x in enumerate(order)}
    return lambda x, y: rank[x] <= rank[y]


# -- OSTR(T, G, v) -------------------------------------------------------------------

class OstrCarrier(Carrier):
    """``T ⊔ G ⊔ {0}`` with the supertropical operations and the extended order.

    ``T`` and ``G`` are bipotent views whose nonzero parts are the tangible
    and ghost monoids; ``v`` maps nonzero ``T`` elements to ``G``.
    """

    ordered = True

    def __init__(self, T, G, v, name=None):
        self.T, self.G, self.v = T, G, v
        self.finite = T.finite and G.finite
        self.zero = ("0", None)
        self.one = ("t", T.one)
        self.e = ("g", G.one)
        self.name = name or f"OSTR({T.name},{G.name})"

    def tangible(self, a):
        return self.zero if a == self.T.zero else ("t", a)

    def ghost_of(self, b):
        return self.zero if b == self.G.zero else ("g", b)

    def p(self, x):
        kind, a = x
        if kind == "t":
            return ("g", self.v(a))
        return x

    def mul(self, x, y):
        (kx, a), (ky, b) = x, y
        if kx == "0" or ky == "0":
            return self.zero
        if kx == "t" and ky == "t":
            return ("t", self.T.mul(a, b))
        ga = self.v(a) if kx == "t" else a
        gb = self.v(b) if ky == "t" else b
        return ("g", self.G.mul(ga, gb))

    def add(self, x, y):
        if x[0] == "0":
            return y
        if y[0] == "0":
            return x
        px, py = self.p(x)[1], self.p(y)[1]
        if px == py:
            return ("g", px)
        return y if self.G.le(px, py) else x

    def le(self, x, y):
        (kx, a), (ky, b) = x, y
        if kx == "0":
            return True
        if ky == "0":
            return False
        if kx == ky == "t":
            return self.T.le(a, b)
        if kx == ky == "g":
            return self.G.le(a, b)
        if kx == "t":
            return self.G.le(self.v(a), b)
        return self.G.lt(a, self.v(b))

    def is_unit(self, x):
        return x[0] == "t" and self.T.is_unit(x[1])

    def inverse(self, x):
        if not self.is_unit(x):
            raise ValueError("not a unit")
        return ("t", self.T.inverse(x[1]))

    def elements(self):
        if not self.finite:
            raise TypeError(f"{self.name} is infinite; use sample()")
        ts = [("t", a) for a in self.T.chain() if a != self.T.zero]
        gs = [("g", b) for b in self.G.chain() if b != self.G.zero]
        return [self.zero] + ts + gs

    def sample(self, n=200, seed=0):
        k = max((n - 1) // 2, 1)
        ts = [("t", a) for a in self.T.sample(k + 1, seed) if a != self.T.zero][:k]
        gs = [("g", b) for b in self.G.sample(k + 1, seed) if b != self.G.zero][:k]
        out = [self.zero]
        for pair in zip(ts, gs):
            out.extend(pair)
        return out

    def fmt(self, x):
        kind, a = x
        if kind == "0":
            return "0"
        if kind == "t":
            return "t" + self.T.fmt(a)
        return "e" if a == self.G.one else "g" + self.G.fmt(a)


def tabulate(oc, name=None):
    """Finite ``OstrCarrier`` -> ordered ``Supertropical`` over a table."""
    els = oc.elements()
    index = {x: i for i, x in enumerate(els)}
    names = tuple(oc.fmt(x) for x in els)
    if len(set(names)) != len(names):
        raise PreconditionError("tangible and ghost names collide")
    ordered = sorted(range(len(els)), key=functools.cmp_to_key(
        lambda i, j: 0 if i == j else (-1 if oc.le(els[i], els[j]) else 1)))
    base = FiniteSemiring.from_functions(
        name or oc.name, names, index[oc.zero], index[oc.one],
        lambda i, j: index[oc.add(els[i], els[j])],
        lambda i, j: index[oc.mul(els[i], els[j])], ordered)
    return Supertropical(base, _rank_le(ordered), decode=tuple(els), parts=oc)


def build_ostr(T, G, v, name=None, budget=1000, seed=0):
    """``OSTR(T, G, v)``: checked preconditions, then the full order verifier.

    ``v`` is a callable on ``T`` elements (a ``MultMap`` works).
    """
    T = as_bipotent(T) if not isinstance(T, BipotentSemiring) else T
    G = as_bipotent(G) if not isinstance(G, BipotentSemiring) else G
    if not G.is_cancellative():
        raise PreconditionError(f"ghost monoid {G.name} is not cancellative")
    tpts = [a for a in (T.elements() if T.finite else T.sample(200, seed)) if a != T.zero]
    if v(T.one) != G.one:
        raise PreconditionError("v(1) != 1")
    for a in tpts:
        if v(a) == G.zero:
            raise PreconditionError(f"v sends {T.fmt(a)} to 0")
        for b in tpts:
            if T.mul(a, b) == T.zero:
                raise PreconditionError(f"tangible monoid not closed: {T.fmt(a)}·{T.fmt(b)} = 0")
            if v(T.mul(a, b)) != G.mul(v(a), v(b)):
                raise PreconditionError("v is not multiplicative", (T.fmt(a), T.fmt(b)))
            if T.le(a, b) and not G.le(v(a), v(b)):
                raise PreconditionError(f"v is not order preserving at {T.fmt(a)} <= {T.fmt(b)}")
    oc = OstrCarrier(T, G, v, name)
    u = tabulate(oc, name) if oc.finite else Supertropical(oc, oc.le, parts=oc)
    verify_supertropical(u.base, budget, seed)
    verify_total_order(u, budget=budget, seed=seed)
    return u


def d_of(G, budget=1000, seed=0):
    """``D(G) = OSTR(G, G, id)``."""
    G = as_bipotent(G) if not isinstance(G, BipotentSemiring) else G
    return build_ostr(G, G, lambda a: a, f"D({G.name})", budget, seed)


# -- verifiers ---------------------------------------------------------------------------

def _fail(clause, u, *wit):
    raise CheckFailed(f"{clause} fails", tuple(u.fmt(x) for x in wit))


def verify_supertropical(c, budget=1000, seed=0):
    """Structured view of ``c`` or ``CheckFailed`` naming the failed clause."""
    if isinstance(c, Supertropical):
        c = c.base
    report = verify_semiring(c, budget, seed)
    if not report.ok:
        ax = next(iter(report.failures))
        raise CheckFailed(f"not a semiring ({ax})", tuple(c.fmt(x) for x in report.failures[ax]))
    u = Supertropical(c)
    e = u.e
    if c.mul(e, e) != e:
        _fail("e idempotent", u, e)
    pts = u.points(min(budget, 400), seed)
    for x in pts:
        if u.ghost(x) == c.zero and x != c.zero:
            _fail("kernel condition (ex = 0 => x = 0)", u, x)
    for x, y in c.pairs(budget, seed):
        gx, gy = u.ghost(x), u.ghost(y)
        s = c.add(gx, gy)
        if s != gx and s != gy:
            _fail("eU bipotent", u, gx, gy)
        if s == gx == gy:
            expected = gx
        elif s == gy:
            expected = y
        else:
            expected = x
        if c.add(x, y) != expected:
            _fail("three-case addition", u, x, y)
    return u


def verify_total_order(u, order=None, budget=1000, seed=0):
    """Ordered view after checking compatibility, Gh1-Gh5, the additive
    reconstruction and both comparison rules between tangibles and ghosts.

    ``order`` is an ascending list of elements (finite) or a callable
    ``le``; by default the carrier's own order is used.
    """
    if not isinstance(u, Supertropical):
        u = verify_supertropical(u, budget, seed)
    if order is None:
        if u.ordered:
            le = u._le
        elif u.finite and getattr(u.base, "order", None) is not None:
            le = _rank_le(u.base.order)
        elif hasattr(u.base, "le"):
            le = u.base.le
        else:
            try:
                le = as_bipotent(u.base).le
            except CheckFailed:
                raise PreconditionError("no order given and the carrier is not bipotent") \
                    from None
    elif callable(order):
        le = order
    else:
        order = [u.base.index(x) if isinstance(x, str) else x for x in order]
        if sorted(order) != list(u.elements()):
            raise PreconditionError("order must list every element exactly once")
        le = _rank_le(order)
    o = u.with_order(le)
    p = o.ghost
    if not o.le(o.zero, o.one):
        _fail("0 <= 1", o, o.zero, o.one)
    for x, y, z in o.triples(budget, seed):
        if o.le(x, y):
            if not o.le(o.add(x, z), o.add(y, z)):
                _fail("x <= y => x+z <= y+z", o, x, y, z)
            if not o.le(o.mul(x, z), o.mul(y, z)):
                _fail("x <= y => xz <= yz", o, x, y, z)
    for x in o.points(min(budget, 400), seed):
        if p(p(x)) != p(x):
            _fail("Gh1 p(p(x)) = p(x)", o, x)
        if p(x) == o.zero and x != o.zero:
            _fail("Gh2 p(x) = 0 => x = 0", o, x)
        if not o.le(x, p(x)):
            _fail("Gh5 x <= p(x)", o, x)
    for x, y in o.pairs(budget, seed):
        if not (o.le(x, y) or o.le(y, x)):
            _fail("totality", o, x, y)
        if o.le(x, y) and o.le(y, x) and x != y:
            _fail("antisymmetry", o, x, y)
        px, py = p(x), p(y)
        if p(o.mul(x, y)) != o.mul(px, py):
            _fail("Gh3 p(xy) = p(x)p(y)", o, x, y)
        if o.le(x, y) and not o.le(px, py):
            _fail("Gh4 monotone ghost map", o, x, y)
        if (o.add(px, py) == py) != o.le(px, py):
            _fail("order on eU is the bipotent order", o, px, py)
        if o.lt(px, py):
            rebuilt = y
        elif o.lt(py, px):
            rebuilt = x
        else:
            rebuilt = px
        if o.add(x, y) != rebuilt:
            _fail("addition from order and ghost map", o, x, y)
        if o.is_tangible(x) and o.is_ghost(y) and y != o.zero:
            if o.le(x, y) != o.le(px, y):
                _fail("tangible x, ghost y: x <= y iff ex <= y", o, x, y)
        if o.is_ghost(x) and x != o.zero and o.is_tangible(y):
            if o.le(x, y) != o.lt(x, py):
                _fail("ghost x, tangible y: x <= y iff x < ey", o, x, y)
    return o


def minimal_order_total(u, budget=1000, seed=0):
    """``(total, one_tangible_per_fiber)`` for the order ``x <= y iff y = x + z``.

    Finite carriers are scanned exhaustively; infinite ones on the sample,
    trying ``z`` among ``0, x, y, ex, ey`` and the sample itself.
    """
    pts = u.points(min(budget, 200), seed)

    def below(x, y):
        cands = [u.zero, x, y, u.ghost(x), u.ghost(y)] + (pts if u.finite else pts[:40])
        return any(u.add(x, z) == y for z in cands)

    total = all(below(x, y) or below(y, x) for x in pts for y in pts)
    fibers = {}
    for x in pts:
        if u.is_tangible(x):
            fibers.setdefault(u.ghost(x), set()).add(x)
    single = all(len(s) <= 1 for s in fibers.values())
    return total, single


# -- supervaluations ----------------------------------------------------------------------

@dataclass(frozen=True)
class Supervaluation:
    source: object
    target: Supertropical
    table: tuple | None = None
    fn: object = None
    name: str = "φ"
    tangible_section: object = None
    ghost_section: object = None
    w: object = None
    v: object = None

    def __call__(self, a):
        if self.table is not None:
            return self.table[a]
        return self.fn(a)

    def points(self, budget=400, seed=0):
        if self.source.finite:
            return list(self.source.elements())
        return self.source.sample(budget, seed)

    def pairs(self, budget=1000, seed=0):
        return self.source.pairs(budget, seed)

    def dump(self):
        u = self.target
        out = []
        for a in self.source.elements():
            y = self(a)
            kind = "g" if u.is_ghost(y) else "t"
            out.append(f"{self.source.fmt(a)} -> ({kind}, {u.fmt(y)})")
        return out

    def renamed(self, name):
        return Supervaluation(self.source, self.target, self.table, self.fn, name,
                              self.tangible_section, self.ghost_section, self.w, self.v)


@dataclass
class SupervaluationReport:
    tangible: bool
    ultrametric: bool
    constants: list
    exhaustive: bool
    covers_mvaluation: bool
    note: str = ""
    witness: tuple | None = None

    def lines(self, fmt=str):
        consts = ", ".join(fmt(c) for c in self.constants) or "none"
        status = "exhaustive" if self.exhaustive else "sampled"
        out = [f"tangible: {'yes' if self.tangible else 'no'}",
               f"ultrametric: {'yes' if self.ultrametric else 'no'}",
               f"artinian constants ({status}): {consts}"]
        if self.note:
            out.append(f"note: {self.note}")
        return out


def artinian_violation(phi, c, budget=1000, seed=0):
    """First pair with ``φ(a+b) > c·max(φ(a), φ(b))``, or ``None``."""
    u, s = phi.target, phi.source
    for a, b in phi.pairs(budget, seed):
        if not u.le(phi(s.add(a, b)), u.mul(c, u.max(phi(a), phi(b)))):
            return (s.fmt(a), s.fmt(b))
    return None


def is_supervaluation(phi, budget=1000, seed=0):
    """``φ(0)=0``, ``φ(1)=1``, multiplicative, and ``eφ`` an m-valuation into ``eU``."""
    u, s = phi.target, phi.source
    if phi(s.zero) != u.zero or phi(s.one) != u.one:
        return False
    for a, b in phi.pairs(budget, seed):
        if phi(s.mul(a, b)) != u.mul(phi(a), phi(b)):
            return False
        ga, gb, gs = u.ghost(phi(a)), u.ghost(phi(b)), u.ghost(phi(s.add(a, b)))
        if u.add(gs, u.add(ga, gb)) != u.add(ga, gb):
            return False
    return True


def classify_supervaluation(phi, budget=1000, seed=0):
    u, s = phi.target, phi.source
    if not u.ordered:
        raise PreconditionError("classification needs an ordered target")
    pts = phi.points(budget, seed)
    tangible = all(not u.is_ghost(phi(a)) or phi(a) == u.zero for a in pts)
    ultra = artinian_violation(phi, u.one, budget, seed) is None
    covers = is_supervaluation(phi, budget, seed)
    exhaustive = s.finite and u.finite
    note = ""
    if u.finite:
        consts = [c for c in u.units() if artinian_violation(phi, c, budget, seed) is None]
        consts.sort(key=functools.cmp_to_key(
            lambda x, y: 0 if x == y else (-1 if u.le(x, y) else 1)))
    else:
        consts, note = _graded_constant(phi, budget, seed)
    return SupervaluationReport(tangible, ultra, consts, exhaustive, covers, note)


def _graded_constant(phi, budget, seed):
    """Least tangible unit dominating the sampled defect ``φ(a+b) / max``."""
    u, s = phi.target, phi.source
    oc = u.parts
    if oc is None:
        return [], "no structure to search constants"
    T = oc.T
    best = T.one
    for a, b in phi.pairs(budget, seed):
        top, m = phi(s.add(a, b)), u.max(phi(a), phi(b))
        if top[0] != "t" or m[0] != "t":
            if u.le(top, m):
                continue
            return [], "non-tangible values; no sampled bound"
        ratio = T.mul(top[1], T.inverse(m[1]))
        if T.lt(best, ratio):
            best = ratio
    c = oc.tangible(best)
    if artinian_violation(phi, c, budget, seed) is not None:
        raise TheoremViolation("sampled artinian bound fails its own check")
    return [c], f"sampled bound over {budget} pairs"


def supervaluation_from_mult_map(w, rho, name="φ", budget=1000, seed=0):
    """Tangible supervaluation ``a -> w(a)`` into ``OSTR(N∖0, M∖0, rho)``.

    ``w: R -> N`` is 0-1-multiplicative, ``rho: N -> M`` a homomorphism into
    a cancellative bipotent semiring with trivial kernel.  When ``w`` is an
    m-valuation the result is asserted ultrametric.
    """
    N, M = w.target, rho.target
    if not M.is_cancellative():
        raise PreconditionError(f"{M.name} is not cancellative")
    npts = list(N.elements()) if N.finite else N.sample(200, seed)
    for y in npts:
        if y != N.zero and rho(y) == M.zero:
            raise PreconditionError(f"rho has nontrivial kernel ({N.fmt(y)})")
    if N.finite and M.finite:
        if not is_homomorphism(N.base, M.base, rho.table):
            raise PreconditionError("rho is not a semiring homomorphism")
    else:
        for y, z in N.base.pairs(budget, seed):
            if rho(N.add(y, z)) != M.add(rho(y), rho(z)) or \
                    rho(N.mul(y, z)) != M.mul(rho(y), rho(z)):
                raise PreconditionError("rho is not a homomorphism on the sample")
    oc = OstrCarrier(N, M, rho, f"U({w.source.name},{w.name})")
    s = w.source
    if oc.finite:
        u = tabulate(oc)
        index = {x: i for i, x in enumerate(u.decode)}
        table = tuple(index[oc.tangible(w(a))] for a in s.elements())
        phi = Supervaluation(s, u, table, name=name, w=w)
    else:
        u = Supertropical(oc, oc.le, parts=oc)
        wsec = w.section
        phi = Supervaluation(
            s, u, None, lambda a: oc.tangible(w(a)), name,
            tangible_section=(lambda x: wsec(x[1])) if wsec else None,
            ghost_section=None, w=w)
    verify_supertropical(u.base, budget, seed)
    verify_total_order(u, budget=budget, seed=seed)
    pts = phi.points(min(budget, 400), seed)
    for a in pts:
        y = phi(a)
        if u.is_ghost(y) and y != u.zero:
            raise TheoremViolation("construction produced a ghost value", (s.fmt(a),))
        g = u.ghost(y)
        expected = oc.ghost_of(rho(w(a)))
        if (u.decode[g] if oc.finite else g) != expected:
            raise TheoremViolation("e∘φ differs from rho∘w", (s.fmt(a),))
    if w.kind in (val.MVALUATION, val.VALUATION):
        wit = artinian_violation(phi, u.one, budget, seed)
        if wit is not None:
            raise TheoremViolation("construction is not ultrametric", wit)
    return phi


def read_back(phi):
    """The m-valuation ``a -> tangible part of φ(a)`` (finite pipelines)."""
    u = phi.target
    if u.decode is None:
        raise PreconditionError("read-back needs a tabulated OSTR target")
    oc = u.parts
    N = oc.T

    def back(x):
        kind, n = u.decode[x]
        if kind == "g":
            raise TheoremViolation("ghost value in a tangible supervaluation")
        return N.zero if kind == "0" else n

    table = tuple(back(phi(a)) for a in phi.source.elements())
    return val.MultMap(phi.source, N, val.MVALUATION, table, name=f"{phi.name}→w")


def order_equivalent(w1, w2):
    """Order-preserving isomorphism between the images with ``γ∘w1 = w2``."""
    return val.equivalence(w1, w2) is not None


# -- the pipelines from colon-set valuations ------------------------------------------------

def cancel_projection(target):
    """``π_C`` on a bipotent target as a ``MultMap`` (identity when already
    cancellative)."""
    q = cancellative_quotient(target)
    if not q.classes:
        b = q.quotient
        return val.MultMap(b, b, val.HOMOMORPHISM, None, lambda y: y, lambda y: y, name="π_C")
    return val.MultMap(target.base, q.quotient, val.HOMOMORPHISM, q.projection, name="π_C")


def phi_of_subset(c, L, budget=1000, seed=0):
    """``φ_p`` / ``φ_A``: colon-set valuation followed by ``π_C``."""
    w = val.quotient_valuation(c, L, budget, seed)
    rho = cancel_projection(w.target)
    label = "φ_" + ("p" if L.side == "prime" else "A")
    return supervaluation_from_mult_map(w, rho, label, budget, seed)


def build_phi_L(c, L, u, side="Q", budget=1000, seed=0):
    """``φ_{L,u}`` (side ``Q``) or ``ψ_{L,u}`` (side ``B``)."""
    if L.kind == val.INVALID:
        raise PreconditionError("subset is INVALID")
    if not L.is_true:
        raise PreconditionError("L not true (exponent 1 admitted)")
    env = val.envelope_core(c, L, u, budget, seed)
    if side == "B" and not env.B.proper:
        raise PreconditionError("B_u(L) = R")
    K = env.Q if side == "Q" else env.B
    w = val.quotient_valuation(c, L, budget, seed)
    vK = val.quotient_valuation(c, K, budget, seed)
    pi = cancel_projection(vK.target)
    v = vK.then(pi, name=f"{vK.name}/C") if vK.table is not None else vK
    dom = val.dominates(w, v, budget, seed)
    if not dom.holds or dom.gamma is None:
        raise TheoremViolation("v_L does not dominate the covered valuation")
    name = ("φ" if side == "Q" else "ψ") + "_{L,u}"
    phi = supervaluation_from_mult_map(w, dom.gamma, name, budget, seed)
    if not c.finite:
        vsec = v.section
        phi = Supervaluation(phi.source, phi.target, None, phi.fn, name,
                             phi.tangible_section,
                             (lambda x: vsec(x[1])) if vsec else None, w, v)
    uinv = c.inverse(u)
    const = phi(uinv)
    wit = artinian_violation(phi, const, budget, seed)
    if wit is not None:
        raise TheoremViolation("not artinian with constant φ(1/u)", wit)
    return phi


# -- Prop: units above e force artinian rules -------------------------------------------------

@dataclass
class ArtinianSubsetsReport:
    hypotheses: list
    checks: dict = field(default_factory=dict)

    @property
    def hypothesis_met(self):
        return not self.hypotheses

    @property
    def ok(self):
        return all(self.checks.values())


def check_artinian_subsets(phi, c, uu, budget=1000, seed=0):
    """For a unit ``c > e`` with ``φ(uu) <= c⁻¹``: ``φ`` is artinian with
    constant ``c`` and ``{φ < 1}``, ``{φ <= 1}`` admit the exponent ``uu``."""
    u, s = phi.target, phi.source
    hyp = []
    if not u.is_unit(c):
        hyp.append(f"{u.fmt(c)} is not a unit")
    elif not u.lt(u.e, c):
        hyp.append(f"{u.fmt(c)} is not > e")
    if u.finite and not any(u.lt(u.e, x) for x in u.units()):
        hyp.append(f"{u.name} has no unit > e")
    if not s.is_unit(uu):
        hyp.append(f"{s.fmt(uu)} is not a unit of the source")
    elif not hyp and not u.le(phi(uu), u.inverse(c)):
        hyp.append(f"φ({s.fmt(uu)}) > 1/{u.fmt(c)}")
    report = ArtinianSubsetsReport(hyp)
    if hyp:
        return report
    report.checks["artinian with constant c"] = artinian_violation(phi, c, budget, seed) is None
    below = [a for a in phi.points(budget, seed)]
    if s.finite:
        p = frozenset(a for a in below if u.lt(phi(a), u.one))
        A = frozenset(a for a in below if u.le(phi(a), u.one))
        pw = val.classify_subset(s, p, as_kind="prime")
        Aw = val.classify_subset(s, A, as_kind="cmc")
    else:
        p = rf.PredicateSet(lambda a: u.lt(phi(a), u.one), "{φ < 1}")
        A = rf.PredicateSet(lambda a: u.le(phi(a), u.one), "{φ <= 1}")
        pw = val.classify_subset(s, p, "prime", uu, budget, seed)
        Aw = val.classify_subset(s, A, "cmc", uu, budget, seed)
    report.checks["p_φ prime subset with exponent uu"] = (
        pw.kind in (val.PRIME, val.PRIME_SUBSET) and uu in pw.exponents)
    report.checks["A_φ CMC-subset with exponent uu"] = (
        Aw.kind in (val.CMC_SUBSEMIRING, val.CMC_SUBSET) and uu in Aw.exponents)
    if not report.ok:
        bad = [k for k, ok in report.checks.items() if not ok]
        raise TheoremViolation(f"unit above e: {', '.join(bad)}")
    return report


# -- transmissions ----------------------------------------------------------------------

@dataclass
class TransmissionReport:
    multiplicative: bool
    preserves_units: bool
    transmission: bool
    homomorphism: bool
    monotone: bool | None
    witnesses: dict = field(default_factory=dict)
    exhaustive: bool = True

    def lines(self):
        def yn(b):
            return "n/a" if b is None else ("yes" if b else "no")
        out = [f"multiplicative: {yn(self.multiplicative)}",
               f"0, 1, e preserved: {yn(self.preserves_units)}",
               f"transmission: {yn(self.transmission)}",
               f"homomorphism: {yn(self.homomorphism)}",
               f"monotone: {yn(self.monotone)}"]
        for k in sorted(self.witnesses):
            out.append(f"  {k} witness: {' '.join(self.witnesses[k])}")
        return out


def _as_fn(alpha):
    if callable(alpha):
        return alpha
    if isinstance(alpha, dict):
        return alpha.__getitem__
    return lambda x: alpha[x]


def transmission_flags(alpha, U, V, budget=1000, seed=0):
    """All flags by definition, without asserting anything."""
    f = _as_fn(alpha)
    wit = {}
    pairs = U.pairs(budget, seed)

    def first(pred, label):
        for x, y in pairs:
            if not pred(x, y):
                wit[label] = (U.fmt(x), U.fmt(y))
                return False
        return True

    mult = first(lambda x, y: f(U.mul(x, y)) == V.mul(f(x), f(y)), "multiplicative")
    units = f(U.zero) == V.zero and f(U.one) == V.one and f(U.e) == V.e
    if not units:
        wit["0, 1, e"] = tuple(U.fmt(x) for x in (U.zero, U.one, U.e)
                               if f(x) != {U.zero: V.zero, U.one: V.one, U.e: V.e}[x])
    ghost_add = first(lambda x, y: f(U.add(U.ghost(x), U.ghost(y))) ==
                      V.add(f(U.ghost(x)), f(U.ghost(y))), "ghost additivity")
    hom = units and mult and first(
        lambda x, y: f(U.add(x, y)) == V.add(f(x), f(y)), "additive")
    mono = None
    if U.ordered and V.ordered:
        mono = first(lambda x, y: not U.le(x, y) or V.le(f(x), f(y)), "monotone")
    return TransmissionReport(mult, units, mult and units and ghost_add, hom, mono, wit,
                              U.finite)


def check_transmission(alpha, U, V, budget=1000, seed=0):
    """Flags, plus the equivalence of the three conditions for multiplicative
    order-preserving maps between ordered semirings."""
    r = transmission_flags(alpha, U, V, budget, seed)
    if r.monotone and r.multiplicative:
        if not (r.preserves_units == r.homomorphism == r.transmission):
            raise TheoremViolation("monotone multiplicative map: 0/1/e, homomorphism and "
                                   "transmission flags disagree")
    return r


def monotone_maps(U, V):
    """All order-preserving maps ``U -> V`` between finite ordered carriers,
    as tables indexed by ``U`` elements."""
    cu, cv = U.chain(), V.chain()
    n = len(cu)
    out = []
    for combo in combinations_with_replacement(range(len(cv)), n):
        table = [None] * n
        for x, k in zip(cu, combo):
            table[x] = cv[k]
        out.append(tuple(table))
    return out


def model_check_transmissions(U, V):
    """``(maps examined, discrepancies)`` over multiplicative monotone maps,
    a discrepancy being a map where preserving ``0, 1, e``, being a
    homomorphism and being a transmission do not all agree."""
    examined, bad = 0, []
    for t in monotone_maps(U, V):
        r = transmission_flags(t, U, V)
        if not r.multiplicative:
            continue
        examined += 1
        if not (r.preserves_units == r.homomorphism == r.transmission):
            bad.append(t)
    return examined, bad


# -- dominance ---------------------------------------------------------------------------

PLAIN = "PLAIN"
TOTAL = "TOTAL"


@dataclass
class DominanceVerdict:
    mode: str
    holds: bool
    clauses: dict
    witnesses: dict
    exhaustive: bool
    alpha: object = None
    transmission: TransmissionReport | None = None
    note: str = ""

    def lines(self):
        out = [f"{self.mode} dominance: {'yes' if self.holds else 'no'}"
               f" ({'exhaustive' if self.exhaustive else 'sampled'})"]
        for k in ("D1", "D2", "D3", "D1'", "D2'"):
            mark = "yes" if self.clauses[k] else "no"
            wit = self.witnesses.get(k)
            out.append(f"  {k}: {mark}" + (f" (witness {' '.join(wit)})" if wit else ""))
        if self.transmission is not None:
            out += ["  " + line for line in self.transmission.lines()]
        if self.note:
            out.append(f"  note: {self.note}")
        return out


def dominance(phi, psi, mode=TOTAL, budget=1000, seed=0):
    U, V, s = phi.target, psi.target, phi.source
    if mode == TOTAL and not (U.ordered and V.ordered):
        raise PreconditionError("total dominance needs ordered targets")
    if s.finite:
        pts = list(s.elements())
        pairs = [(a, b) for a in pts for b in pts]
    else:
        pts = s.sample(min(budget, 400), seed)
        pairs = s.pairs(budget, seed)
    clauses = {k: True for k in ("D1", "D2", "D3", "D1'", "D2'")}
    wit = {}

    def fail(k, *els):
        if clauses[k]:
            clauses[k] = False
            wit[k] = tuple(s.fmt(a) for a in els)

    for a in pts:
        if U.is_ghost(phi(a)) and not V.is_ghost(psi(a)):
            fail("D3", a)
    for a, b in pairs:
        fa, fb, ga, gb = phi(a), phi(b), psi(a), psi(b)
        ea, eb = U.ghost(fa), U.ghost(fb)
        if fa == fb and ga != gb:
            fail("D1", a, b)
        if U.le(ea, eb) and not V.le(V.ghost(ga), V.ghost(gb)):
            fail("D2", a, b)
        if U.ordered and V.ordered and U.le(fa, fb) and not V.le(ga, gb):
            fail("D1'", a, b)
        if ea == eb and V.ghost(ga) != V.ghost(gb):
            fail("D2'", a, b)
    if clauses["D1'"] and clauses["D2'"] and not clauses["D2"]:
        raise TheoremViolation("D1' and D2' hold but D2 fails", wit["D2"])
    total = clauses["D1'"] and clauses["D2'"] and clauses["D3"]
    plain = clauses["D1"] and clauses["D2"] and clauses["D3"]
    if total and not plain:
        raise TheoremViolation("total dominance without plain dominance")
    holds = total if mode == TOTAL else plain
    verdict = DominanceVerdict(mode, holds, clauses, wit, s.finite)
    if holds:
        alpha, note = induced_transmission(phi, psi, budget, seed)
        verdict.alpha, verdict.note = alpha, note
        if alpha is not None:
            r = check_transmission(alpha, U, V, budget, seed)
            verdict.transmission = r
            if not is_surjective(phi):
                verdict.note = (note + "; " if note else "") + \
                    "φ not surjective: monotonicity not forced"
            elif not r.transmission or (mode == TOTAL and not r.monotone):
                raise TheoremViolation(f"{mode} dominance not realized by a "
                                       f"{'monotone ' if mode == TOTAL else ''}transmission")
    return verdict


def is_surjective(phi):
    """``φ(R) = U``; tangible-valued maps into a carrier with nonzero ghosts
    never are."""
    U = phi.target
    if phi.source.finite and U.finite:
        return {phi(a) for a in phi.source.elements()} == set(U.elements())
    return False


def induced_transmission(phi, psi, budget=1000, seed=0):
    """``α`` with ``α∘φ = ψ`` and ``α(eφ(a)) = eψ(a)``; ``None`` when ``φ``
    and ``eφ`` do not cover the target."""
    U, V, s = phi.target, psi.target, phi.source
    if s.finite and U.finite:
        alpha = {U.zero: V.zero}
        for a in s.elements():
            for x, y in ((phi(a), psi(a)), (U.ghost(phi(a)), V.ghost(psi(a)))):
                if alpha.setdefault(x, y) != y:
                    raise TheoremViolation("induced map is not well defined", (s.fmt(a),))
        if len(alpha) != len(U.base.names):
            missing = [U.fmt(x) for x in U.elements() if x not in alpha]
            return None, f"φ does not cover {' '.join(missing)}"
        return tuple(alpha[x] for x in U.elements()), ""
    tsec, gsec = phi.tangible_section, phi.ghost_section
    if tsec is None or gsec is None:
        return None, "no sections to build the transmission"

    def alpha(x):
        if x == U.zero:
            return V.zero
        if U.is_ghost(x):
            return V.ghost(psi(gsec(x)))
        return psi(tsec(x))

    for a in s.sample(min(budget, 400), seed):
        if alpha(phi(a)) != psi(a) or alpha(U.ghost(phi(a))) != V.ghost(psi(a)):
            raise TheoremViolation("induced transmission disagrees on the sample", (s.fmt(a),))
    return alpha, "sampled"


# -- total dominance between pipelines with different exponents ---------------------------------

@dataclass
class ExponentShiftReport:
    hypotheses: list
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.hypotheses and all(self.checks.values())


def check_exponent_shift(c, L, u, g, budget=1000, seed=0):
    """Exponent ``f = ug`` for ``g`` a unit in ``L``; envelope/core relations
    and total dominance ``φ_{L,u} >= φ_{L,f}`` (and for ``ψ`` when ``B_f ≠ R``)."""
    hyp = []
    if not c.is_unit(g):
        hyp.append(f"{c.fmt(g)} is not a unit")
    elif g not in L.members:
        hyp.append(f"{c.fmt(g)} is not in L")
    if not L.is_true:
        hyp.append("L not true")
    report = ExponentShiftReport(hyp)
    if hyp:
        return report
    f = c.mul(u, g)
    if c.finite:
        fw = val.classify_subset(c, L.members)
        report.checks["f is an exponent"] = f in fw.exponents
        Lf = fw
    else:
        Lf = val.classify_subset(c, L.members, L.side, f, budget, seed)
        report.checks["f is an exponent"] = f in Lf.exponents
    if not report.checks["f is an exponent"]:
        raise TheoremViolation("ug is not an exponent of L")
    env_u = val.envelope_core(c, L, u, budget, seed)
    env_f = val.envelope_core(c, Lf, f, budget, seed)
    B, Q, B2, Q2 = env_u.B.members, env_u.Q.members, env_f.B.members, env_f.Q.members
    if c.finite:
        d = val._unit_order(c, g)
        gp = [c.power(g, k) for k in range(d)]
        ginv = [c.inverse(x) for x in gp]
        report.checks["B' = union g^-n B"] = B2 == frozenset(c.mul(h, x) for h in ginv for x in B)
        report.checks["Q' = intersection g^n Q"] = Q2 == frozenset.intersection(
            *[frozenset(c.mul(h, x) for x in Q) for h in gp])
    else:
        pts = c.sample(max(budget, 1000), seed)
        okB = okQ = True
        for x in pts:
            inB, _ = val.truncated_envelope_member(x, B, g)
            _, inQ = val.truncated_envelope_member(x, Q, g)
            okB &= inB == (x in B2)
            okQ &= inQ == (x in Q2)
        report.checks["B' = union g^-n B"] = okB
        report.checks["Q' = intersection g^n Q"] = okQ
    if not all(report.checks.values()):
        bad = [k for k, ok in report.checks.items() if not ok]
        raise TheoremViolation(f"exponent change: {', '.join(bad)}")
    phi_u = build_phi_L(c, L, u, "Q", budget, seed)
    phi_f = build_phi_L(c, Lf, f, "Q", budget, seed)
    report.checks["φ_{L,u} >= φ_{L,f} totally"] = dominance(phi_u, phi_f, TOTAL,
                                                          budget, seed).holds
    if env_f.B.proper:
        psi_u = build_phi_L(c, L, u, "B", budget, seed)
        psi_f = build_phi_L(c, Lf, f, "B", budget, seed)
        report.checks["ψ_{L,u} >= ψ_{L,f} totally"] = dominance(psi_u, psi_f, TOTAL,
                                                              budget, seed).holds
    else:
        report.notes.append("B' = R: ψ comparison not applicable")
    if not all(report.checks.values()):
        bad = [k for k, ok in report.checks.items() if not ok]
        raise TheoremViolation(f"exponent change: {', '.join(bad)}")
    return report


def is_ratfunc(c):
    return isinstance(c, RatFuncField)


def u4_isomorphic(u, fixture):
    """Isomorphism of tables that also respects the declared orders."""
    f = find_isomorphism(u.base, fixture)
    if f is None:
        return False
    ru = {x: i for i, x in enumerate(u.base.order)}
    rv = {x: i for i, x in enumerate(fixture.order)}
    return all((ru[x] <= ru[y]) == (rv[f[x]] <= rv[f[y]])
               for x in u.elements() for y in u.elements())


def random_pairs(pool, count, seed):
    rng = random.Random(seed)
    return [(rng.choice(pool), rng.choice(pool)) for _ in range(count)]
