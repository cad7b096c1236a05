"""Order-compatible multiplicative equivalences on ordered supertropical
semirings and their quotients.

Finite carriers carry an explicit partition; graded carriers carry a
canonical-representative function instead and are checked on samples.
"""

from __future__ import annotations

from dataclasses import dataclass

from .carriers import Carrier, FiniteSemiring
from .errors import CheckFailed, PreconditionError, TheoremViolation
from .morphisms import canonical_classes, class_map
from .supertropical import (Supertropical, check_transmission, verify_supertropical,
                            verify_total_order)


@dataclass
class OcteRelation:
    carrier: Supertropical
    classes: tuple | None = None
    rep: object = None
    degenerate: bool = False
    exhaustive: bool = True
    label: str = "E"

    def related(self, x, y):
        if self.classes is not None:
            return self._proj[x] == self._proj[y]
        return self.rep(x) == self.rep(y)

    @property
    def _proj(self):
        return class_map(len(self.carrier.base.names), self.classes)

    def nonzero_classes(self):
        u = self.carrier
        if self.classes is None:
            return None
        return sum(1 for cls in self.classes if u.zero not in cls)

    def fmt_classes(self):
        u = self.carrier
        chain = {x: i for i, x in enumerate(u.chain())}
        return " ".join("{" + " ".join(u.fmt(x) for x in sorted(cls, key=chain.get)) + "}"
                        for cls in self.classes)


def _chain_pos(u):
    return {x: i for i, x in enumerate(u.chain())}


def _is_degenerate(u, classes):
    return sum(1 for cls in classes if u.zero not in cls) <= 1


def verify_octe(u, partition, label="E"):
    """Partition of a finite ordered carrier -> ``OcteRelation`` or ``CheckFailed``.

    Checks multiplicativity and convexity of every class, then the derived
    kernel rule ``ex ~ 0 => x ~ 0``.
    """
    if not u.ordered:
        u = verify_total_order(u)
    n = len(u.base.names)
    classes = canonical_classes(partition)
    if sorted(x for cls in classes for x in cls) != list(range(n)):
        raise PreconditionError("partition does not cover the carrier exactly once")
    proj = class_map(n, classes)
    els = list(u.elements())
    for x in els:
        for y in els:
            if proj[x] != proj[y] or x >= y:
                continue
            for z in els:
                if proj[u.mul(x, z)] != proj[u.mul(y, z)]:
                    raise CheckFailed("relation is not multiplicative",
                                      tuple(u.fmt(w) for w in (x, y, z)))
    pos = _chain_pos(u)
    chain = u.chain()
    for cls in classes:
        lo, hi = min(pos[x] for x in cls), max(pos[x] for x in cls)
        for k in range(lo, hi + 1):
            if chain[k] not in cls:
                a = min(cls, key=pos.get)
                b = max(cls, key=pos.get)
                raise CheckFailed("class is not convex",
                                  (u.fmt(a), u.fmt(chain[k]), u.fmt(b)))
    for x in els:
        if proj[u.ghost(x)] == proj[u.zero] and proj[x] != proj[u.zero]:
            raise TheoremViolation("order-compatible relation violates ex ~ 0 => x ~ 0",
                                   (u.fmt(x),))
    return OcteRelation(u, classes, degenerate=_is_degenerate(u, classes), label=label)


def verify_octe_rep(u, rep, budget=1000, seed=0, label="E"):
    """Sampled version for graded carriers: ``x ~ y`` iff ``rep(x) == rep(y)``."""
    pts = u.sample(min(budget, 400), seed)
    for x, y, z in u.triples(budget, seed):
        if rep(x) == rep(y) and rep(u.mul(x, z)) != rep(u.mul(y, z)):
            raise CheckFailed("relation is not multiplicative",
                              tuple(u.fmt(w) for w in (x, y, z)))
        lo, hi = (x, y) if u.le(x, y) else (y, x)
        if rep(lo) == rep(hi) and u.le(lo, z) and u.le(z, hi) and rep(z) != rep(lo):
            raise CheckFailed("class is not convex", tuple(u.fmt(w) for w in (lo, z, hi)))
    for x in pts:
        if rep(rep(x)) != rep(x):
            raise PreconditionError("rep is not idempotent", (u.fmt(x),))
        if rep(u.ghost(x)) == rep(u.zero) and rep(x) != rep(u.zero):
            raise TheoremViolation("order-compatible relation violates ex ~ 0 => x ~ 0",
                                   (u.fmt(x),))
    return OcteRelation(u, None, rep, exhaustive=False, label=label)


class QuotientCarrier(Carrier):
    """``U/E`` for a representative function on a graded carrier."""

    ordered = True
    finite = False

    def __init__(self, u, rep, name):
        self.u, self.rep, self.name = u, rep, name
        self.zero = rep(u.zero)
        self.one = rep(u.one)

    def add(self, x, y):
        return self.rep(self.u.add(x, y))

    def mul(self, x, y):
        return self.rep(self.u.mul(x, y))

    def le(self, x, y):
        return self.u.le(x, y)

    def is_unit(self, x):
        return self.u.is_unit(x) and self.rep(self.u.inverse(x)) == self.u.inverse(x)

    def inverse(self, x):
        return self.rep(self.u.inverse(x))

    def sample(self, n=200, seed=0):
        out, seen = [], set()
        for x in self.u.sample(3 * n, seed):
            r = self.rep(x)
            if r not in seen:
                seen.add(r)
                out.append(r)
            if len(out) == n:
                break
        return out

    def fmt(self, x):
        return f"[{self.u.fmt(x)}]"


@dataclass
class QuotientResult:
    quotient: Supertropical
    projection: object
    transmission: object
    degenerate: bool


def _class_name(u, cls, pos):
    if u.zero in cls:
        return "[0]"
    return f"[{u.fmt(max(cls, key=pos.get))}]"


def octe_quotient(rel, budget=1000, seed=0):
    """``U/E`` from the class rules, re-verified, with ``π_E`` checked."""
    u = rel.carrier
    if rel.classes is None:
        q = QuotientCarrier(u, rel.rep, f"{u.name}/{rel.label}")
        view = verify_supertropical(q, budget, seed)
        ordered = verify_total_order(view, budget=budget, seed=seed)
        pi = rel.rep
    else:
        classes = rel.classes
        if len(classes) < 2:
            raise PreconditionError("single-class relation: the quotient is the zero ring")
        pos = _chain_pos(u)
        n = len(u.base.names)
        proj = class_map(n, classes)
        k = len(classes)
        add = [[None] * k for _ in range(k)]
        mul = [[None] * k for _ in range(k)]
        for x in u.elements():
            for y in u.elements():
                for table, op in ((add, u.add), (mul, u.mul)):
                    v = proj[op(x, y)]
                    if table[proj[x]][proj[y]] not in (None, v):
                        raise TheoremViolation("class operations are not well defined",
                                               (u.fmt(x), u.fmt(y)))
                    table[proj[x]][proj[y]] = v
        order = sorted(range(k), key=lambda i: min(pos[x] for x in classes[i]))
        names = tuple(_class_name(u, cls, pos) for cls in classes)
        base = FiniteSemiring(f"{u.name}/{rel.label}", names, proj[u.zero], proj[u.one],
                              tuple(map(tuple, add)), tuple(map(tuple, mul)), tuple(order))
        view = verify_supertropical(base, budget, seed)
        ordered = verify_total_order(view, budget=budget, seed=seed)
        pi = proj
    report = check_transmission(pi, u, ordered, budget, seed)
    if not (report.transmission and report.homomorphism and report.monotone):
        raise TheoremViolation("projection onto the quotient is not a monotone transmission")
    return QuotientResult(ordered, pi, report, rel.degenerate)


# -- E(a) ----------------------------------------------------------------------------

@dataclass(frozen=True)
class GhostBound:
    """The subset ``{0} ∪ {x : ex <= bound}`` of a graded carrier."""

    bound: object

    def contains(self, u, x):
        return x == u.zero or u.le(u.ghost(x), self.bound)


def is_ideal(u, a, budget=1000, seed=0):
    """``None`` or a witness pair violating ``a + a ⊆ a`` / ``aU ⊆ a``."""
    if isinstance(a, GhostBound):
        pts = u.sample(min(budget, 400), seed)
        inside = [x for x in pts if a.contains(u, x)]
        for x in inside:
            for y in pts:
                if not a.contains(u, u.mul(x, y)):
                    return (u.fmt(x), u.fmt(y))
            for y in inside:
                if not a.contains(u, u.add(x, y)):
                    return (u.fmt(x), u.fmt(y))
        return None
    if u.zero not in a:
        return (u.fmt(u.zero),)
    for x in a:
        for y in u.elements():
            if u.mul(x, y) not in a:
                return (u.fmt(x), u.fmt(y))
        for y in a:
            if u.add(x, y) not in a:
                return (u.fmt(x), u.fmt(y))
    return None


def ideal_relation(u, a, budget=1000, seed=0):
    """``E(a)``: ``x ~ y`` iff ``x = y`` or both ``ex``, ``ey`` lie below some
    ``ea`` with ``a`` in the ideal."""
    if not u.ordered:
        u = verify_total_order(u, budget=budget, seed=seed)
    wit = is_ideal(u, a, budget, seed)
    if wit is not None:
        raise PreconditionError("not an ideal", wit)
    if isinstance(a, GhostBound):
        def low(x):
            return u.le(u.ghost(x), a.bound)

        def rep(x):
            return u.zero if low(x) else x
        rel = verify_octe_rep(u, rep, budget, seed, label="E(a)")
        rel.degenerate = False
        return rel
    ghosts = [u.ghost(x) for x in a]
    low = frozenset(x for x in u.elements() if any(u.le(u.ghost(x), g) for g in ghosts))
    classes = [low] + [frozenset({x}) for x in u.elements() if x not in low]
    rel = verify_octe(u, classes, label="E(a)")
    pos = _chain_pos(u)
    top_low = max(low, key=pos.get)
    if any(pos[x] < pos[top_low] and x not in low for x in u.elements()
           if u.le(u.ghost(x), u.ghost(top_low))):
        raise TheoremViolation("collapsed class of E(a) is not a lower set")
    return rel


# -- E(U, A, Phi) ---------------------------------------------------------------------

@dataclass
class FiberResult:
    relation: OcteRelation | None
    condition: str
    witness: tuple = ()

    @property
    def ok(self):
        return self.relation is not None


def _check_ghost_equivalence(u, ghosts, phi_classes):
    """Multiplicative, convex in ``eU``, and compatible with ``+``."""
    proj = {}
    for i, cls in enumerate(phi_classes):
        for x in cls:
            proj[x] = i
    if set(proj) != set(ghosts):
        raise PreconditionError("Φ does not partition eU")
    chain = [x for x in u.chain() if x in proj]
    for cls in phi_classes:
        idx = sorted(chain.index(x) for x in cls)
        if idx != list(range(idx[0], idx[-1] + 1)):
            raise PreconditionError("Φ class not convex in eU", tuple(u.fmt(x) for x in cls))
    for x in ghosts:
        for y in ghosts:
            if proj[x] != proj[y]:
                continue
            for z in ghosts:
                if proj[u.mul(x, z)] != proj[u.mul(y, z)]:
                    raise PreconditionError("Φ is not multiplicative",
                                            tuple(u.fmt(w) for w in (x, y, z)))
                if proj[u.add(x, z)] != proj[u.add(y, z)]:
                    raise PreconditionError("Φ is not additive",
                                            tuple(u.fmt(w) for w in (x, y, z)))
    return proj


def fiber_relation(u, A, phi_classes=None):
    """``E(U, A, Φ)`` when both fiber conditions hold; otherwise the failed
    condition with a witness.  ``phi_classes`` defaults to the diagonal."""
    if not u.ordered:
        u = verify_total_order(u)
    A = frozenset(A)
    ghosts = sorted({u.ghost(x) for x in u.elements()})
    wit = is_ideal(u, A)
    if wit is not None:
        raise PreconditionError("A is not an ideal", wit)
    if not set(ghosts) <= A:
        raise PreconditionError("A does not contain eU")
    if phi_classes is None:
        phi_classes = [frozenset({g}) for g in ghosts]
    proj = _check_ghost_equivalence(u, ghosts, [frozenset(c) for c in phi_classes])
    pos = _chain_pos(u)
    failure = None
    for x in ghosts:
        fiber = sorted((y for y in u.elements() if u.ghost(y) == x), key=pos.get)
        collapsed = any(proj[y] == proj[x] and u.lt(y, x) for y in ghosts)
        if collapsed:
            outside = [y for y in fiber if y not in A]
            if outside:
                failure = ("(1) fiber over a collapsed ghost leaves A",
                           (u.fmt(x), u.fmt(outside[0])))
                break
        else:
            for i, y in enumerate(fiber):
                if y in A and any(z not in A for z in fiber[i + 1:]):
                    z = next(z for z in fiber[i + 1:] if z not in A)
                    failure = ("(2) fiber ∩ A is not an upper set",
                               (u.fmt(y), u.fmt(z), u.fmt(x)))
                    break
            if failure:
                break
    els = list(u.elements())
    groups = {}
    for x in els:
        key = ("A", proj[u.ghost(x)]) if x in A else ("x", x)
        groups.setdefault(key, set()).add(x)
    classes = list(groups.values())
    try:
        rel = verify_octe(u, classes, label="E(U,A,Φ)")
    except CheckFailed:
        rel = None
    if failure is None:
        if rel is None:
            raise TheoremViolation("fiber conditions hold but E(U,A,Φ) is not order compatible")
        return FiberResult(rel, "conditions (1) and (2) hold")
    if rel is not None:
        raise TheoremViolation("E(U,A,Φ) is order compatible although "
                               f"condition {failure[0]} fails", failure[1])
    return FiberResult(None, failure[0], failure[1])


# -- kernels of surjective monotone transmissions -------------------------------------------------

def kernel_relation(alpha, U, V):
    """For a surjective monotone transmission ``α``: its kernel relation and
    the induced order isomorphism ``U/E -> V`` (as a dict on class names)."""
    f = alpha if callable(alpha) else alpha.__getitem__
    groups = {}
    for x in U.elements():
        groups.setdefault(f(x), set()).add(x)
    if set(groups) != set(V.elements()):
        raise PreconditionError("α is not surjective")
    rel = verify_octe(U, list(groups.values()), label="E(α)")
    if len(rel.classes) < 2:
        raise PreconditionError("α collapses everything")
    q = octe_quotient(rel)
    Q = q.quotient
    rho = {}
    for x in U.elements():
        rho[q.projection[x]] = f(x)
    for a in Q.elements():
        for b in Q.elements():
            if rho[Q.mul(a, b)] != V.mul(rho[a], rho[b]) or \
                    rho[Q.add(a, b)] != V.add(rho[a], rho[b]) or \
                    Q.le(a, b) != V.le(rho[a], rho[b]):
                raise TheoremViolation("induced map U/E -> V is not an order isomorphism")
    return rel, rho
