"""Maps between finite semirings: homomorphism search, isomorphism, quotients.

Everything here works on ``FiniteSemiring`` tables and is exhaustive.
"""

from __future__ import annotations

import random
from itertools import permutations, product

from .carriers import FiniteSemiring
from .errors import CheckFailed, PreconditionError


def is_homomorphism(a, b, f):
    """``f`` is a table (tuple indexed by elements of ``a``)."""
    if f[a.zero] != b.zero or f[a.one] != b.one:
        return False
    for x in a.elements():
        fx = f[x]
        for y in a.elements():
            if f[a.add(x, y)] != b.add(fx, f[y]) or f[a.mul(x, y)] != b.mul(fx, f[y]):
                return False
    return True


def homomorphism_witness(a, b, f):
    """First violated clause as ``(label, elements)``, or ``None``."""
    if f[a.zero] != b.zero:
        return ("zero", (a.zero,))
    if f[a.one] != b.one:
        return ("one", (a.one,))
    for x in a.elements():
        for y in a.elements():
            if f[a.add(x, y)] != b.add(f[x], f[y]):
                return ("add", (x, y))
            if f[a.mul(x, y)] != b.mul(f[x], f[y]):
                return ("mul", (x, y))
    return None


def homomorphisms(a, b):
    """All semiring homomorphisms ``a -> b`` as tables, by backtracking.

    Elements are assigned in index order; a partial assignment is pruned
    as soon as a sum or product of assigned elements lands on an assigned
    element with the wrong image.
    """
    n = len(a.names)
    f = [None] * n
    f[a.zero] = b.zero
    if f[a.one] is not None and f[a.one] != b.one:
        return []
    f[a.one] = b.one
    order = [x for x in range(n) if f[x] is None]
    out = []

    def consistent(x):
        fx = f[x]
        for y in range(n):
            fy = f[y]
            if fy is None:
                continue
            s, p = a.add(x, y), a.mul(x, y)
            if f[s] is not None and f[s] != b.add(fx, fy):
                return False
            if f[p] is not None and f[p] != b.mul(fx, fy):
                return False
        return True

    def go(i):
        if i == len(order):
            t = tuple(f)
            if is_homomorphism(a, b, t):
                out.append(t)
            return
        x = order[i]
        for v in b.elements():
            f[x] = v
            if consistent(x):
                go(i + 1)
        f[x] = None

    if not (consistent(a.zero) and consistent(a.one)):
        return []
    go(0)
    return out


def random_maps(a, b, count, seed=0):
    """Seeded random tables fixing 0 and 1; used when enumeration is too large."""
    rng = random.Random(seed)
    n, m = len(a.names), len(b.names)
    for _ in range(count):
        f = [rng.randrange(m) for _ in range(n)]
        f[a.zero], f[a.one] = b.zero, b.one
        yield tuple(f)


def find_isomorphism(a, b):
    """An isomorphism table ``a -> b`` or ``None``."""
    if len(a.names) != len(b.names):
        return None
    n = len(a.names)

    def invariant(c, x):
        sq = c.mul(x, x)
        return (x == c.zero, x == c.one, sq == x, c.add(x, x) == x,
                sum(1 for y in c.elements() if c.mul(x, y) == x),
                sum(1 for y in c.elements() if c.add(x, y) == x))

    inv_b = {}
    for y in b.elements():
        inv_b.setdefault(invariant(b, y), []).append(y)
    choices = []
    for x in a.elements():
        cand = inv_b.get(invariant(a, x))
        if not cand:
            return None
        choices.append(cand)
    if n > 9:
        raise PreconditionError("isomorphism search limited to 9 elements")
    for f in product(*choices):
        if len(set(f)) == n and is_homomorphism(a, b, f):
            return f
    return None


def _check_partition(n, classes):
    seen = sorted(x for cls in classes for x in cls)
    if seen != list(range(n)):
        raise PreconditionError("classes do not partition the elements")


def canonical_classes(classes):
    return tuple(sorted((frozenset(c) for c in classes), key=min))


def class_map(n, classes):
    proj = [None] * n
    for i, cls in enumerate(classes):
        for x in cls:
            proj[x] = i
    return tuple(proj)


def congruence_quotient(c, classes, name=None):
    """Quotient of ``c`` by a partition that must be a congruence.

    Classes are named after their minimal-index representative.  Returns
    ``(quotient, projection)`` where ``projection[x]`` is the class index.
    Raises ``CheckFailed`` with a witness if the partition is not
    compatible with ``+`` or ``*``.
    """
    n = len(c.names)
    classes = canonical_classes(classes)
    _check_partition(n, classes)
    proj = class_map(n, classes)
    k = len(classes)
    reps = [min(cls) for cls in classes]
    add = [[None] * k for _ in range(k)]
    mul = [[None] * k for _ in range(k)]
    for x in range(n):
        for y in range(n):
            i, j = proj[x], proj[y]
            for table, op, label in ((add, c.add, "add"), (mul, c.mul, "mul")):
                v = proj[op(x, y)]
                if table[i][j] is None:
                    table[i][j] = v
                elif table[i][j] != v:
                    raise CheckFailed(f"partition is not compatible with {label}",
                                      (c.names[x], c.names[y]))
    if k < 2:
        raise CheckFailed("quotient collapses to the zero ring")
    q = FiniteSemiring(name or f"{c.name}/~", tuple(c.names[r] for r in reps),
                       proj[c.zero], proj[c.one],
                       tuple(map(tuple, add)), tuple(map(tuple, mul)))
    return q, proj


def ordered_quotient(c, classes, rank, name=None):
    """Bipotent quotient of the multiplicative monoid of ``c``.

    ``classes`` must be compatible with multiplication; ``rank[i]`` orders
    the classes and addition on the quotient is the maximum.
    """
    n = len(c.names)
    classes = canonical_classes(classes)
    _check_partition(n, classes)
    proj = class_map(n, classes)
    k = len(classes)
    reps = [min(cls) for cls in classes]
    if sorted(rank) != list(range(k)):
        raise PreconditionError("rank must be a permutation of the classes")
    mul = [[None] * k for _ in range(k)]
    for x in range(n):
        for y in range(n):
            i, j = proj[x], proj[y]
            v = proj[c.mul(x, y)]
            if mul[i][j] is None:
                mul[i][j] = v
            elif mul[i][j] != v:
                raise CheckFailed("partition is not multiplicative",
                                  (c.names[x], c.names[y]))
    add = tuple(tuple(i if rank[i] >= rank[j] else j for j in range(k)) for i in range(k))
    q = FiniteSemiring(name or f"{c.name}/~", tuple(c.names[r] for r in reps),
                       proj[c.zero], proj[c.one], add, tuple(map(tuple, mul)))
    return q, proj
