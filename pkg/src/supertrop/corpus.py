"""Seeded corpora of small semirings.

Elements are indices ``0 .. n-1`` with ``0`` the zero and ``1`` the unit.
Tables are found by backtracking over the entries not fixed by ``0``
and ``1``, pruning every associativity and distributivity instance as
soon as its lookups are defined.  Up to five elements the search is
exhaustive, so the "random" corpus is a seeded shuffle of all of them.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import permutations

from .bipotent import as_bipotent
from .carriers import FiniteSemiring, verify_semiring
from .errors import CheckFailed
from .supertropical import OstrCarrier, tabulate, verify_total_order

NAMES = ("0", "1", "a", "b", "c")


def _free_entries(n):
    return [(i, j) for i in range(2, n) for j in range(i, n)]


def _blank_mul(n):
    t = [[None] * n for _ in range(n)]
    for x in range(n):
        t[0][x] = t[x][0] = 0
        t[1][x] = t[x][1] = x
    return t


def _consistent(add, mul, n):
    """No fully defined instance of associativity or distributivity fails."""
    for x in range(n):
        for y in range(n):
            xy = mul[x][y]
            if xy is None:
                continue
            for z in range(n):
                yz = mul[y][z]
                if yz is not None:
                    left, right = mul[xy][z], mul[x][yz]
                    if left is not None and right is not None and left != right:
                        return False
                xz = mul[x][z]
                if xz is not None:
                    lhs = mul[x][add[y][z]]
                    if lhs is not None and lhs != add[xy][xz]:
                        return False
    return True


def multiplications(add, rng=None, limit=None, order_ok=None):
    """Commutative multiplications making ``add`` a semiring (generator).

    ``rng`` shuffles the value order; ``order_ok(mul)`` is an extra pruning
    predicate on partial tables.
    """
    n = len(add)
    free = _free_entries(n)
    mul = _blank_mul(n)
    found = 0

    def go(k):
        nonlocal found
        if limit is not None and found >= limit:
            return
        if k == len(free):
            found += 1
            yield tuple(map(tuple, mul))
            return
        i, j = free[k]
        vals = list(range(n))
        if rng is not None:
            rng.shuffle(vals)
        for v in vals:
            mul[i][j] = mul[j][i] = v
            if _consistent(add, mul, n) and (order_ok is None or order_ok(mul)):
                yield from go(k + 1)
            if limit is not None and found >= limit:
                break
        mul[i][j] = mul[j][i] = None

    yield from go(0)


def _assoc_consistent(t, n):
    for x in range(n):
        for y in range(n):
            xy = t[x][y]
            if xy is None:
                continue
            for z in range(n):
                yz = t[y][z]
                if yz is None:
                    continue
                a, b = t[xy][z], t[x][yz]
                if a is not None and b is not None and a != b:
                    return False
    return True


@lru_cache(maxsize=None)
def additive_monoids(n):
    """Every commutative monoid table on ``0..n-1`` with identity ``0``."""
    free = [(i, j) for i in range(1, n) for j in range(i, n)]
    t = [[None] * n for _ in range(n)]
    for x in range(n):
        t[0][x] = t[x][0] = x
    out = []

    def go(k):
        if k == len(free):
            out.append(tuple(map(tuple, t)))
            return
        i, j = free[k]
        for v in range(n):
            t[i][j] = t[j][i] = v
            if _assoc_consistent(t, n):
                go(k + 1)
        t[i][j] = t[j][i] = None

    go(0)
    return tuple(out)


def chain_addition(n, height):
    """``max`` for the chain ``0 < ...`` with ``1`` at position ``height``."""
    rank = chain_rank(n, height)
    return tuple(tuple(x if rank[x] >= rank[y] else y for y in range(n)) for x in range(n))


def chain_rank(n, height):
    others = [x for x in range(2, n)]
    order = [0] + others[:height - 1] + [1] + others[height - 1:]
    rank = [0] * n
    for pos, x in enumerate(order):
        rank[x] = pos
    return tuple(rank)


def _canonical(add, mul, n):
    best = None
    for perm in permutations(range(2, n)):
        p = (0, 1) + perm
        inv = [0] * n
        for a, b in enumerate(p):
            inv[b] = a
        key = tuple(tuple(inv[add[p[x]][p[y]]] for y in range(n)) for x in range(n)) + \
            tuple(tuple(inv[mul[p[x]][p[y]]] for y in range(n)) for x in range(n))
        if best is None or key < best:
            best = key
    return best


def _semiring(name, add, mul, order=None):
    n = len(add)
    return FiniteSemiring(name, NAMES[:n], 0, 1, add, mul, order)


@lru_cache(maxsize=4)
def all_semirings(max_size=5):
    """Every commutative semiring with ``2 .. max_size`` elements, up to
    isomorphism, in enumeration order."""
    seen, out = set(), []
    for n in range(2, max_size + 1):
        for add in additive_monoids(n):
            for mul in multiplications(add):
                key = _canonical(add, mul, n)
                if key in seen:
                    continue
                seen.add(key)
                out.append((add, mul))
    return tuple(out)


@lru_cache(maxsize=8)
def random_semirings(count=None, seed=0, max_size=5):
    """A seeded selection of ``count`` semirings (all when ``None``) from
    ``all_semirings``, each re-checked by ``verify_semiring``."""
    pool = list(all_semirings(max_size))
    random.Random(seed).shuffle(pool)
    if count is not None:
        pool = pool[:count]
    out = []
    for k, (add, mul) in enumerate(pool):
        s = _semiring(f"R{k}", add, mul)
        if not verify_semiring(s).ok:
            raise CheckFailed("generator produced a non-semiring", (s.name,))
        out.append(s)
    return tuple(out)


@lru_cache(maxsize=4)
def bipotent_semirings(max_size=4):
    """Every bipotent semiring with at most ``max_size`` elements, up to
    isomorphism (order-preserving relabelling)."""
    out, seen = [], set()
    for n in range(2, max_size + 1):
        for h in range(1, n):
            add = chain_addition(n, h)
            rank = chain_rank(n, h)

            def monotone(mul, rank=rank):
                for x in range(n):
                    for y in range(n):
                        for z in range(n):
                            a, b = mul[x][z], mul[y][z]
                            if rank[x] <= rank[y] and a is not None and b is not None \
                                    and rank[a] > rank[b]:
                                return False
                return True

            for mul in multiplications(add, None, None, monotone):
                key = _canonical(add, mul, n)
                if key in seen:
                    continue
                seen.add(key)
                order = tuple(sorted(range(n), key=rank.__getitem__))
                s = _semiring(f"M{n}_{len(out)}", add, mul, order)
                as_bipotent(s)
                out.append(s)
    return tuple(out)


def cancellative_bipotent(max_size=4):
    return tuple(s for s in bipotent_semirings(max_size)
                 if as_bipotent(s).is_cancellative())


@lru_cache(maxsize=2)
def ordered_supertropical(max_size=5):
    """Ordered supertropical semirings of size ``<= max_size``: bipotent ones
    (all ghost) and ``OSTR(T, {1})`` over every zero-divisor-free chain ``T``."""
    out = [verify_total_order(s) for s in bipotent_semirings(min(max_size, 4))]
    one = as_bipotent(bipotent_semirings(2)[0])
    for s in bipotent_semirings(max_size - 1):
        b = as_bipotent(s)
        nz = [x for x in b.elements() if x != b.zero]
        if any(b.mul(x, y) == b.zero for x in nz for y in nz):
            continue
        oc = OstrCarrier(b, one, lambda a, o=one: o.one, f"OSTR({s.name})")
        out.append(tabulate(oc))
    for u in out:
        verify_total_order(u)
    return tuple(out)
