"""Corpus generators against a naive enumeration of every table."""

from itertools import permutations, product

from supertrop.carriers import verify_semiring
from supertrop.corpus import (all_semirings, bipotent_semirings, ordered_supertropical,
                              random_semirings)
from supertrop.morphisms import find_isomorphism
from supertrop.supertropical import verify_total_order


def naive_count(n):
    """Commutative semirings on 0..n-1 (0 zero, 1 one) up to isomorphism,
    by trying every commutative table."""
    els = range(n)
    add_free = [(i, j) for i in range(1, n) for j in range(i, n)]
    mul_free = [(i, j) for i in range(2, n) for j in range(i, n)]
    seen = set()
    for av in product(els, repeat=len(add_free)):
        add = [[None] * n for _ in els]
        for x in els:
            add[0][x] = add[x][0] = x
        for (i, j), v in zip(add_free, av):
            add[i][j] = add[j][i] = v
        if any(add[add[x][y]][z] != add[x][add[y][z]] for x in els for y in els for z in els):
            continue
        for mv in product(els, repeat=len(mul_free)):
            mul = [[None] * n for _ in els]
            for x in els:
                mul[0][x] = mul[x][0] = 0
                mul[1][x] = mul[x][1] = x
            for (i, j), v in zip(mul_free, mv):
                mul[i][j] = mul[j][i] = v
            if any(mul[mul[x][y]][z] != mul[x][mul[y][z]] or
                   mul[x][add[y][z]] != add[mul[x][y]][mul[x][z]]
                   for x in els for y in els for z in els):
                continue
            keys = []
            for perm in permutations(range(2, n)):
                p = (0, 1) + perm
                inv = {b: a for a, b in enumerate(p)}
                keys.append((tuple(inv[add[p[x]][p[y]]] for x in els for y in els),
                             tuple(inv[mul[p[x]][p[y]]] for x in els for y in els)))
            seen.add(min(keys))
    return len(seen)


def test_counts_match_naive_enumeration():
    sizes = [len(add) for add, _ in all_semirings(3)]
    assert sizes.count(2) == naive_count(2)
    assert sizes.count(3) == naive_count(3)


def test_full_corpus_size_and_validity():
    corpus = random_semirings()
    assert len(corpus) == 272 >= 200
    assert all(verify_semiring(s).ok for s in corpus)


def test_no_duplicates_up_to_isomorphism():
    corpus = [s for s in random_semirings() if len(s.names) <= 4]
    for i, a in enumerate(corpus):
        for b in corpus[i + 1:]:
            if len(a.names) == len(b.names):
                assert find_isomorphism(a, b) is None


def test_seeded_selection_is_deterministic():
    a = [s.add_table + s.mul_table for s in random_semirings(20, seed=5)]
    b = [s.add_table + s.mul_table for s in random_semirings(20, seed=5)]
    assert a == b


def test_bipotent_corpus():
    corpus = bipotent_semirings(4)
    for s in corpus:
        assert all(s.add(x, y) in (x, y) for x in s.elements() for y in s.elements())
    from_all = [s for s in random_semirings(max_size=4)
                if all(s.add(x, y) in (x, y) for x in s.elements() for y in s.elements())]
    assert len(corpus) == len(from_all)


def test_ordered_supertropical_corpus():
    pool = ordered_supertropical(5)
    assert all(len(u.base.names) <= 5 for u in pool)
    assert all(verify_total_order(u).ordered for u in pool)
