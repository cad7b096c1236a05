"""Named small semirings used throughout the tests and the CLI examples.

The ``fixtures/`` directory at the repository root holds the same
carriers in the text format; ``tests/test_formats.py`` checks that the
files and these builders agree.
"""

from __future__ import annotations

from .bipotent import finite_bipotent
from .carriers import FiniteSemiring


def boolean():
    return finite_bipotent("B", ("0", "1"), lambda x, y: "1" if x == y == "1" else "0", "1")


def nil3():
    """``0 < ε < 1`` with ``ε² = 0``."""
    def mul(x, y):
        if "0" in (x, y):
            return "0"
        if x == "1":
            return y
        if y == "1":
            return x
        return "0"
    return finite_bipotent("NIL3", ("0", "ε", "1"), mul, "1")


def chain3():
    """``0 < 1 < β`` with ``β² = β``."""
    def mul(x, y):
        if "0" in (x, y):
            return "0"
        return "β" if "β" in (x, y) else "1"
    return finite_bipotent("CHAIN3", ("0", "1", "β"), mul, "1")


def m4():
    """``0 < a < 1 < b`` with ``a² = a``, ``ab = a``, ``b² = b``."""
    def mul(x, y):
        if "0" in (x, y):
            return "0"
        if x == "1":
            return y
        if y == "1":
            return x
        return "a" if "a" in (x, y) else "b"
    return finite_bipotent("M4", ("0", "a", "1", "b"), mul, "1")


def boolean_square():
    """``𝔹 × 𝔹`` with componentwise operations; elements are bit pairs."""
    names = ("00", "01", "10", "11")
    return FiniteSemiring.from_functions(
        "BxB", names, 0, 3, lambda i, j: i | j, lambda i, j: i & j)


def corrupted():
    """``0 < 1 < a`` (``a² = a``) with the single entry ``a + a = 1`` injected."""
    base = chain3()
    add = [list(row) for row in base.add_table]
    add[2][2] = 1
    return FiniteSemiring("CORRUPT", ("0", "1", "a"), 0, 1,
                          tuple(map(tuple, add)), base.mul_table)


def u4(order=("0", "t1", "tβ", "e")):
    """Tangibles ``t1, tβ`` over the one-element ghost group ``{e}``.

    ``tβ² = tβ``, every product of a tangible with ``e`` is ``e``, and
    ``x + y`` of two tangibles is ``e``.  ``order`` is ascending.
    """
    names = ("0", "t1", "tβ", "e")
    z, t1, tb, e = range(4)

    def mul(i, j):
        if z in (i, j):
            return z
        if e in (i, j):
            return e
        if i == t1:
            return j
        if j == t1:
            return i
        return tb

    def add(i, j):
        if i == z:
            return j
        if j == z:
            return i
        return e

    rank = tuple(names.index(x) for x in order)
    return FiniteSemiring.from_functions("U4", names, z, t1, add, mul, rank)


def u4_alternate():
    return u4(("0", "tβ", "t1", "e")).renamed("U4alt")


def e3():
    """``{0, 1, e}`` with ``0 < 1 < e``: the one-tangible, one-ghost semiring."""
    names = ("0", "1", "e")

    def add(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return 2

    def mul(i, j):
        if 0 in (i, j):
            return 0
        return max(i, j)

    return FiniteSemiring.from_functions("E3", names, 0, 1, add, mul, (0, 1, 2))


CORPUS = {
    "B": boolean,
    "NIL3": nil3,
    "CHAIN3": chain3,
    "M4": m4,
}

ALL = {
    **CORPUS,
    "BxB": boolean_square,
    "CORRUPT": corrupted,
    "U4": u4,
    "U4alt": u4_alternate,
    "E3": e3,
}

FILE_NAMES = {
    "B": "b.sr", "NIL3": "nil3.sr", "CHAIN3": "chain3.sr", "M4": "m4.sr",
    "BxB": "bxb.sr", "CORRUPT": "corrupt.sr", "U4": "u4.sr", "U4alt": "u4alt.sr",
    "E3": "e3.sr",
}
