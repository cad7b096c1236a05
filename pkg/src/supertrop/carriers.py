"""Computable carriers and semiring axiom checks.

Three kinds of carrier are supported:

* ``FiniteSemiring``: explicit addition/multiplication tables over
  elements ``0..n-1`` (names are only for input and output),
* ``MaxPlus``: the graded max-plus family ``{0} u {u^k}`` with
  ``u^j * u^k = u^(j+k)`` and addition the maximum,
* ``RatFuncField``: the ordered field Q(t) with ``t`` infinitesimal, and
  ``AbsValueSemiring``, its nonnegative part under ``(max, *)``.

Finite carriers enumerate their elements; infinite ones hand out a
deterministic bounded sample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import ratfunc
from .errors import StructureError


class Carrier:
    """Interface shared by all carriers: ``zero``, ``one``, ``add``, ``mul``."""

    finite = False
    ordered = False

    def add(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def elements(self):
        raise TypeError(f"{self.name} is infinite; use sample()")

    def sample(self, n=200, seed=0):
        return list(self.elements())

    def fmt(self, x):
        return str(x)

    def pairs(self, budget=1000, seed=0):
        """All pairs for finite carriers, ``budget`` seeded pairs otherwise."""
        if self.finite:
            els = list(self.elements())
            return [(x, y) for x in els for y in els]
        pool = self.sample(min(max(budget, 50), 400), seed)
        rng = random.Random(seed)
        return [(rng.choice(pool), rng.choice(pool)) for _ in range(budget)]

    def triples(self, budget=1000, seed=0):
        if self.finite:
            els = list(self.elements())
            return list(product(els, repeat=3))
        pool = self.sample(min(max(budget, 50), 400), seed)
        rng = random.Random(seed + 1)
        return [(rng.choice(pool), rng.choice(pool), rng.choice(pool))
                for _ in range(budget)]

    def is_unit(self, x):
        raise NotImplementedError

    def inverse(self, x):
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class FiniteSemiring(Carrier):
    name: str
    names: tuple
    zero: int
    one: int
    add_table: tuple
    mul_table: tuple
    # optional declared total order (indices, ascending); used by ordered
    # supertropical fixtures
    order: tuple | None = None
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    finite = True

    def __post_init__(self):
        n = len(self.names)
        if n < 2:
            raise StructureError("the zero ring is not allowed (need at least 2 elements)")
        if len(set(self.names)) != n:
            dup = next(x for x in self.names if self.names.count(x) > 1)
            raise StructureError(f"duplicate element {dup!r}")
        for label, table in (("add", self.add_table), ("mul", self.mul_table)):
            if len(table) != n or any(len(row) != n for row in table):
                raise StructureError(f"{label} table is not {n}x{n}")
            for row in table:
                for v in row:
                    if not isinstance(v, int) or not 0 <= v < n:
                        raise StructureError(f"{label} table entry {v!r} out of range")
        for label, v in (("zero", self.zero), ("one", self.one)):
            if not 0 <= v < n:
                raise StructureError(f"{label} index {v} out of range")
        if self.order is not None and sorted(self.order) != list(range(n)):
            raise StructureError("order must list every element exactly once")
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(self.names)})

    @classmethod
    def from_tables(cls, name, names, zero, one, add, mul, order=None):
        """Build from element names; table entries may be names or indices."""
        names = tuple(names)
        idx = {x: i for i, x in enumerate(names)}

        def conv(v):
            if isinstance(v, int):
                return v
            try:
                return idx[v]
            except KeyError:
                raise StructureError(f"unknown element {v!r}") from None

        def table(rows):
            return tuple(tuple(conv(v) for v in row) for row in rows)

        if order is not None:
            order = tuple(conv(v) for v in order)
        return cls(name, names, conv(zero), conv(one), table(add), table(mul), order)

    @classmethod
    def from_functions(cls, name, names, zero, one, add, mul, order=None):
        """Tables from index functions ``add(i, j)``, ``mul(i, j)``."""
        n = len(names)
        rng = range(n)
        return cls(name, tuple(names), zero, one,
                   tuple(tuple(add(i, j) for j in rng) for i in rng),
                   tuple(tuple(mul(i, j) for j in rng) for i in rng),
                   None if order is None else tuple(order))

    def __len__(self):
        return len(self.names)

    def __hash__(self):
        return hash((self.name, self.names, self.add_table, self.mul_table, self.order))

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise StructureError(f"unknown element {name!r}") from None

    def add(self, x, y):
        return self.add_table[x][y]

    def mul(self, x, y):
        return self.mul_table[x][y]

    def elements(self):
        return range(len(self.names))

    def fmt(self, x):
        return self.names[x]

    def units(self):
        return [x for x in self.elements()
                if any(self.mul_table[x][y] == self.one for y in self.elements())]

    def is_unit(self, x):
        return any(self.mul_table[x][y] == self.one for y in self.elements())

    def inverse(self, x):
        for y in self.elements():
            if self.mul_table[x][y] == self.one:
                return y
        raise ValueError(f"{self.names[x]} is not a unit")

    def power(self, x, k):
        out = self.one
        for _ in range(k):
            out = self.mul_table[out][x]
        return out

    def renamed(self, name):
        return FiniteSemiring(name, self.names, self.zero, self.one,
                              self.add_table, self.mul_table, self.order)

    def with_order(self, order):
        return FiniteSemiring(self.name, self.names, self.zero, self.one,
                              self.add_table, self.mul_table,
                              None if order is None else tuple(order))

    def fmt_set(self, s):
        return "{" + ", ".join(self.names[i] for i in sorted(s)) + "}"


class MaxPlus(Carrier):
    """Graded max-plus semiring: ``None`` is the zero, an int grade ``k`` is ``u^k``.

    ``kind`` is ``"Z"``, ``"N"`` (grades >= 0), ``"NP"`` (grades <= 0, whose
    ghost-bounded lower sets are ideals) or ``"Q"`` (rational grades, a
    dense order used to exercise the strict unit-incapsulation case).
    """

    finite = False
    ordered = True
    zero = None
    one = 0

    def __init__(self, kind="Z"):
        if kind not in ("Z", "N", "NP", "Q"):
            raise StructureError(f"unknown graded kind {kind!r}")
        self.kind = kind
        self.name = f"maxplus_{kind.lower()}"

    def __eq__(self, other):
        return isinstance(other, MaxPlus) and other.kind == self.kind

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"MaxPlus({self.kind!r})"

    def valid(self, x):
        if x is None:
            return True
        if self.kind == "Q":
            return isinstance(x, (int, Fraction))
        if not isinstance(x, int):
            return False
        return self.kind == "Z" or (x >= 0 if self.kind == "N" else x <= 0)

    def add(self, x, y):
        if x is None:
            return y
        if y is None:
            return x
        return max(x, y)

    def mul(self, x, y):
        if x is None or y is None:
            return None
        return x + y

    def le(self, x, y):
        if x is None:
            return True
        if y is None:
            return False
        return x <= y

    def is_unit(self, x):
        return x is not None and (self.kind not in ("N", "NP") or x == 0)

    def inverse(self, x):
        if not self.is_unit(x):
            raise ValueError("not a unit")
        return -x if x else 0

    def sample(self, n=200, seed=0):
        if self.kind == "N":
            return [None] + list(range(n - 1))
        if self.kind == "NP":
            return [None] + list(range(0, -(n - 1), -1))
        half = (n - 1) // 2
        if self.kind == "Z":
            return [None] + list(range(-half, n - 1 - half))
        return [None] + [Fraction(k, 4) for k in range(-half, n - 1 - half)]

    def fmt(self, x):
        if x is None:
            return "0"
        if x == 0:
            return "1"
        return f"u^{x}"


class RatFuncField(Carrier):
    """Q(t) ordered with t a positive infinitesimal."""

    name = "ratfunc"
    finite = False
    ordered = True
    zero = ratfunc.ZERO
    one = ratfunc.ONE

    def __eq__(self, other):
        return isinstance(other, RatFuncField)

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return "RatFuncField()"

    def add(self, x, y):
        return x + y

    def mul(self, x, y):
        return x * y

    def le(self, x, y):
        return x <= y

    def is_unit(self, x):
        return not x.is_zero()

    def inverse(self, x):
        return x.inverse()

    def sample(self, n=200, seed=0):
        return ratfunc.sample_ratfuncs(n, seed)


class AbsValueSemiring(Carrier):
    """Nonnegative elements of Q(t) under ``(max, *)``: the target of ``x -> |x|``."""

    name = "absval"
    finite = False
    ordered = True
    zero = ratfunc.ZERO
    one = ratfunc.ONE

    def __eq__(self, other):
        return isinstance(other, AbsValueSemiring)

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return "AbsValueSemiring()"

    def add(self, x, y):
        return y if x <= y else x

    def mul(self, x, y):
        return x * y

    def le(self, x, y):
        return x <= y

    def is_unit(self, x):
        return not x.is_zero()

    def inverse(self, x):
        return x.inverse()

    def sample(self, n=200, seed=0):
        out = []
        seen = set()
        for x in ratfunc.sample_ratfuncs(2 * n, seed):
            a = abs(x)
            if a not in seen:
                seen.add(a)
                out.append(a)
            if len(out) == n:
                break
        return out


AXIOMS = (
    "add_commutative",
    "add_associative",
    "mul_commutative",
    "mul_associative",
    "distributive",
    "zero_additive_identity",
    "zero_absorbing",
    "one_neutral",
)


@dataclass
class AxiomReport:
    carrier: str
    exhaustive: bool
    checked: int
    failures: dict

    @property
    def ok(self):
        return not self.failures

    def lines(self, fmt=str):
        status = "exhaustive" if self.exhaustive else f"sampled ({self.checked} triples)"
        out = [f"semiring axioms on {self.carrier}: {status}"]
        for ax in AXIOMS:
            if ax in self.failures:
                wit = " ".join(fmt(x) for x in self.failures[ax])
                out.append(f"  {ax}: FAIL at ({wit})")
            else:
                out.append(f"  {ax}: ok")
        return out


def verify_semiring(c, budget=1000, seed=0):
    """Check the commutative semiring axioms; exhaustive on finite carriers."""
    failures = {}

    def fail(axiom, *wit):
        failures.setdefault(axiom, wit)

    z, o = c.zero, c.one
    add, mul = c.add, c.mul
    if c.finite:
        singles = list(c.elements())
    else:
        singles = c.sample(min(budget, 400), seed)
    for x in singles:
        if add(z, x) != x:
            fail("zero_additive_identity", x)
        if mul(z, x) != z or mul(x, z) != z:
            fail("zero_absorbing", x)
        if mul(o, x) != x:
            fail("one_neutral", x)
    for x, y in c.pairs(budget, seed):
        if add(x, y) != add(y, x):
            fail("add_commutative", x, y)
        if mul(x, y) != mul(y, x):
            fail("mul_commutative", x, y)
    triples = c.triples(budget, seed)
    for x, y, w in triples:
        if add(add(x, y), w) != add(x, add(y, w)):
            fail("add_associative", x, y, w)
        if mul(mul(x, y), w) != mul(x, mul(y, w)):
            fail("mul_associative", x, y, w)
        if mul(x, add(y, w)) != add(mul(x, y), mul(x, w)):
            fail("distributive", x, y, w)
    return AxiomReport(c.name, c.finite, len(triples), failures)
