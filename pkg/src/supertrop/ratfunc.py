"""Exact rational functions in one variable ``t`` over Q.

The field is ordered so that ``t`` is a positive infinitesimal: the sign
of an element is the sign of the lowest-degree coefficient of its
Laurent expansion at ``t = 0``.  This gives a computable non-archimedean
ordered field.

Polynomials are tuples of exact rational (``gmpy2.mpq``) coefficients, lowest degree
first, with no trailing zeros (the zero polynomial is ``()``).
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache

from gmpy2 import mpq as _Q

from .errors import ParseError

_ONE = (_Q(1),)
_RATIONAL = (int, Fraction, type(_Q(0)))


def _trim(p):
    n = len(p)
    while n and p[n - 1] == 0:
        n -= 1
    return tuple(p[:n])


def padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def pneg(p):
    return tuple(-c for c in p)


def psub(p, q):
    return padd(p, pneg(q))


def pmul(p, q):
    if not p or not q:
        return ()
    out = [_Q(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def pscale(p, c):
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def pdivmod(p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quot = [_Q(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(rem) >= len(q) and rem:
        shift = len(rem) - len(q)
        c = rem[-1] / lead
        quot[shift] = c
        for j, b in enumerate(q):
            rem[shift + j] -= c * b
        rem = list(_trim(rem))
    return _trim(quot), tuple(rem)


def pmonic(p):
    if not p:
        return p
    lead = p[-1]
    if lead == 1:
        return p
    return tuple(c / lead for c in p)


def pgcd(p, q):
    while q:
        _, r = pdivmod(p, q)
        p, q = q, r
    return pmonic(p)


def pord(p):
    """Lowest degree with a nonzero coefficient."""
    for i, c in enumerate(p):
        if c:
            return i
    raise ValueError("order of the zero polynomial")


def _poly(coeffs):
    return _trim(tuple(_Q(c) for c in coeffs))


class RatFunc:
    """Element of Q(t) in lowest terms with a monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=(), den=_ONE, *, _reduced=False):
        num = num if _reduced else _poly(num)
        den = den if _reduced else _poly(den)
        if not _reduced:
            if not den:
                raise ZeroDivisionError("rational function with zero denominator")
            if not num:
                den = _ONE
            else:
                g = pgcd(num, den)
                if g != _ONE:
                    num, _ = pdivmod(num, g)
                    den, _ = pdivmod(den, g)
                lead = den[-1]
                if lead != 1:
                    num = pscale(num, 1 / lead)
                    den = pscale(den, 1 / lead)
        self.num = num
        self.den = den
        self._hash = hash((num, den))

    @classmethod
    def const(cls, c):
        c = _Q(c)
        return cls((c,) if c else (), _ONE, _reduced=True)

    @classmethod
    def t_power(cls, k):
        if k >= 0:
            return cls((_Q(0),) * k + (_Q(1),), _ONE, _reduced=True)
        return cls(_ONE, (_Q(0),) * (-k) + (_Q(1),), _reduced=True)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, _RATIONAL):
            return self == RatFunc.const(other)
        return NotImplemented

    def __hash__(self):
        return self._hash

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, _RATIONAL):
            return RatFunc.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den == _ONE:
            return RatFunc(padd(self.num, other.num), _ONE, _reduced=True)
        if self.den == other.den:
            return RatFunc(padd(self.num, other.num), self.den)
        return RatFunc(padd(pmul(self.num, other.den), pmul(other.num, self.den)),
                       pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(pneg(self.num), self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if other.den == _ONE and len(other.num) == 1:
            return RatFunc(pscale(self.num, other.num[0]), self.den, _reduced=True)
        if self.den == _ONE and len(self.num) == 1:
            return RatFunc(pscale(other.num, self.num[0]), other.den, _reduced=True)
        if self.den == other.den == _ONE:
            return RatFunc(pmul(self.num, other.num), _ONE, _reduced=True)
        # both factors are reduced, so only cross cancellations can occur
        g1, g2 = pgcd(self.num, other.den), pgcd(other.num, self.den)
        n1, d2 = (self.num, other.den) if g1 == _ONE else (pdivmod(self.num, g1)[0],
                                                          pdivmod(other.den, g1)[0])
        n2, d1 = (other.num, self.den) if g2 == _ONE else (pdivmod(other.num, g2)[0],
                                                          pdivmod(self.den, g2)[0])
        num, den = pmul(n1, n2), pmul(d1, d2)
        lead = den[-1]
        if lead != 1:
            num, den = pscale(num, 1 / lead), pscale(den, 1 / lead)
        return RatFunc(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self):
        return not self.num

    def ord(self):
        """t-adic order; ``None`` for zero."""
        if not self.num:
            return None
        return pord(self.num) - pord(self.den)

    def leading(self):
        """Lowest coefficient of the Laurent expansion at t = 0."""
        if not self.num:
            return _Q(0)
        return self.num[pord(self.num)] / self.den[pord(self.den)]

    def sign(self):
        lead = self.leading()
        return (lead > 0) - (lead < 0)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other):
        """Sign of ``self - other`` without reducing the difference; the
        lowest Laurent coefficient does not see common factors."""
        other = self._coerce(other)
        diff = psub(pmul(self.num, other.den), pmul(other.num, self.den))
        if not diff:
            return 0
        den = pmul(self.den, other.den)
        lead = diff[pord(diff)] / den[pord(den)]
        return 1 if lead > 0 else -1

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def cmp_abs_one(self):
        """Sign of ``|x| - 1`` with a cheap path for most elements."""
        if not self.num:
            return -1
        k = self.ord()
        if k > 0:
            return -1
        if k < 0:
            return 1
        lead = abs(self.leading())
        if lead != 1:
            return 1 if lead > 1 else -1
        return (abs(self) - ONE).sign()

    def __str__(self):
        n = format_poly(self.num)
        if self.den == _ONE:
            return n
        d = format_poly(self.den)
        if len(self.num) > 1 or (self.num and self.num[0].denominator != 1):
            n = f"({n})"
        if len(self.den) > 1:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({self})"


def format_poly(p):
    if not p:
        return "0"
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = "t" if i == 1 else f"t^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


ZERO = RatFunc.const(0)
ONE = RatFunc.const(1)
T = RatFunc.t_power(1)
HALF = RatFunc.const(_Q(1, 2))
TWO = RatFunc.const(2)


_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|(\*\*|[-+*/^()]))")


def parse_ratfunc(text):
    """Parse expressions like ``1/2``, ``t``, ``(1+t)/(2-t^2)``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        if m.group(1):
            tokens.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2):
            tokens.append(("t", None, m.start(2)))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr():
        val = term()
        while peek()[:2] in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while peek()[:2] in (("op", "*"), ("op", "/")):
            op = take()[1]
            rhs = unary()
            if op == "/" and rhs.is_zero():
                raise ParseError("division by zero", 1, peek()[2] + 1)
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary():
        if peek()[:2] == ("op", "-"):
            take()
            return -unary()
        return power()

    def power():
        base = atom()
        if peek()[:2] == ("op", "^"):
            take()
            neg = False
            if peek()[:2] == ("op", "-"):
                take()
                neg = True
            kind, val, col = take()
            if kind != "num":
                raise ParseError("integer exponent expected", 1, col + 1)
            return base ** (-val if neg else val)
        return base

    def atom():
        kind, val, col = take()
        if kind == "num":
            return RatFunc.const(val)
        if kind == "t":
            return T
        if (kind, val) == ("op", "("):
            inner = expr()
            kind, val, col = take()
            if (kind, val) != ("op", ")"):
                raise ParseError("')' expected", 1, col + 1)
            return inner
        raise ParseError("operand expected", 1, col + 1)

    result = expr()
    kind, _, col = peek()
    if kind != "end":
        raise ParseError("trailing input", 1, col + 1)
    return result


LANDMARKS = (
    "0", "1", "-1", "2", "-2", "1/2", "-1/2", "t", "-t", "1/t", "-1/t", "t/2", "2/t",
    "1+t", "1-t", "-1+t", "2/(2+t)", "3/4", "3/2", "1+t^2", "1-t^2", "t^2", "1/t^2",
    "(1+t)/(1-t)", "(1-t)/(1+t)", "2+t", "1/2+t", "1/2-t", "t+t^2", "1/(1+t)",
)


def sample_ratfuncs(n, seed=0):
    """Deterministic sample of ``n`` distinct elements.

    Fixed landmarks come first; the rest are fractions ``p/q`` with
    ``deg p, deg q <= 3`` and integer coefficients in ``[-2, 2]`` drawn
    from ``random.Random(seed)``, kept only when ``gcd(p, q) = 1``.
    """
    return list(_sample(n, seed))


@lru_cache(maxsize=64)
def _sample(n, seed):
    out = []
    seen = set()
    for text in LANDMARKS:
        x = parse_ratfunc(text)
        if x not in seen:
            seen.add(x)
            out.append(x)
        if len(out) >= n:
            return tuple(out)
    rng = random.Random(seed)
    while len(out) < n:
        p = _poly(rng.randint(-2, 2) for _ in range(4))
        q = _poly(rng.randint(-2, 2) for _ in range(4))
        if not q:
            continue
        if p and pgcd(p, q) != _ONE:
            continue
        x = RatFunc(p, q)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return tuple(out)


# Closed-form subsets of the field.  Each knows its own colon sets, so
# quotient constructions stay exact on the infinite carrier.


class RatSubset:
    def __contains__(self, x):
        raise NotImplementedError

    def colon(self, x):
        """``[L:x] = {z : z x in L}`` as another closed-form subset."""
        raise NotImplementedError


class Everything(RatSubset):
    def __contains__(self, x):
        return True

    def colon(self, x):
        return self

    def __eq__(self, other):
        return isinstance(other, Everything)

    def __hash__(self):
        return hash("Everything")

    def __str__(self):
        return "R"


class ZeroSet(RatSubset):
    def __contains__(self, x):
        return x.is_zero()

    def colon(self, x):
        return Everything() if x.is_zero() else self

    def __eq__(self, other):
        return isinstance(other, ZeroSet)

    def __hash__(self):
        return hash("ZeroSet")

    def __str__(self):
        return "{0}"


class AbsBall(RatSubset):
    """``{x : |x| <= r}`` (closed) or ``{x : |x| < r}`` (open)."""

    def __init__(self, radius=ONE, closed=True):
        self.radius = radius
        self.closed = closed

    def __contains__(self, x):
        if self.radius == ONE:
            c = x.cmp_abs_one()
        else:
            c = (abs(x) - self.radius).sign()
        return c <= 0 if self.closed else c < 0

    def colon(self, x):
        if x.is_zero():
            return Everything()
        return AbsBall(self.radius / abs(x), self.closed)

    def __eq__(self, other):
        return (isinstance(other, AbsBall) and self.radius == other.radius
                and self.closed == other.closed)

    def __hash__(self):
        return hash(("AbsBall", self.radius, self.closed))

    def __str__(self):
        op = "<=" if self.closed else "<"
        return f"{{|x| {op} {self.radius}}}"


class OrdSet(RatSubset):
    """``{0} u {x : ord(x) >= k}``; ``k = 0`` is the ring of finite elements."""

    def __init__(self, k):
        self.k = k

    def __contains__(self, x):
        return x.is_zero() or x.ord() >= self.k

    def colon(self, x):
        if x.is_zero():
            return Everything()
        return OrdSet(self.k - x.ord())

    def __eq__(self, other):
        return isinstance(other, OrdSet) and self.k == other.k

    def __hash__(self):
        return hash(("OrdSet", self.k))

    def __str__(self):
        return f"{{ord >= {self.k}}}"


class PredicateSet(RatSubset):
    """Membership by predicate only; no colon sets."""

    def __init__(self, pred, label="{...}"):
        self.pred = pred
        self.label = label

    def __contains__(self, x):
        return self.pred(x)

    def __str__(self):
        return self.label


CLOSED_UNIT = AbsBall(ONE, True)
OPEN_UNIT = AbsBall(ONE, False)
FINITE = OrdSet(0)
INFINITESIMAL = OrdSet(1)


def includes(big, small):
    """Decide ``big ⊇ small`` for closed-form subsets of the same shape."""
    if isinstance(big, Everything):
        return True
    if isinstance(small, ZeroSet):
        return True
    if isinstance(small, Everything) or isinstance(big, ZeroSet):
        return False
    if isinstance(big, AbsBall) and isinstance(small, AbsBall):
        if small.radius != big.radius:
            return small.radius < big.radius
        return big.closed or not small.closed
    if isinstance(big, OrdSet) and isinstance(small, OrdSet):
        return big.k <= small.k
    raise TypeError(f"cannot compare {big} and {small}")
