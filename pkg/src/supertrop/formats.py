"""Line-oriented text formats for carriers, subsets and partitions.

A semiring document::

    semiring B
    elements 0 1
    zero 0
    one 1
    add
    0 1
    1 1
    mul
    0 0
    0 1

An optional trailing ``order e0 e1 ...`` line (ascending) declares a
total order, used for ordered supertropical fixtures.  Graded carriers
and the rational-function field are selected by one-line documents
``carrier maxplus_z`` / ``carrier maxplus_n`` / ``carrier maxplus_np`` /
``carrier ratfunc``.
"""

from __future__ import annotations

import re

from .carriers import FiniteSemiring, MaxPlus, RatFuncField
from .errors import ParseError, StructureError

_FORBIDDEN = re.compile(r"[{}:,#]")


def _lines(text):
    """Yield ``(lineno, tokens, columns)`` for non-blank, comment-stripped lines."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if toks:
            yield lineno, [t for t, _ in toks], [c for _, c in toks]


def parse_carrier(text):
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty document", 1, 1)
    lineno, toks, cols = lines[0]
    if toks[0] == "carrier":
        if len(toks) != 2:
            raise ParseError("expected 'carrier <kind>'", lineno, cols[0])
        kind = toks[1]
        if kind == "ratfunc":
            result = RatFuncField()
        elif kind in ("maxplus_z", "maxplus_n", "maxplus_np", "maxplus_q"):
            result = MaxPlus(kind.split("_", 1)[1].upper())
        else:
            raise ParseError(f"unknown carrier kind {kind!r}", lineno, cols[1])
        if len(lines) > 1:
            raise ParseError("trailing content after carrier keyword", lines[1][0], 1)
        return result
    return _parse_table(lines)


def _expect(lines, pos, keyword, nargs=None):
    if pos >= len(lines):
        last = lines[-1][0] if lines else 1
        raise ParseError(f"expected '{keyword}'", last + 1, 1)
    lineno, toks, cols = lines[pos]
    if toks[0] != keyword:
        raise ParseError(f"expected '{keyword}', found {toks[0]!r}", lineno, cols[0])
    if nargs is not None and len(toks) - 1 != nargs:
        raise ParseError(f"'{keyword}' takes {nargs} argument(s)", lineno, cols[0])
    return lineno, toks[1:], cols[1:]


def _parse_table(lines):
    pos = 0
    _, (name,), _ = _expect(lines, pos, "semiring", 1)
    pos += 1
    lineno, names, cols = _expect(lines, pos, "elements")
    pos += 1
    index = {}
    for nm, col in zip(names, cols):
        if _FORBIDDEN.search(nm):
            raise ParseError(f"element name {nm!r} contains a reserved character", lineno, col)
        if nm in index:
            raise ParseError(f"duplicate element {nm!r}", lineno, col)
        index[nm] = len(index)
    if len(names) < 2:
        raise ParseError("the zero ring is not allowed (need at least 2 elements)", lineno, 1)

    def lookup(nm, ln, col):
        try:
            return index[nm]
        except KeyError:
            raise ParseError(f"unknown element {nm!r}", ln, col) from None

    ln, (z,), cs = _expect(lines, pos, "zero", 1)
    zero = lookup(z, ln, cs[0])
    pos += 1
    ln, (o,), cs = _expect(lines, pos, "one", 1)
    one = lookup(o, ln, cs[0])
    pos += 1
    n = len(names)
    tables = []
    for keyword in ("add", "mul"):
        _expect(lines, pos, keyword, 0)
        pos += 1
        rows = []
        for _ in range(n):
            if pos >= len(lines):
                raise ParseError(f"{keyword} table has fewer than {n} rows", lines[-1][0] + 1, 1)
            ln, toks, cs = lines[pos]
            if len(toks) != n:
                raise ParseError(f"{keyword} row must have {n} entries, found {len(toks)}", ln, 1)
            rows.append(tuple(lookup(t, ln, c) for t, c in zip(toks, cs)))
            pos += 1
        tables.append(tuple(rows))
    order = None
    if pos < len(lines):
        ln, toks, cs = _expect(lines, pos, "order")
        order = tuple(lookup(t, ln, c) for t, c in zip(toks, cs))
        if sorted(order) != list(range(n)):
            raise ParseError("order must list every element exactly once", ln, 1)
        pos += 1
    if pos < len(lines):
        raise ParseError("unexpected trailing content", lines[pos][0], 1)
    try:
        return FiniteSemiring(name, tuple(names), zero, one, tables[0], tables[1], order)
    except StructureError as exc:
        raise ParseError(str(exc)) from None


def serialize_carrier(c):
    if isinstance(c, RatFuncField):
        return "carrier ratfunc\n"
    if isinstance(c, MaxPlus):
        return f"carrier {c.name}\n"
    out = [f"semiring {c.name}", "elements " + " ".join(c.names),
           f"zero {c.names[c.zero]}", f"one {c.names[c.one]}", "add"]
    out += [" ".join(c.names[v] for v in row) for row in c.add_table]
    out.append("mul")
    out += [" ".join(c.names[v] for v in row) for row in c.mul_table]
    if c.order is not None:
        out.append("order " + " ".join(c.names[i] for i in c.order))
    return "\n".join(out) + "\n"


def parse_subset(text, carrier):
    """``subset <name> of <semiring-name> : e_i e_j ...`` -> (name, frozenset)."""
    lines = list(_lines(text))
    if len(lines) != 1:
        raise ParseError("a subset document is a single line", 1, 1)
    lineno, toks, cols = lines[0]
    if len(toks) < 5 or toks[0] != "subset" or toks[2] != "of":
        raise ParseError("expected 'subset <name> of <semiring> : <elements>'", lineno, 1)
    if toks[4] != ":" and not toks[3].endswith(":"):
        raise ParseError("expected ':' after the semiring name", lineno, cols[3])
    sr_name = toks[3].rstrip(":")
    members = toks[5:] if toks[4] == ":" else toks[4:]
    mcols = cols[5:] if toks[4] == ":" else cols[4:]
    if sr_name != carrier.name:
        raise ParseError(f"subset refers to semiring {sr_name!r}, not {carrier.name!r}",
                         lineno, cols[3])
    out = set()
    for nm, col in zip(members, mcols):
        if nm not in carrier.names:
            raise ParseError(f"unknown element {nm!r}", lineno, col)
        out.add(carrier.index(nm))
    return toks[1], frozenset(out)


def serialize_subset(name, members, carrier):
    els = " ".join(carrier.names[i] for i in sorted(members))
    return f"subset {name} of {carrier.name} : {els}\n"


def parse_partition(text, carrier):
    """``partition of <carrier>: {e_i e_j} {e_k} ...`` -> tuple of frozensets."""
    body = " ".join(line for line in (ln.split("#", 1)[0] for ln in text.splitlines())
                    if line.strip())
    m = re.match(r"\s*partition\s+of\s+(\S+?)\s*:\s*(.*)$", body)
    if not m:
        raise ParseError("expected 'partition of <carrier>: {...} ...'", 1, 1)
    if m.group(1) != carrier.name:
        raise ParseError(f"partition refers to {m.group(1)!r}, not {carrier.name!r}", 1, 1)
    rest = m.group(2)
    blocks = []
    seen = set()
    for block in re.finditer(r"\{([^{}]*)\}|(\S)", rest):
        if block.group(2):
            raise ParseError(f"unexpected {block.group(2)!r} between blocks", 1,
                             m.start(2) + block.start() + 1)
        names = block.group(1).replace(",", " ").split()
        if not names:
            raise ParseError("empty block", 1, m.start(2) + block.start() + 1)
        cls = set()
        for nm in names:
            if nm not in carrier.names:
                raise ParseError(f"unknown element {nm!r}", 1, m.start(2) + block.start() + 1)
            i = carrier.index(nm)
            if i in seen:
                raise ParseError(f"element {nm!r} appears twice", 1, m.start(2) + block.start() + 1)
            seen.add(i)
            cls.add(i)
        blocks.append(frozenset(cls))
    if len(seen) != len(carrier.names):
        missing = [carrier.names[i] for i in carrier.elements() if i not in seen]
        raise ParseError(f"partition does not cover {' '.join(missing)}", 1, 1)
    return canonical_partition(blocks)


def canonical_partition(blocks):
    return tuple(sorted((frozenset(b) for b in blocks), key=min))


def serialize_partition(blocks, carrier):
    parts = " ".join("{" + " ".join(carrier.names[i] for i in sorted(b)) + "}"
                     for b in canonical_partition(blocks))
    return f"partition of {carrier.name}: {parts}\n"


def parse_element_list(text, carrier):
    """Comma- or space-separated element names, as used by CLI flags."""
    out = set()
    for nm in re.split(r"[,\s]+", text.strip()):
        if not nm:
            continue
        if nm not in carrier.names:
            raise ParseError(f"unknown element {nm!r}", 1, text.find(nm) + 1)
        out.add(carrier.index(nm))
    return frozenset(out)
