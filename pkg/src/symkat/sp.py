"""Symbolic packets: reduced, ordered n-ary decision diagrams over packet fields.

An ``SP`` node ``(f, {v: child}, default)`` denotes the packets that follow
the ``v`` edge when ``f = v`` and the default edge otherwise.  Nodes are
hash-consed, so two reduced ordered diagrams denote the same set exactly
when they are the same object.
"""
from __future__ import annotations

import itertools
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .core import FIELDS, TERMINAL_RANK, VALUES, Packet, field_rank, on_reset


class SP:
    __slots__ = ("field", "branches", "bmap", "default", "uid", "__weakref__")

    def __init__(self, field: int, branches: Tuple[Tuple[int, "SP"], ...], default: Optional["SP"], uid: int):
        self.field = field
        self.branches = branches
        self.bmap: Dict[int, SP] = dict(branches)
        self.default = default
        self.uid = uid

    @property
    def is_terminal(self) -> bool:
        return self.field == TERMINAL_RANK

    def __repr__(self) -> str:
        if self is TOP:
            return "SP.Top"
        if self is BOT:
            return "SP.Bot"
        return f"SP#{self.uid}({show(self)})"

    def __reduce__(self):
        raise TypeError("SP nodes are session-bound and cannot be pickled")


BOT = SP(TERMINAL_RANK, (), None, 0)
TOP = SP(TERMINAL_RANK, (), None, 1)

_table: Dict[tuple, SP] = {}
_memo: Dict[tuple, SP] = {}


@on_reset
def _clear() -> None:
    _table.clear()
    _memo.clear()


def node_count() -> int:
    return len(_table)


def _mk(field: int, branches: Tuple[Tuple[int, SP], ...], default: SP) -> SP:
    key = (field, branches, default)
    n = _table.get(key)
    if n is None:
        n = SP(field, branches, default, len(_table) + 2)
        _table[key] = n
    return n


def spsc(f, b: Mapping[int, SP], d: SP) -> SP:
    """Smart constructor: drop branches equal to the default, collapse if empty."""
    kept = tuple(sorted((v, p) for v, p in b.items() if p is not d))
    if not kept:
        return d
    return _mk(field_rank(f), kept, d)


def test(f, v: int) -> SP:
    return _mk(field_rank(f), ((v, TOP),), BOT)


def test_ne(f, v: int) -> SP:
    return _mk(field_rank(f), ((v, BOT),), TOP)


def const(b: bool) -> SP:
    return TOP if b else BOT


# Base-case truth tables, indexed by (p is TOP, q is TOP).
_TABLES = {
    "union": {(1, 1): TOP, (1, 0): TOP, (0, 1): TOP, (0, 0): BOT},
    "intersect": {(1, 1): TOP, (1, 0): BOT, (0, 1): BOT, (0, 0): BOT},
    "xor": {(1, 1): BOT, (1, 0): TOP, (0, 1): TOP, (0, 0): BOT},
    "diff": {(1, 1): BOT, (1, 0): TOP, (0, 1): BOT, (0, 0): BOT},
}
_TABLES["seq"] = _TABLES["intersect"]
_COMMUTATIVE = {"union", "intersect", "xor"}
OPS = ("union", "seq", "intersect", "xor", "diff")


def _shortcut(op: str, p: SP, q: SP) -> Optional[SP]:
    if op == "union":
        if p is q or q is BOT or p is TOP:
            return p
        if p is BOT or q is TOP:
            return q
    elif op == "intersect":
        if p is q or q is TOP or p is BOT:
            return p
        if p is TOP or q is BOT:
            return q
    elif op == "xor":
        if p is q:
            return BOT
        if q is BOT:
            return p
        if p is BOT:
            return q
    elif op == "diff":
        if p is q or p is BOT or q is TOP:
            return BOT
        if q is BOT:
            return p
    return None


def binary(op: str, p: SP, q: SP) -> SP:
    if op == "seq":
        op = "intersect"
    r = _shortcut(op, p, q)
    if r is not None:
        return r
    if p.field == TERMINAL_RANK and q.field == TERMINAL_RANK:
        return _TABLES[op][(p is TOP, q is TOP)]
    if op in _COMMUTATIVE and p.uid > q.uid:
        p, q = q, p
    key = (op, p, q)
    r = _memo.get(key)
    if r is not None:
        return r
    if p.field == q.field:
        f = p.field
        bp, dp, bq, dq = p.bmap, p.default, q.bmap, q.default
    elif p.field < q.field:
        f = p.field
        bp, dp, bq, dq = p.bmap, p.default, {}, q
    else:
        f = q.field
        bp, dp, bq, dq = {}, p, q.bmap, q.default
    b = {}
    for v in bp.keys() | bq.keys():
        b[v] = binary(op, bp.get(v, dp), bq.get(v, dq))
    r = spsc(f, b, binary(op, dp, dq))
    _memo[key] = r
    return r


def union(p: SP, q: SP) -> SP:
    return binary("union", p, q)


def intersect(p: SP, q: SP) -> SP:
    return binary("intersect", p, q)


seq = intersect


def xor(p: SP, q: SP) -> SP:
    return binary("xor", p, q)


def diff(p: SP, q: SP) -> SP:
    return binary("diff", p, q)


def neg(p: SP) -> SP:
    """Complement; not a primitive, defined as ``Top - p``."""
    return diff(TOP, p)


def star(p: SP) -> SP:
    return TOP


def union_all(ps: Iterable[SP]) -> SP:
    """n-ary union, reduced pairwise so wide sums stay near-linear."""
    items = [p for p in ps if p is not BOT]
    if not items:
        return BOT
    while len(items) > 1:
        nxt = [union(items[i], items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def intersect_all(ps: Iterable[SP]) -> SP:
    acc = TOP
    for p in ps:
        acc = intersect(acc, p)
    return acc


def _children(p: SP):
    yield from p.bmap.values()
    yield p.default


def exists(f, p: SP) -> SP:
    """Packets that satisfy ``p`` for *some* value of ``f``."""
    return _quantify("exists", field_rank(f), p)


def forall(f, p: SP) -> SP:
    """Packets that satisfy ``p`` for *every* value of ``f``."""
    return _quantify("forall", field_rank(f), p)


def _quantify(kind: str, f: int, p: SP) -> SP:
    if p.field > f:
        return p
    key = (kind, f, p)
    r = _memo.get(key)
    if r is not None:
        return r
    if p.field == f:
        r = union_all(_children(p)) if kind == "exists" else intersect_all(_children(p))
    else:
        r = spsc(p.field, {v: _quantify(kind, f, c) for v, c in p.branches},
                 _quantify(kind, f, p.default))
    _memo[key] = r
    return r


def member(p: SP, pk) -> bool:
    """Follow the unique path of ``pk``; ``pk`` is a Packet or rank-indexed sequence."""
    while p.field != TERMINAL_RANK:
        p = p.bmap.get(pk[p.field], p.default)
    return p is TOP


def sample(p: SP, fields: Optional[Iterable[int]] = None) -> Optional[Packet]:
    """Return one packet of ``p`` or ``None`` if ``p`` is empty.

    On default edges the smallest natural not among the node's keys is used;
    fields not on the path (and listed in ``fields``) get 0.
    """
    if p is BOT:
        return None
    chosen: Dict[int, int] = {}
    excluded: Dict[int, set] = {}
    while p is not TOP:
        nxt = None
        for v, c in p.branches:
            if c is not BOT:
                chosen[p.field] = v
                nxt = c
                break
        if nxt is None:
            excluded[p.field] = set(p.bmap)
            nxt = p.default
        p = nxt
    for f, ex in excluded.items():
        chosen[f] = next(v for v in itertools.count() if v not in ex)
    ranks = range(len(FIELDS)) if fields is None else fields
    for r in ranks:
        chosen.setdefault(r, 0)
    return Packet._from_ranks(chosen)


def size(p: SP) -> int:
    """Number of distinct internal nodes reachable from ``p``."""
    seen = set()
    stack = [p]
    while stack:
        n = stack.pop()
        if n.field == TERMINAL_RANK or n.uid in seen:
            continue
        seen.add(n.uid)
        stack.extend(_children(n))
    return len(seen)


def is_ro(p: SP, above: int = -1) -> bool:
    """Check the reduced/ordered invariant structurally."""
    if p.field == TERMINAL_RANK:
        return p is TOP or p is BOT
    if p.field <= above or not p.branches:
        return False
    if [v for v, _ in p.branches] != sorted(p.bmap) or len(p.bmap) != len(p.branches):
        return False
    if any(c is p.default for c in p.bmap.values()):
        return False
    return all(is_ro(c, p.field) for c in _children(p))


# -- printing ---------------------------------------------------------------

def cubes(p: SP):
    """Yield the paths to Top as lists of ``(rank, op, value)`` literals."""
    def walk(n: SP, acc):
        if n is TOP:
            yield list(acc)
            return
        if n is BOT:
            return
        for v, c in n.branches:
            acc.append((n.field, "=", v))
            yield from walk(c, acc)
            acc.pop()
        if n.default is not BOT:
            lits = [(n.field, "!=", v) for v in n.bmap]
            acc.extend(lits)
            yield from walk(n.default, acc)
            del acc[len(acc) - len(lits):]
    yield from walk(p, [])


def show(p: SP, sep: str = "·") -> str:
    """Sum-of-products rendering, e.g. ``a=3·b=4 + b≠5·c=5``."""
    if p is TOP:
        return "⊤"
    if p is BOT:
        return "⊥"
    terms = []
    for cube in cubes(p):
        if not cube:
            terms.append("⊤")
            continue
        lits = [f"{FIELDS.name(f)}{'=' if op == '=' else '≠'}{VALUES.show(v)}" for f, op, v in cube]
        terms.append(sep.join(lits))
    return " + ".join(terms)


def show_ascii(p: SP) -> str:
    """Like :func:`show` but in NKPL concrete syntax."""
    if p is TOP:
        return "top"
    if p is BOT:
        return "bot"
    terms = []
    for cube in cubes(p):
        if not cube:
            terms.append("top")
            continue
        lits = [f"{FIELDS.name(f)}{op}{VALUES.show(v)}" for f, op, v in cube]
        terms.append(" ; ".join(lits))
    return " + ".join(terms)


def to_dot(p: SP, name: str = "sp") -> str:
    """Graphviz rendering: solid labelled edges are tests, dashed are defaults."""
    lines = [f"digraph {name} {{", '  node [shape=circle];']
    seen = set()
    stack = [p]
    while stack:
        n = stack.pop()
        if n.uid in seen:
            continue
        seen.add(n.uid)
        if n.field == TERMINAL_RANK:
            lines.append(f'  n{n.uid} [shape=box,label="{"⊤" if n is TOP else "⊥"}"];')
            continue
        lines.append(f'  n{n.uid} [label="{FIELDS.name(n.field)}"];')
        for v, c in n.branches:
            lines.append(f'  n{n.uid} -> n{c.uid} [label="{VALUES.show(v)}"];')
            stack.append(c)
        lines.append(f"  n{n.uid} -> n{n.default.uid} [style=dashed];")
        stack.append(n.default)
    lines.append("}")
    return "\n".join(lines)
