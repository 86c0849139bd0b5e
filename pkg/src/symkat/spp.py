"""Symbolic packet programs: canonical diagrams for dup-free packet relations.

A node ``(f, branches, muts, default)`` reads the input value ``x`` of field
``f``:

* if ``x`` is a key of ``branches``, the output value of ``f`` is any key
  ``w`` of ``branches[x]`` and evaluation continues with ``branches[x][w]``;
* otherwise ``f`` may be set to any key ``w`` of ``muts`` (continuing with
  ``muts[w]``), and, when ``x`` is not itself a key of ``muts``, ``f`` may
  also keep its value and continue with ``default``.

``Top`` is the identity relation and ``Bot`` the empty one.  Nodes are
hash-consed; every constructor goes through :func:`sppsc`.
"""
from __future__ import annotations

from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from . import sp as _sp
from .core import FIELDS, TERMINAL_RANK, VALUES, Packet, field_rank, on_reset
from .sp import SP

MutMap = Dict[int, "SPP"]


class StarDivergence(RuntimeError):
    """The doubling loop for star hit its iteration cap."""


class SPP:
    __slots__ = ("field", "branches", "muts", "bmap", "mmap", "default", "uid", "__weakref__")

    def __init__(self, field, branches, muts, default, uid):
        self.field = field
        self.branches = branches
        self.muts = muts
        self.bmap: Dict[int, MutMap] = {v: dict(m) for v, m in branches}
        self.mmap: MutMap = dict(muts)
        self.default = default
        self.uid = uid

    @property
    def is_terminal(self) -> bool:
        return self.field == TERMINAL_RANK

    def __repr__(self) -> str:
        if self is TOP:
            return "SPP.Top"
        if self is BOT:
            return "SPP.Bot"
        return f"SPP#{self.uid}"

    def __reduce__(self):
        raise TypeError("SPP nodes are session-bound and cannot be pickled")


BOT = SPP(TERMINAL_RANK, (), (), None, 0)
TOP = SPP(TERMINAL_RANK, (), (), None, 1)

_table: Dict[tuple, SPP] = {}
_memo: Dict[tuple, object] = {}
STAR_CAP = 64


@on_reset
def _clear() -> None:
    _table.clear()
    _memo.clear()


def node_count() -> int:
    return len(_table)


def clear_memo() -> None:
    """Drop operation caches; interned nodes stay valid."""
    _memo.clear()


def _freeze(m: Mapping[int, SPP]) -> Tuple[Tuple[int, SPP], ...]:
    return tuple(sorted(m.items(), key=lambda kv: kv[0]))


def _same_as_default(mi: MutMap, v: int, m: MutMap, d: SPP) -> bool:
    if v in m or d is BOT:
        if len(mi) != len(m):
            return False
        return all(mi.get(w) is p for w, p in m.items())
    if len(mi) != len(m) + 1 or mi.get(v) is not d:
        return False
    return all(mi.get(w) is p for w, p in m.items())


def sppsc(f, b: Mapping[int, Mapping[int, SPP]], m: Mapping[int, SPP], d: SPP) -> SPP:
    """Smart constructor restoring the reduced form.

    A ``Bot`` default-assignment for ``w`` still blocks the identity case on
    input ``w``; when it is dropped, an explicit test branch for ``w`` with a
    copy of the surviving assignments keeps that behaviour.
    """
    f = field_rank(f)
    m1 = {w: p for w, p in m.items() if p is not BOT}
    b1: Dict[int, MutMap] = {}
    for v, mi in b.items():
        b1[v] = {w: p for w, p in mi.items() if p is not BOT}
    for w, p in m.items():
        if p is BOT and w not in b1:
            b1[w] = m1
    kept = {v: mi for v, mi in b1.items() if not _same_as_default(mi, v, m1, d)}
    if not m1 and not kept:
        return d
    branches = tuple(sorted(((v, _freeze(mi)) for v, mi in kept.items()), key=lambda kv: kv[0]))
    muts = _freeze(m1)
    key = (f, branches, muts, d)
    n = _table.get(key)
    if n is None:
        n = SPP(f, branches, muts, d, len(_table) + 2)
        _table[key] = n
    return n


# -- primitives --------------------------------------------------------------

def test(f, v: int) -> SPP:
    return sppsc(f, {v: {v: TOP}}, {}, BOT)


def test_ne(f, v: int) -> SPP:
    return sppsc(f, {v: {}}, {}, TOP)


def mut(f, v: int) -> SPP:
    return sppsc(f, {}, {v: TOP}, BOT)


def from_sp(p: SP) -> SPP:
    """Embed a packet set as the partial identity relation on it."""
    if p is _sp.TOP:
        return TOP
    if p is _sp.BOT:
        return BOT
    key = ("id", p)
    r = _memo.get(key)
    if r is None:
        r = sppsc(p.field, {v: {v: from_sp(c)} for v, c in p.branches}, {}, from_sp(p.default))
        _memo[key] = r
    return r


# -- operations ---------------------------------------------------------------

def _get(bmap: Mapping[int, MutMap], mmap: MutMap, d: SPP, v: int) -> MutMap:
    mi = bmap.get(v)
    if mi is not None:
        return mi
    if v in mmap or d is BOT:
        return mmap
    r = dict(mmap)
    r[v] = d
    return r


def get(s: SPP, v: int) -> MutMap:
    """Behaviour of node ``s`` on input value ``v`` as an output map."""
    return _get(s.bmap, s.mmap, s.default, v)


def _split(p: SPP, f: int):
    """Parts of ``p`` seen as a node on ``f``, expanding if needed."""
    if p.field == f:
        return p.bmap, p.mmap, p.default
    return {}, {}, p


_TABLES = _sp._TABLES
OPS = ("union", "intersect", "xor", "diff")
_COMMUTATIVE = {"union", "intersect", "xor"}


def _shortcut(op: str, p: SPP, q: SPP) -> Optional[SPP]:
    if op == "union":
        if p is q or q is BOT:
            return p
        if p is BOT:
            return q
    elif op == "intersect":
        if p is q or p is BOT:
            return p
        if q is BOT:
            return q
    elif op == "xor":
        if p is q:
            return BOT
        if q is BOT:
            return p
        if p is BOT:
            return q
    elif op == "diff":
        if p is q or p is BOT:
            return BOT
        if q is BOT:
            return p
    return None


def _vec(op: str, m1: MutMap, m2: MutMap) -> MutMap:
    if m1 is m2 and op in ("union", "intersect"):
        return m1
    return {w: binary(op, m1.get(w, BOT), m2.get(w, BOT)) for w in m1.keys() | m2.keys()}


def binary(op: str, p: SPP, q: SPP) -> SPP:
    """Pointwise union / intersect / xor / diff of two relations."""
    r = _shortcut(op, p, q)
    if r is not None:
        return r
    if p.field == TERMINAL_RANK and q.field == TERMINAL_RANK:
        return BOT if _TABLES[op][(p is TOP, q is TOP)] is _sp.BOT else TOP
    if op in _COMMUTATIVE and p.uid > q.uid:
        p, q = q, p
    key = (op, p, q)
    r = _memo.get(key)
    if r is not None:
        return r
    f = min(p.field, q.field)
    bp, mp, dp = _split(p, f)
    bq, mq, dq = _split(q, f)
    b = {}
    for v in bp.keys() | bq.keys() | mp.keys() | mq.keys():
        b[v] = _vec(op, _get(bp, mp, dp, v), _get(bq, mq, dq, v))
    r = sppsc(f, b, _vec(op, mp, mq), binary(op, dp, dq))
    _memo[key] = r
    return r


def union(p: SPP, q: SPP) -> SPP:
    return binary("union", p, q)


def intersect(p: SPP, q: SPP) -> SPP:
    return binary("intersect", p, q)


def xor(p: SPP, q: SPP) -> SPP:
    return binary("xor", p, q)


def diff(p: SPP, q: SPP) -> SPP:
    return binary("diff", p, q)


def union_all(ps: Iterable[SPP]) -> SPP:
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


def _add(acc: MutMap, w: int, s: SPP) -> None:
    if s is BOT:
        return
    cur = acc.get(w)
    acc[w] = s if cur is None else union(cur, s)


def _compose(pm: MutMap, bq, mq, dq) -> MutMap:
    acc: MutMap = {}
    for v1, p1 in pm.items():
        for w, q1 in _get(bq, mq, dq, v1).items():
            _add(acc, w, seq(p1, q1))
    return acc


def seq(p: SPP, q: SPP) -> SPP:
    """Relational composition: run ``p`` then ``q`` on each output."""
    if p is BOT or q is BOT:
        return BOT
    if p is TOP:
        return q
    if q is TOP:
        return p
    key = ("seq", p, q)
    r = _memo.get(key)
    if r is not None:
        return r
    f = min(p.field, q.field)
    bp, mp, dp = _split(p, f)
    bq, mq, dq = _split(q, f)
    m_a = _compose(mp, bq, mq, dq)
    m_b = {w: seq(dp, q1) for w, q1 in mq.items()}
    b = {}
    for v in bp.keys() | bq.keys() | mp.keys() | mq.keys() | m_a.keys():
        b[v] = _compose(_get(bp, mp, dp, v), bq, mq, dq)
    r = sppsc(f, b, _vec("union", m_a, m_b), seq(dp, dq))
    _memo[key] = r
    return r


def seq_all(ps: Iterable[SPP]) -> SPP:
    acc = TOP
    for p in ps:
        acc = seq(acc, p)
    return acc


def star(p: SPP, cap: int = None) -> SPP:
    """Reflexive-transitive closure by repeated squaring of ``Top + p``."""
    if p is BOT or p is TOP:
        return TOP
    key = ("star", p)
    r = _memo.get(key)
    if r is not None:
        return r
    cap = STAR_CAP if cap is None else cap
    q = union(TOP, p)
    for _ in range(cap):
        q2 = seq(q, q)
        if q2 is q:
            _memo[key] = q
            return q
        q = q2
    raise StarDivergence(f"star did not converge within {cap} doublings")


# -- flattening -------------------------------------------------------------------

def _sp_vec_add(acc: Dict[int, SP], w: int, p: SP) -> None:
    cur = acc.get(w)
    acc[w] = p if cur is None else _sp.union(cur, p)


def fwd(s: SPP) -> SP:
    """All packets produced by ``s`` on some input."""
    if s is TOP:
        return _sp.TOP
    if s is BOT:
        return _sp.BOT
    key = ("fwd", s)
    r = _memo.get(key)
    if r is not None:
        return r
    b = s.bmap
    m = s.mmap
    dfwd = fwd(s.default)
    out: Dict[int, SP] = {}
    for w, p1 in m.items():
        _sp_vec_add(out, w, fwd(p1))
    produced: Dict[int, SP] = {}
    for mi in b.values():
        for w, p1 in mi.items():
            _sp_vec_add(produced, w, fwd(p1))
    for w, p1 in produced.items():
        _sp_vec_add(out, w, p1)
        if w not in b and w not in m:
            _sp_vec_add(out, w, dfwd)
    for v in b:
        if v not in produced:
            out.setdefault(v, _sp.BOT)
    r = _sp.spsc(s.field, out, dfwd)
    _memo[key] = r
    return r


def bwd(s: SPP) -> SP:
    """All inputs on which ``s`` produces at least one packet."""
    if s is TOP:
        return _sp.TOP
    if s is BOT:
        return _sp.BOT
    key = ("bwd", s)
    r = _memo.get(key)
    if r is not None:
        return r
    dmut = _sp.union_all(bwd(p1) for p1 in s.mmap.values())
    out: Dict[int, SP] = {}
    for v, mi in s.bmap.items():
        out[v] = _sp.union_all(bwd(p1) for p1 in mi.values())
    for w in s.mmap:
        if w not in out:
            out[w] = dmut
    r = _sp.spsc(s.field, out, _sp.union(dmut, bwd(s.default)))
    _memo[key] = r
    return r


def push(p: SP, s: SPP) -> SP:
    """Image of the packet set ``p`` under ``s``."""
    if p is _sp.BOT or s is BOT:
        return _sp.BOT
    key = ("push", p, s)
    r = _memo.get(key)
    if r is None:
        r = fwd(seq(from_sp(p), s))
        _memo[key] = r
    return r


def pull(s: SPP, p: SP) -> SP:
    """Inputs of ``s`` that can produce a packet in ``p``."""
    if p is _sp.BOT or s is BOT:
        return _sp.BOT
    key = ("pull", s, p)
    r = _memo.get(key)
    if r is None:
        r = bwd(seq(s, from_sp(p)))
        _memo[key] = r
    return r


# -- concrete reading ---------------------------------------------------------

def _eval(s: SPP, vals: Tuple[int, ...], out: Set[Tuple[int, ...]]) -> None:
    while True:
        if s is BOT:
            return
        if s is TOP:
            out.add(vals)
            return
        f = s.field
        x = vals[f]
        mi = s.bmap.get(x)
        if mi is not None:
            for w, c in mi.items():
                _eval(c, vals if w == x else vals[:f] + (w,) + vals[f + 1:], out)
            return
        for w, c in s.mmap.items():
            _eval(c, vals if w == x else vals[:f] + (w,) + vals[f + 1:], out)
        if x in s.mmap:
            return
        s = s.default


def eval_tuple(s: SPP, vals: Tuple[int, ...]) -> Set[Tuple[int, ...]]:
    """Outputs of ``s`` on a packet given as a tuple indexed by field rank."""
    out: Set[Tuple[int, ...]] = set()
    _eval(s, tuple(vals), out)
    return out


def eval_packet(s: SPP, pk: Packet) -> Set[Packet]:
    """Exact set of output packets of ``s`` on ``pk``, read off the diagram."""
    ranks = pk.ranks()
    width = max(max(ranks, default=-1) + 1, len(FIELDS))
    missing = object()
    vals = tuple(ranks.get(r, missing) for r in range(width))
    # Packets may leave out fields the diagram never looks at.
    outs = eval_tuple(s, vals)
    return {Packet._from_ranks({r: v for r, v in enumerate(o) if v is not missing}) for o in outs}


# -- structure -----------------------------------------------------------------------

def children(s: SPP):
    for _, mi in s.branches:
        for _, c in mi:
            yield c
    for _, c in s.muts:
        yield c
    yield s.default


def size(s: SPP) -> int:
    seen = set()
    stack = [s]
    while stack:
        n = stack.pop()
        if n.field == TERMINAL_RANK or n.uid in seen:
            continue
        seen.add(n.uid)
        stack.extend(children(n))
    return len(seen)


def is_ro(s: SPP, above: int = -1) -> bool:
    """Structural check of the reduced/ordered conditions."""
    if s.field == TERMINAL_RANK:
        return s is TOP or s is BOT
    if s.field <= above:
        return False
    if not s.branches and not s.muts:
        return False
    if [v for v, _ in s.branches] != sorted(s.bmap) or [w for w, _ in s.muts] != sorted(s.mmap):
        return False
    for w, c in s.muts:
        if c is BOT:
            return False
    for v, mi in s.branches:
        if [w for w, _ in mi] != sorted(w for w, _ in mi):
            return False
        if any(c is BOT for _, c in mi):
            return False
        if _same_as_default(dict(mi), v, s.mmap, s.default):
            return False
    return all(is_ro(c, s.field) for c in children(s))


def show(s: SPP) -> str:
    """Render as a NetKAT expression (tree expansion, for small diagrams)."""
    if s is TOP:
        return "top"
    if s is BOT:
        return "bot"
    name = FIELDS.name(s.field)
    terms = []

    def asg(m):
        parts = []
        for w, c in sorted(m.items()):
            rest = show(c)
            a = f"{name}<-{VALUES.show(w)}"
            parts.append(a if rest == "top" else f"{a} ; {_paren(rest)}")
        return parts

    for v, mi in s.branches:
        inner = asg(dict(mi)) or ["bot"]
        body = " + ".join(inner)
        terms.append(f"{name}={VALUES.show(v)} ; ({body})" if len(inner) > 1 else f"{name}={VALUES.show(v)} ; {inner[0]}")
    guard = " ; ".join(f"{name}!={VALUES.show(v)}" for v in s.bmap)
    dparts = asg(s.mmap)
    if s.default is not BOT:
        ident = " ; ".join(f"{name}!={VALUES.show(w)}" for w in s.mmap)
        rest = show(s.default)
        dparts.append(" ; ".join(x for x in (ident, rest if rest != "top" or not ident else "") if x) or "top")
    if dparts:
        body = " + ".join(dparts)
        if guard:
            terms.append(f"{guard} ; ({body})")
        else:
            terms.append(body)
    return " + ".join(terms) if terms else "bot"


def _paren(text: str) -> str:
    return f"({text})" if "+" in text else text


def to_dot(s: SPP, name: str = "spp") -> str:
    """Graphviz rendering: circles test a field, diamonds assign it."""
    lines = [f"digraph {name} {{"]
    seen = set()
    stack = [s]
    k = 0
    while stack:
        n = stack.pop()
        if n.uid in seen:
            continue
        seen.add(n.uid)
        if n.field == TERMINAL_RANK:
            lines.append(f'  n{n.uid} [shape=box,label="{"⊤" if n is TOP else "⊥"}"];')
            continue
        lines.append(f'  n{n.uid} [shape=circle,label="{FIELDS.name(n.field)}"];')
        for v, mi in n.branches:
            k += 1
            lines.append(f"  a{k} [shape=diamond,label=\"\",width=0.15,height=0.15];")
            lines.append(f'  n{n.uid} -> a{k} [label="{VALUES.show(v)}"];')
            for w, c in mi:
                lines.append(f'  a{k} -> n{c.uid} [label="{VALUES.show(w)}"];')
                stack.append(c)
        k += 1
        lines.append(f"  a{k} [shape=diamond,label=\"\",width=0.15,height=0.15];")
        lines.append(f"  n{n.uid} -> a{k} [style=dashed];")
        for w, c in n.muts:
            lines.append(f'  a{k} -> n{c.uid} [label="{VALUES.show(w)}"];')
            stack.append(c)
        lines.append(f"  a{k} -> n{n.default.uid} [style=dashed];")
        stack.append(n.default)
    lines.append("}")
    return "\n".join(lines)
