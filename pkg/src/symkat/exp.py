"""NetKAT expressions, normalised and hash-consed.

Smart constructors apply a small, sound rewrite set (units, annihilators,
ACI for union, associativity for seq, star collapse) so that Brzozowski
derivatives only reach finitely many distinct terms in practice.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Tuple, Union as _U

from . import sp as _sp
from . import spp as _spp
from .core import FIELDS, VALUES, field_rank, on_reset

BOT_K, TOP_K, TEST, TESTNE, MUT, DUP, UNION, SEQ, STAR, INTER, XOR, DIFF, SPLIT = range(13)
KIND_NAMES = ("bot", "top", "test", "testne", "mut", "dup", "union", "seq", "star",
              "intersect", "xor", "diff", "sp")


class Exp:
    __slots__ = ("kind", "args", "uid", "dup_free", "size", "__weakref__")

    def __init__(self, kind: int, args: tuple, uid: int):
        self.kind = kind
        self.args = args
        self.uid = uid
        if kind == DUP:
            self.dup_free = False
        elif kind in (UNION, SEQ, STAR, INTER, XOR, DIFF):
            self.dup_free = all(a.dup_free for a in args)
        else:
            self.dup_free = True
        if kind in (UNION, SEQ, STAR, INTER, XOR, DIFF):
            self.size = 1 + sum(a.size for a in args)
        else:
            self.size = 1

    def __repr__(self) -> str:
        return f"Exp({show(self)})"

    def __reduce__(self):
        raise TypeError("Exp nodes are session-bound and cannot be pickled")


_table: Dict[tuple, Exp] = {}


def _mk(kind: int, args: tuple) -> Exp:
    key = (kind, args)
    e = _table.get(key)
    if e is None:
        e = Exp(kind, args, len(_table) + 2)
        _table[key] = e
    return e


BOT = Exp(BOT_K, (), 0)
TOP = Exp(TOP_K, (), 1)
DUP_E: Exp


@on_reset
def _clear() -> None:
    global DUP_E
    _table.clear()
    _compiled.clear()
    DUP_E = _mk(DUP, ())


def node_count() -> int:
    return len(_table)


# -- constructors ---------------------------------------------------------------

def test(f, v: int) -> Exp:
    return _mk(TEST, (field_rank(f), v))


def test_ne(f, v: int) -> Exp:
    return _mk(TESTNE, (field_rank(f), v))


def mut(f, v: int) -> Exp:
    return _mk(MUT, (field_rank(f), v))


def dup() -> Exp:
    return DUP_E


def sp_lit(p: _sp.SP) -> Exp:
    """Embed a symbolic packet as a test (used for forward/backward results)."""
    if p is _sp.TOP:
        return TOP
    if p is _sp.BOT:
        return BOT
    return _mk(SPLIT, (p,))


def union(*es: Exp) -> Exp:
    ops = {}
    for e in es:
        if e.kind == UNION:
            for a in e.args:
                ops[a.uid] = a
        elif e is not BOT:
            ops[e.uid] = e
    if not ops:
        return BOT
    if len(ops) == 1:
        return next(iter(ops.values()))
    return _mk(UNION, tuple(ops[k] for k in sorted(ops)))


def union_all(es: Iterable[Exp]) -> Exp:
    return union(*es)


def seq(*es: Exp) -> Exp:
    ops = []
    for e in es:
        if e is BOT:
            return BOT
        if e.kind == SEQ:
            ops.extend(e.args)
        elif e is not TOP:
            ops.append(e)
    if not ops:
        return TOP
    if len(ops) == 1:
        return ops[0]
    return _mk(SEQ, tuple(ops))


def star(e: Exp) -> Exp:
    if e is BOT or e is TOP:
        return TOP
    if e.kind == STAR:
        return e
    return _mk(STAR, (e,))


def _ordered(a: Exp, b: Exp) -> Tuple[Exp, Exp]:
    return (a, b) if a.uid <= b.uid else (b, a)


def intersect(a: Exp, b: Exp) -> Exp:
    if a is b:
        return a
    if a is BOT or b is BOT:
        return BOT
    return _mk(INTER, _ordered(a, b))


def xor(a: Exp, b: Exp) -> Exp:
    if a is b:
        return BOT
    if a is BOT:
        return b
    if b is BOT:
        return a
    return _mk(XOR, _ordered(a, b))


def diff(a: Exp, b: Exp) -> Exp:
    if a is b or a is BOT:
        return BOT
    if b is BOT:
        return a
    return _mk(DIFF, (a, b))




def is_dup_free(e: Exp) -> bool:
    return e.dup_free


# -- test fragment ----------------------------------------------------------------

@dataclass(frozen=True)
class TTrue:
    pass


@dataclass(frozen=True)
class TFalse:
    pass


@dataclass(frozen=True)
class TEq:
    field: object
    value: int


@dataclass(frozen=True)
class TOr:
    left: "TestExp"
    right: "TestExp"


@dataclass(frozen=True)
class TAnd:
    left: "TestExp"
    right: "TestExp"


@dataclass(frozen=True)
class TNot:
    body: "TestExp"


TestExp = _U[TTrue, TFalse, TEq, TOr, TAnd, TNot]


def desugar(t: TestExp, polarity: int = 0) -> Exp:
    """Translate the test fragment into negation-free NetKAT.

    Polarity 0 gives ``t`` itself, polarity 1 its negation.
    """
    if isinstance(t, TTrue):
        return TOP if polarity == 0 else BOT
    if isinstance(t, TFalse):
        return BOT if polarity == 0 else TOP
    if isinstance(t, TEq):
        return test(t.field, t.value) if polarity == 0 else test_ne(t.field, t.value)
    if isinstance(t, TNot):
        return desugar(t.body, 1 - polarity)
    if isinstance(t, TOr):
        l, r = desugar(t.left, polarity), desugar(t.right, polarity)
        return union(l, r) if polarity == 0 else seq(l, r)
    if isinstance(t, TAnd):
        l, r = desugar(t.left, polarity), desugar(t.right, polarity)
        return seq(l, r) if polarity == 0 else union(l, r)
    raise TypeError(f"not a test expression: {t!r}")


# -- dup-free compilation ---------------------------------------------------------

_compiled: Dict[Exp, _spp.SPP] = {}
_clear()


def compile_dup_free(e: Exp) -> _spp.SPP:
    """The packet relation of a dup-free expression."""
    if not e.dup_free:
        raise ValueError(f"expression contains dup: {show(e)}")
    return observe(e)


def observe(e: Exp) -> _spp.SPP:
    """Final-packet relation of the dup-free traces of ``e`` (dup maps to Bot)."""
    r = _compiled.get(e)
    if r is not None:
        return r
    k = e.kind
    if k == BOT_K or k == DUP:
        r = _spp.BOT
    elif k == TOP_K:
        r = _spp.TOP
    elif k == TEST:
        r = _spp.test(*e.args)
    elif k == TESTNE:
        r = _spp.test_ne(*e.args)
    elif k == MUT:
        r = _spp.mut(*e.args)
    elif k == SPLIT:
        r = _spp.from_sp(e.args[0])
    elif k == UNION:
        r = _spp.union_all(observe(a) for a in e.args)
    elif k == SEQ:
        r = _spp.TOP
        for a in e.args:
            r = _spp.seq(r, observe(a))
            if r is _spp.BOT:
                break
    elif k == STAR:
        r = _spp.star(observe(e.args[0]))
    elif k == INTER:
        r = _spp.intersect(observe(e.args[0]), observe(e.args[1]))
    elif k == XOR:
        r = _spp.xor(observe(e.args[0]), observe(e.args[1]))
    else:
        r = _spp.diff(observe(e.args[0]), observe(e.args[1]))
    _compiled[e] = r
    return r


# -- printing ----------------------------------------------------------------------

_PREC = {UNION: 1, XOR: 2, DIFF: 3, INTER: 4, SEQ: 5, STAR: 6}


def _atom(e: Exp) -> str:
    k = e.kind
    if k == BOT_K:
        return "bot"
    if k == TOP_K:
        return "top"
    if k == DUP:
        return "dup"
    if k == SPLIT:
        return f"({_sp.show_ascii(e.args[0])})"
    f, v = e.args
    op = {TEST: "=", TESTNE: "!=", MUT: "<-"}[k]
    return f"{FIELDS.name(f)}{op}{VALUES.show(v)}"


def show(e: Exp, ctx: int = 0) -> str:
    """NKPL concrete syntax; the output parses back to the same node."""
    k = e.kind
    p = _PREC.get(k)
    if p is None:
        return _atom(e)
    if k == UNION:
        body = " + ".join(show(a, 2) for a in e.args)
    elif k == SEQ:
        body = " ; ".join(show(a, 6) for a in e.args)
    elif k == STAR:
        inner = e.args[0]
        body = (show(inner, 7) if inner.kind in _PREC else f"({_atom(inner)})") + "*"
    else:
        sym = {XOR: "^", DIFF: "-", INTER: "&"}[k]
        body = f"{show(e.args[0], p)} {sym} {show(e.args[1], p + 1)}"
    return f"({body})" if p < ctx else body


def subterms(e: Exp):
    """Post-order walk over distinct subterms."""
    seen = set()
    out = []

    def go(n: Exp):
        if n.uid in seen:
            return
        seen.add(n.uid)
        if n.kind in _PREC:
            for a in n.args:
                go(a)
        out.append(n)
    go(e)
    return out
