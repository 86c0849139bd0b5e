"""Concrete reference semantics over an explicit finite universe.

Nothing here touches the decision diagrams: packets are plain tuples ordered
like the universe's fields, trace sets are Python sets, and bisimulation runs
on concrete packets.  Only the expression type is shared.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from .. import exp as E
from ..core import DomainError, Packet, Universe
from ..exp import Exp

Pk = Tuple[int, ...]
Trace = Tuple[Pk, ...]

DEFAULT_PACKET_CAP = 4096
DEFAULT_PAIR_CAP = 500_000


class OracleLimit(RuntimeError):
    """The oracle refuses work beyond desk scale."""


class Concrete:
    """Concrete observation and derivative functions for one universe."""

    def __init__(self, u: Universe, packet_cap: int = DEFAULT_PACKET_CAP):
        if u.size() > packet_cap:
            raise OracleLimit(f"universe has {u.size()} packets, cap is {packet_cap}")
        self.u = u
        self.pos = {f.rank: i for i, f in enumerate(u.fields)}
        self.packets: List[Pk] = list(u.tuples())
        self._obs: Dict[tuple, FrozenSet[Pk]] = {}
        self._der: Dict[tuple, Dict[Pk, Exp]] = {}

    def to_tuple(self, pk: Packet) -> Pk:
        r = pk.ranks()
        try:
            return tuple(r[f.rank] for f in self.u.fields)
        except KeyError as exc:
            raise DomainError(f"packet {pk!r} misses a universe field") from exc

    def to_packet(self, t: Pk) -> Packet:
        return self.u.packet(t)

    def _field(self, f: int) -> int:
        i = self.pos.get(f)
        if i is None:
            raise DomainError(f"field rank {f} is not in the universe")
        return i

    # E(e, a): final packets of dup-free traces
    def obs(self, e: Exp, a: Pk) -> FrozenSet[Pk]:
        key = (e, a)
        r = self._obs.get(key)
        if r is not None:
            return r
        k = e.kind
        if k == E.BOT_K or k == E.DUP:
            r = frozenset()
        elif k == E.TOP_K:
            r = frozenset((a,))
        elif k == E.TEST:
            f, v = e.args
            r = frozenset((a,)) if a[self._field(f)] == v else frozenset()
        elif k == E.TESTNE:
            f, v = e.args
            r = frozenset((a,)) if a[self._field(f)] != v else frozenset()
        elif k == E.MUT:
            f, v = e.args
            i = self._field(f)
            r = frozenset((a[:i] + (v,) + a[i + 1:],))
        elif k == E.UNION:
            r = frozenset().union(*(self.obs(x, a) for x in e.args))
        elif k == E.SEQ:
            cur = {a}
            for x in e.args:
                nxt = set()
                for b in cur:
                    nxt |= self.obs(x, b)
                cur = nxt
            r = frozenset(cur)
        elif k == E.STAR:
            r = frozenset(self._closure(e.args[0], a))
        elif k == E.INTER:
            r = self.obs(e.args[0], a) & self.obs(e.args[1], a)
        elif k == E.XOR:
            r = self.obs(e.args[0], a) ^ self.obs(e.args[1], a)
        elif k == E.DIFF:
            r = self.obs(e.args[0], a) - self.obs(e.args[1], a)
        else:
            raise DomainError("the oracle does not evaluate symbolic literals")
        self._obs[key] = r
        return r

    def _closure(self, p: Exp, a: Pk) -> Set[Pk]:
        seen = {a}
        stack = [a]
        while stack:
            b = stack.pop()
            for c in self.obs(p, b):
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    # D(e, a): packet logged by the first dup -> continuation
    def der(self, e: Exp, a: Pk) -> Dict[Pk, Exp]:
        if e.dup_free:
            return {}
        key = (e, a)
        r = self._der.get(key)
        if r is not None:
            return r
        k = e.kind
        r = {}
        if k == E.DUP:
            r = {a: E.TOP}
        elif k == E.UNION:
            for x in e.args:
                _merge(r, self.der(x, a))
        elif k == E.SEQ:
            head, rest = e.args[0], E.seq(*e.args[1:])
            for b, t in self.der(head, a).items():
                _merge(r, {b: E.seq(t, rest)})
            for b in self.obs(head, a):
                _merge(r, self.der(rest, b))
        elif k == E.STAR:
            p = e.args[0]
            for c in self._closure(p, a):
                for b, t in self.der(p, c).items():
                    _merge(r, {b: E.seq(t, e)})
        elif k in (E.INTER, E.XOR, E.DIFF):
            d1 = self.der(e.args[0], a)
            d2 = self.der(e.args[1], a)
            for b in d1.keys() | d2.keys():
                t1, t2 = d1.get(b), d2.get(b)
                if t1 is not None and t2 is not None:
                    t = {E.INTER: E.intersect, E.XOR: E.xor, E.DIFF: E.diff}[k](t1, t2)
                elif k == E.INTER:
                    continue
                elif t1 is not None:
                    t = t1
                elif k == E.XOR:
                    t = t2
                else:
                    continue
                if t is not E.BOT:
                    r[b] = t
        self._der[key] = r
        return r


def _merge(r: Dict[Pk, Exp], extra: Dict[Pk, Exp]) -> None:
    for b, t in extra.items():
        if t is E.BOT:
            continue
        cur = r.get(b)
        r[b] = t if cur is None else E.union(cur, t)


def naive_bisim(e1: Exp, e2: Exp, u: Universe, packet_cap: int = DEFAULT_PACKET_CAP,
                pair_cap: int = DEFAULT_PAIR_CAP) -> bool:
    """Worklist bisimulation over every packet of ``u``."""
    c = Concrete(u, packet_cap)
    return _explore(c, [(e1, e2, a) for a in c.packets], pair_cap) is None


def _explore(c: Concrete, start: Iterable[tuple], pair_cap: int) -> Optional[int]:
    """Breadth-first search for an observation mismatch; returns its depth."""
    todo = deque((s, 0) for s in start)
    seen = {s for s, _ in todo}
    while todo:
        (s1, s2, a), depth = todo.popleft()
        if c.obs(s1, a) != c.obs(s2, a):
            return depth
        d1, d2 = c.der(s1, a), c.der(s2, a)
        for b in d1.keys() | d2.keys():
            item = (d1.get(b, E.BOT), d2.get(b, E.BOT), b)
            if item not in seen:
                if len(seen) >= pair_cap:
                    raise OracleLimit(f"bisimulation explored more than {pair_cap} triples")
                seen.add(item)
                todo.append((item, depth + 1))
    return None


def distinguishing_depth(e1: Exp, e2: Exp, pk: Packet, u: Universe,
                         pair_cap: int = DEFAULT_PAIR_CAP) -> Optional[int]:
    """Number of dups before the traces of ``e1`` and ``e2`` at ``pk`` first differ."""
    c = Concrete(u)
    return _explore(c, [(e1, e2, c.to_tuple(pk))], pair_cap)


def differing_inputs(e1: Exp, e2: Exp, u: Universe, pair_cap: int = DEFAULT_PAIR_CAP) -> Set[Packet]:
    """Exact set of input packets whose trace sets differ."""
    c = Concrete(u)
    out = set()
    for a in c.packets:
        if _explore(c, [(e1, e2, a)], pair_cap) is not None:
            out.add(c.to_packet(a))
    return out


def nonempty_inputs(e: Exp, u: Universe, pair_cap: int = DEFAULT_PAIR_CAP) -> Set[Packet]:
    return differing_inputs(e, E.BOT, u, pair_cap)


# -- depth-bounded trace sets, by direct recursion on the semantics ----------------

def eval_traces(e: Exp, pk: Packet, u: Universe, depth: int) -> Set[Tuple[Packet, ...]]:
    """All traces of length at most ``depth`` produced by ``e`` on ``pk``.

    A trace lists the packet logged by each dup followed by the final packet.
    """
    c = Concrete(u)
    raw = _traces(c, e, c.to_tuple(pk), depth, {})
    return {tuple(c.to_packet(x) for x in tr) for tr in raw}


def input_prefixed(traces: Iterable[Tuple[Packet, ...]], pk: Packet) -> Set[Tuple[Packet, ...]]:
    """History view of traces: the input packet, then each dup'ed packet."""
    return {(pk,) + tr[:-1] for tr in traces}


def _traces(c: Concrete, e: Exp, a: Pk, n: int, memo: dict) -> FrozenSet[Trace]:
    if n < 1:
        return frozenset()
    key = (e, a, n)
    r = memo.get(key)
    if r is not None:
        return r
    k = e.kind
    if k == E.BOT_K:
        r = frozenset()
    elif k in (E.TOP_K, E.TEST, E.TESTNE, E.MUT):
        r = frozenset((b,) for b in c.obs(e, a))
    elif k == E.DUP:
        r = frozenset({(a, a)}) if n >= 2 else frozenset()
    elif k == E.UNION:
        r = frozenset().union(*(_traces(c, x, a, n, memo) for x in e.args))
    elif k == E.SEQ:
        cur = {(a,)}
        for x in e.args:
            nxt = set()
            for tr in cur:
                room = n - len(tr) + 1
                for t2 in _traces(c, x, tr[-1], room, memo):
                    nxt.add(tr[:-1] + t2)
            cur = nxt
        r = frozenset(cur)
    elif k == E.STAR:
        p = e.args[0]
        res = {(a,)}
        frontier = [(a,)]
        while frontier:
            nxt = []
            for tr in frontier:
                for t2 in _traces(c, p, tr[-1], n - len(tr) + 1, memo):
                    nt = tr[:-1] + t2
                    if nt not in res:
                        res.add(nt)
                        nxt.append(nt)
            frontier = nxt
        r = frozenset(res)
    elif k == E.INTER:
        r = _traces(c, e.args[0], a, n, memo) & _traces(c, e.args[1], a, n, memo)
    elif k == E.XOR:
        r = _traces(c, e.args[0], a, n, memo) ^ _traces(c, e.args[1], a, n, memo)
    elif k == E.DIFF:
        r = _traces(c, e.args[0], a, n, memo) - _traces(c, e.args[1], a, n, memo)
    else:
        raise DomainError("the oracle does not evaluate symbolic literals")
    memo[key] = r
    return r
