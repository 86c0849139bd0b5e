"""Deterministic symbolic automata via Brzozowski derivatives.

An STS is a plain ``dict`` from successor expression to a non-Bot SPP; the
SPPs of distinct successors are pairwise disjoint, so every (input, dup'ed
packet) pair leads to at most one successor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import exp as E
from . import spp as S
from .core import on_reset
from .exp import Exp
from .spp import SPP

STS = Dict[Exp, SPP]
DEFAULT_MAX_STATES = 100_000


class StateLimitExceeded(RuntimeError):
    def __init__(self, limit: int, expr: Exp):
        super().__init__(f"automaton exceeded {limit} states while expanding {E.show(expr)}")
        self.limit = limit
        self.expr = expr


_delta: Dict[Exp, STS] = {}


@on_reset
def _clear() -> None:
    _delta.clear()


def _put(r: STS, q: Exp, s: SPP) -> None:
    if s is S.BOT or q is E.BOT:
        return
    cur = r.get(q)
    r[q] = s if cur is None else S.union(cur, s)


def sts_insert(r: STS, s: SPP, q: Exp) -> STS:
    """Add ``s`` stepping to ``q`` while keeping the pieces disjoint."""
    if s is S.BOT or q is E.BOT:
        return dict(r)
    out: STS = {}
    rest = s
    for t, si in r.items():
        if rest is S.BOT:
            _put(out, t, si)
            continue
        ov = S.intersect(si, rest)
        if ov is S.BOT:
            _put(out, t, si)
            continue
        _put(out, E.union(q, t), ov)
        _put(out, t, S.diff(si, ov))
        rest = S.diff(rest, ov)
    _put(out, q, rest)
    return out


def _cover(r: STS) -> SPP:
    return S.union_all(r.values())


def sts_binary(op: str, r1: STS, r2: STS) -> STS:
    """Combine two STSs under union / intersect / xor / diff of traces."""
    if op == "union":
        if not r2:
            return dict(r1)
        if not r1:
            return dict(r2)
        mk = E.union
    elif op == "intersect":
        if not r1 or not r2:
            return {}
        mk = E.intersect
    elif op == "xor":
        if not r2:
            return dict(r1)
        if not r1:
            return dict(r2)
        mk = E.xor
    elif op == "diff":
        if not r1 or not r2:
            return dict(r1)
        mk = E.diff
    else:
        raise ValueError(f"unknown STS operation {op!r}")
    out: STS = {}
    for t1, s1 in r1.items():
        for t2, s2 in r2.items():
            ov = S.intersect(s1, s2)
            if ov is not S.BOT:
                _put(out, mk(t1, t2), ov)
    if op == "intersect":
        return out
    c2 = _cover(r2)
    for t1, s1 in r1.items():
        _put(out, t1, S.diff(s1, c2))
    if op != "diff":
        c1 = _cover(r1)
        for t2, s2 in r2.items():
            _put(out, t2, S.diff(s2, c1))
    return out


def sts_seq_left(s: SPP, r: STS) -> STS:
    if s is S.BOT:
        return {}
    if s is S.TOP:
        return dict(r)
    out: STS = {}
    for t, si in r.items():
        out = sts_insert(out, S.seq(s, si), t)
    return out


def sts_seq_right(r: STS, e: Exp) -> STS:
    out: STS = {}
    for t, si in r.items():
        _put(out, E.seq(t, e), si)
    return out


def is_deterministic(r: STS) -> bool:
    items = list(r.items())
    for i, (t, s) in enumerate(items):
        if s is S.BOT or t is E.BOT:
            return False
        for _, s2 in items[i + 1:]:
            if S.intersect(s, s2) is not S.BOT:
                return False
    return True


# -- derivatives ------------------------------------------------------------------

def epsilon(e: Exp) -> SPP:
    """One-step observation: the relation of traces that contain no dup."""
    return E.observe(e)


def delta(e: Exp) -> STS:
    """Transition structure: relation up to the first dup and its continuation."""
    if e.dup_free:
        return {}
    r = _delta.get(e)
    if r is not None:
        return r
    k = e.kind
    if k == E.DUP:
        r = {E.TOP: S.TOP}
    elif k == E.UNION:
        r = {}
        for a in e.args:
            r = sts_binary("union", r, delta(a))
    elif k == E.SEQ:
        head, rest = e.args[0], E.seq(*e.args[1:])
        r = sts_binary("union", sts_seq_right(delta(head), rest),
                       sts_seq_left(epsilon(head), delta(rest)))
    elif k == E.STAR:
        p = e.args[0]
        r = sts_seq_right(sts_seq_left(S.star(epsilon(p)), delta(p)), e)
    elif k == E.INTER:
        r = sts_binary("intersect", delta(e.args[0]), delta(e.args[1]))
    elif k == E.XOR:
        r = sts_binary("xor", delta(e.args[0]), delta(e.args[1]))
    elif k == E.DIFF:
        r = sts_binary("diff", delta(e.args[0]), delta(e.args[1]))
    else:
        r = {}
    _delta[e] = r
    return r


@dataclass
class Automaton:
    start: Exp
    states: List[Exp] = field(default_factory=list)
    delta: Dict[Exp, STS] = field(default_factory=dict)
    epsilon: Dict[Exp, SPP] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.states)

    def predecessors(self) -> Dict[Exp, List[tuple]]:
        preds: Dict[Exp, List[tuple]] = {q: [] for q in self.states}
        for q in self.states:
            for t, s in self.delta[q].items():
                preds[t].append((q, s))
        return preds

    def to_dot(self, name: str = "automaton") -> str:
        idx = {q: i for i, q in enumerate(self.states)}
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for q, i in idx.items():
            shape = "doublecircle" if self.epsilon[q] is not S.BOT else "circle"
            label = E.show(q).replace('"', '\\"')
            lines.append(f'  q{i} [shape={shape},tooltip="{label}",label="q{i}"];')
        for q, i in idx.items():
            for t, s in self.delta[q].items():
                lines.append(f'  q{i} -> q{idx[t]} [label="spp#{s.uid}"];')
        lines.append("}")
        return "\n".join(lines)


def build_automaton(e: Exp, max_states: Optional[int] = DEFAULT_MAX_STATES) -> Automaton:
    """Explore the derivatives reachable from ``e`` in discovery order."""
    a = Automaton(start=e)
    seen = {e}
    queue = [e]
    i = 0
    while i < len(queue):
        q = queue[i]
        i += 1
        a.states.append(q)
        a.epsilon[q] = epsilon(q)
        d = delta(q)
        a.delta[q] = d
        for t in d:
            if t not in seen:
                seen.add(t)
                queue.append(t)
                if max_states is not None and len(queue) > max_states:
                    raise StateLimitExceeded(max_states, t)
    return a
