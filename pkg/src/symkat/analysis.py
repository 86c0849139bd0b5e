"""Forward and backward fixpoints over symbolic automata, and the deciders built on them."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from . import exp as E
from . import sp
from . import spp as S
from .automaton import DEFAULT_MAX_STATES, Automaton, build_automaton
from .core import Packet
from .exp import Exp
from .sp import SP


@dataclass
class Verdict:
    equal: bool
    witness_inputs: Optional[SP] = None
    witness_packet: Optional[Packet] = None
    states: int = 0

    def __bool__(self) -> bool:
        return self.equal


def _worklist(todo: Dict[Exp, SP], order: list):
    """Yield states with pending work, cycling in discovery order."""
    while True:
        progressed = False
        for q in order:
            if todo.get(q, sp.BOT) is not sp.BOT:
                progressed = True
                yield q
        if not progressed:
            return


def forward_reach(a: Automaton, early_exit: bool = False) -> SP:
    """Final packets over all inputs; with ``early_exit`` any nonempty part of it."""
    done: Dict[Exp, SP] = {q: sp.BOT for q in a.states}
    todo: Dict[Exp, SP] = {a.start: sp.TOP}
    for q in _worklist(todo, a.states):
        p = sp.diff(todo.pop(q), done[q])
        if p is sp.BOT:
            continue
        done[q] = sp.union(done[q], p)
        if early_exit:
            out = S.push(p, a.epsilon[q])
            if out is not sp.BOT:
                return out
        for t, s in a.delta[q].items():
            img = S.push(p, s)
            if img is not sp.BOT:
                todo[t] = sp.union(todo.get(t, sp.BOT), img)
    return sp.union_all(S.push(done[q], a.epsilon[q]) for q in a.states)


def backward_reach(a: Automaton) -> SP:
    """Inputs at the start state that produce at least one trace."""
    preds = a.predecessors()
    done: Dict[Exp, SP] = {q: sp.BOT for q in a.states}
    todo: Dict[Exp, SP] = {}
    for q in a.states:
        p = S.pull(a.epsilon[q], sp.TOP)
        if p is not sp.BOT:
            todo[q] = p
    for q in _worklist(todo, a.states):
        p = sp.diff(todo.pop(q), done[q])
        if p is sp.BOT:
            continue
        done[q] = sp.union(done[q], p)
        for src, s in preds[q]:
            pre = S.pull(s, p)
            if pre is not sp.BOT:
                todo[src] = sp.union(todo.get(src, sp.BOT), pre)
    return done[a.start]


def _decide(e: Exp, max_states: Optional[int]) -> Verdict:
    a = build_automaton(e, max_states)
    if forward_reach(a, early_exit=True) is sp.BOT:
        return Verdict(True, states=len(a))
    w = backward_reach(a)
    return Verdict(False, w, sp.sample(w), states=len(a))


def check_equiv(e1: Exp, e2: Exp, max_states: Optional[int] = DEFAULT_MAX_STATES) -> Verdict:
    """Trace equivalence; on failure the witnesses are the inputs whose traces differ."""
    return _decide(E.xor(e1, e2), max_states)


def check_inclusion(e1: Exp, e2: Exp, max_states: Optional[int] = DEFAULT_MAX_STATES) -> Verdict:
    """Does every trace of ``e1`` belong to ``e2``?"""
    return _decide(E.diff(e1, e2), max_states)


def emptiness(e: Exp, max_states: Optional[int] = DEFAULT_MAX_STATES) -> Verdict:
    """``equal`` is true when ``e`` has no traces at all."""
    return _decide(e, max_states)


def forward(e: Exp, max_states: Optional[int] = DEFAULT_MAX_STATES) -> SP:
    return forward_reach(build_automaton(e, max_states))


def backward(e: Exp, max_states: Optional[int] = DEFAULT_MAX_STATES) -> SP:
    return backward_reach(build_automaton(e, max_states))
