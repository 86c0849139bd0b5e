"""Property-based fuzzing of the symbolic engine against brute-force semantics.

Packet sets are bitmasks over an enumerated universe; relations are tuples
of bitmasks indexed by input packet.  Everything is recomputed from the
diagrams' direct reading (membership / path evaluation), never from the
algebraic operations under test.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .. import analysis as A
from .. import core
from .. import exp as E
from .. import sp as SPm
from .. import spp as SPPm
from ..core import Universe
from . import randexp as R
from .semantics import differing_inputs, naive_bisim

SP_OPS = ("union", "seq", "intersect", "xor", "diff", "star", "exists", "forall")
SPP_OPS = ("union", "seq", "intersect", "xor", "diff", "star", "fwd", "bwd", "push", "pull")


class Brute:
    """Bitmask semantics for SPs and SPPs over a small universe with field ranks 0..k-1."""

    def __init__(self, u: Universe):
        ranks = [f.rank for f in u.fields]
        if ranks != list(range(len(ranks))):
            raise ValueError("universe must list every session field in rank order")
        self.u = u
        self.packets = list(u.tuples())
        self.index = {p: i for i, p in enumerate(self.packets)}
        self.full = (1 << len(self.packets)) - 1
        self.values = [vs for vs in u.values.values()]
        self._sets: Dict[int, int] = {}
        self._rels: Dict[int, Tuple[int, ...]] = {}

    def mask(self, pks) -> int:
        m = 0
        for p in pks:
            m |= 1 << self.index[p]
        return m

    def sp_set(self, p: SPm.SP) -> int:
        m = self._sets.get(p.uid)
        if m is None:
            m = self.mask(pk for pk in self.packets if SPm.member(p, pk))
            self._sets[p.uid] = m
        return m

    def spp_rel(self, s: SPPm.SPP) -> Tuple[int, ...]:
        r = self._rels.get(s.uid)
        if r is None:
            r = tuple(self.mask(SPPm.eval_tuple(s, pk)) for pk in self.packets)
            self._rels[s.uid] = r
        return r

    def clear(self) -> None:
        self._sets.clear()
        self._rels.clear()

    # set-level reference operations
    def members(self, m: int):
        i = 0
        while m:
            if m & 1:
                yield i
            m >>= 1
            i += 1

    def quantify(self, kind: str, f: int, m: int) -> int:
        out = 0
        for i, pk in enumerate(self.packets):
            hits = [m >> self.index[pk[:f] + (v,) + pk[f + 1:]] & 1 for v in self.values[f]]
            if (any(hits) if kind == "exists" else all(hits)):
                out |= 1 << i
        return out

    def compose(self, r1, r2) -> Tuple[int, ...]:
        out = []
        for m in r1:
            acc = 0
            for j in self.members(m):
                acc |= r2[j]
            out.append(acc)
        return tuple(out)

    def closure(self, r) -> Tuple[int, ...]:
        out = []
        for i in range(len(self.packets)):
            seen = 1 << i
            frontier = seen
            while frontier:
                nxt = 0
                for j in self.members(frontier):
                    nxt |= r[j]
                frontier = nxt & ~seen
                seen |= nxt
            out.append(seen)
        return tuple(out)

    def image(self, p: int, r) -> int:
        acc = 0
        for i in self.members(p):
            acc |= r[i]
        return acc

    def preimage(self, r, p: int) -> int:
        return self.mask(self.packets[i] for i, m in enumerate(r) if m & p)


_SET = {
    "union": lambda a, b: a | b,
    "seq": lambda a, b: a & b,
    "intersect": lambda a, b: a & b,
    "xor": lambda a, b: a ^ b,
    "diff": lambda a, b: a & ~b,
}


def check_sp_op(br: Brute, op: str, p: SPm.SP, q: SPm.SP, f: int = 0) -> bool:
    """Does the symbolic result of ``op`` agree with the set-level reference?"""
    if op in _SET:
        got = SPm.binary(op, p, q)
        want = _SET[op](br.sp_set(p), br.sp_set(q)) & br.full
    elif op == "star":
        got, want = SPm.star(p), br.full
    elif op in ("exists", "forall"):
        got = (SPm.exists if op == "exists" else SPm.forall)(f, p)
        want = br.quantify(op, f, br.sp_set(p))
    else:
        raise ValueError(op)
    return SPm.is_ro(got) and br.sp_set(got) == want


def check_spp_op(br: Brute, op: str, s: SPPm.SPP, t: SPPm.SPP, p: Optional[SPm.SP] = None) -> bool:
    if op in ("union", "intersect", "xor", "diff"):
        got = SPPm.binary(op, s, t)
        fn = _SET[op]
        want = tuple(fn(a, b) & br.full for a, b in zip(br.spp_rel(s), br.spp_rel(t)))
        return SPPm.is_ro(got) and br.spp_rel(got) == want
    if op == "seq":
        got = SPPm.seq(s, t)
        return SPPm.is_ro(got) and br.spp_rel(got) == br.compose(br.spp_rel(s), br.spp_rel(t))
    if op == "star":
        got = SPPm.star(s)
        return SPPm.is_ro(got) and br.spp_rel(got) == br.closure(br.spp_rel(s))
    if op == "fwd":
        return br.sp_set(SPPm.fwd(s)) == br.image(br.full, br.spp_rel(s))
    if op == "bwd":
        return br.sp_set(SPPm.bwd(s)) == br.preimage(br.spp_rel(s), br.full)
    if op == "push":
        return br.sp_set(SPPm.push(p, s)) == br.image(br.sp_set(p), br.spp_rel(s))
    if op == "pull":
        return br.sp_set(SPPm.pull(s, p)) == br.preimage(br.spp_rel(s), br.sp_set(p))
    raise ValueError(op)


@dataclass
class FuzzFailure:
    stage: str
    detail: str


@dataclass
class FuzzReport:
    seed: int
    counts: Dict[str, int] = field(default_factory=dict)
    failures: List[FuzzFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        lines = [f"seed {self.seed}: " + ", ".join(f"{k}={v}" for k, v in self.counts.items())]
        if self.ok:
            lines.append("no failures")
        for f in self.failures[:10]:
            lines.append(f"FAIL [{f.stage}] {f.detail}")
        return "\n".join(lines)


def small_universe(fields: Sequence[str] = ("a", "b"), values: Sequence[int] = (0, 1, 2)) -> Universe:
    """Mentioned values plus one fresh value per field (stands in for the open value space)."""
    fresh = max(values) + 1
    return Universe.of({f: list(values) + [fresh] for f in fields})


def fuzz_suite(seed: int = 0, cases: int = 1000, exp_cases: Optional[int] = None,
               fields: Sequence[str] = ("a", "b"), values: Sequence[int] = (0, 1, 2),
               exp_size: int = 12) -> FuzzReport:
    """Run the four fuzz stages; ``cases`` pairs per operator, ``exp_cases`` expression pairs."""
    rng = random.Random(seed)
    core.reset(list(fields))
    u = small_universe(fields, values)
    br = Brute(u)
    ranks = list(range(len(fields)))
    rep = FuzzReport(seed)
    exp_cases = cases if exp_cases is None else exp_cases

    def fail(stage: str, detail: str) -> None:
        rep.failures.append(FuzzFailure(stage, detail))

    # 1: exhaustive small SPs, canonicity by semantic key
    seen: Dict[int, SPm.SP] = {}
    n = 0
    if cases:
        for p in enumerate_sps(ranks[:2], values[:2]):
            n += 1
            key = br.sp_set(p)
            other = seen.setdefault(key, p)
            if other is not p:
                fail("sp-canonicity", f"{SPm.show(p)} and {SPm.show(other)} denote the same set")
    rep.counts["sp-enumerated"] = n

    # 2: random SP/SPP operations
    for op in SP_OPS:
        bad = 0
        for _ in range(cases):
            p, q = R.random_sp(rng, ranks, values), R.random_sp(rng, ranks, values)
            if not check_sp_op(br, op, p, q, rng.choice(ranks)):
                bad += 1
                if bad == 1:
                    fail(f"sp-{op}", f"p={SPm.show(p)} q={SPm.show(q)}")
        rep.counts[f"sp-{op}"] = cases
    rel_seen: Dict[Tuple[int, ...], SPPm.SPP] = {}
    for op in SPP_OPS:
        bad = 0
        for _ in range(cases):
            s, t = R.random_spp(rng, ranks, values), R.random_spp(rng, ranks, values)
            p = R.random_sp(rng, ranks, values)
            for x in (s, t):
                other = rel_seen.setdefault(br.spp_rel(x), x)
                if other is not x:
                    fail("spp-canonicity", f"SPP#{x.uid} and SPP#{other.uid} denote the same relation")
            if not check_spp_op(br, op, s, t, p):
                bad += 1
                if bad == 1:
                    fail(f"spp-{op}", f"s={SPPm.show(s)} t={SPPm.show(t)}")
        rep.counts[f"spp-{op}"] = cases

    # 3: symbolic equivalence against naive bisimulation, with witness sets
    bad = 0
    for _ in range(exp_cases):
        e1, e2 = R.random_pair(rng, list(fields), list(values), exp_size)
        ok, why = compare_exp(e1, e2, u)
        if not ok:
            bad += 1
            if bad == 1:
                s1, s2 = R.shrink(e1, e2, lambda a, b: not compare_exp(a, b, u)[0])
                fail("equiv", f"{why}: {E.show(s1)}  vs  {E.show(s2)}")
    rep.counts["exp-pairs"] = exp_cases
    return rep


def compare_exp(e1: E.Exp, e2: E.Exp, u: Universe, witnesses: bool = True) -> Tuple[bool, str]:
    v = A.check_equiv(e1, e2)
    o = naive_bisim(e1, e2, u)
    if v.equal != o:
        return False, f"symbolic says {'equal' if v.equal else 'different'}, oracle disagrees"
    if witnesses and not o:
        want = differing_inputs(e1, e2, u)
        got = {pk for pk in core.enumerate_packets(u) if SPm.member(v.witness_inputs, pk)}
        if got != want:
            return False, "counter-example inputs differ from the oracle's"
    return True, ""


def enumerate_sps(ranks: Sequence[int], values: Sequence[int], max_nodes: int = 4) -> List[SPm.SP]:
    """Every RO SP over the given fields and values with at most ``max_nodes`` internal nodes."""
    level: List[SPm.SP] = [SPm.BOT, SPm.TOP]
    for f in reversed(ranks):
        new = list(level)
        for d in level:
            others = [c for c in level if c is not d]
            for keys in _nonempty_subsets(values):
                for kids in itertools.product(others, repeat=len(keys)):
                    new.append(SPm.spsc(f, dict(zip(keys, kids)), d))
        level = new
    out = []
    seen = set()
    for p in level:
        if p.uid not in seen and SPm.size(p) <= max_nodes:
            seen.add(p.uid)
            out.append(p)
    return out


def _nonempty_subsets(values: Sequence[int]):
    for k in range(1, len(values) + 1):
        yield from itertools.combinations(values, k)
