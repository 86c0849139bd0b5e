"""NKPL source generators: combinatorial benchmarks and routed topologies."""
from __future__ import annotations

from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

KINDS = ("inc", "flip", "nondet")
SHAPES = ("line", "grid", "star")


def _prod(parts: Sequence[str]) -> str:
    return " ; ".join(f"({p})" for p in parts)


def gen_combinatorial(kind: str, n: int) -> str:
    """Program plus check for the Inc / Flip / Nondet families over ``n`` fields."""
    if n < 1:
        raise ValueError("n must be at least 1")
    xs = [f"x{i}" for i in range(1, n + 1)]
    if kind == "flip":
        dom = _prod([f"{x}=0 + {x}=1" for x in xs])
        flip = _prod([f"{x}=0 ; {x}<-1 + {x}=1 ; {x}<-0" for x in xs])
        return (f"# flip {n}: flipping every bit twice is the identity on bit vectors\n"
                f"let dom = {dom}\nlet flip = {flip}\n"
                f"check dom ; flip ; flip == dom\n")
    if kind == "nondet":
        nd = _prod([" + ".join(f"{x}<-{v}" for v in range(n + 1)) for x in xs])
        return (f"# nondet {n}: assigning every field nondeterministically twice is the same as once\n"
                f"let nd = {nd}\ncheck nd ; nd == nd\n")
    if kind == "inc":
        # x1 is the least significant bit; carry ripples upwards, overflow is dropped
        inc = "bot"
        for x in reversed(xs):
            inc = f"{x}=0 ; {x}<-1 + {x}=1 ; {x}<-0 ; ({inc})"
        zero = " ; ".join(f"{x}<-0" for x in xs)
        ones = " ; ".join(f"{x}=1" for x in xs)
        return (f"# inc {n}: repeated increment turns 0...0 into 1...1\n"
                f"let inc = {inc}\ncheck ({zero}) ; inc* ; ({ones}) =/= bot\n")
    raise ValueError(f"unknown combinatorial kind {kind!r}")


def topology(shape: str, n: int) -> Tuple[List[int], List[Tuple[int, int]]]:
    """Switch ids and undirected links for a shape of size ``n``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if shape == "line":
        sws = list(range(1, n + 1))
        return sws, [(i, i + 1) for i in range(1, n)]
    if shape == "star":
        sws = list(range(0, n + 1))
        return sws, [(0, i) for i in range(1, n + 1)]
    if shape == "grid":
        sws = [r * n + c + 1 for r in range(n) for c in range(n)]
        links = []
        for r in range(n):
            for c in range(n):
                s = r * n + c + 1
                if c + 1 < n:
                    links.append((s, s + 1))
                if r + 1 < n:
                    links.append((s, s + n))
        return sws, links
    raise ValueError(f"unknown topology shape {shape!r}")


def next_hops(switches: Sequence[int], links: Sequence[Tuple[int, int]]) -> Dict[Tuple[int, int], int]:
    """Shortest-path next hop for every ordered pair of connected switches (BFS per destination)."""
    adj: Dict[int, List[int]] = {s: [] for s in switches}
    for a, b in links:
        adj[a].append(b)
        adj[b].append(a)
    for s in adj:
        adj[s].sort()
    hops: Dict[Tuple[int, int], int] = {}
    for d in switches:
        seen = {d}
        q = deque([d])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    hops[(y, d)] = x
                    q.append(y)
    return hops


def routing(switches, links, route_graph=None) -> Tuple[str, str]:
    """NetKAT text for the routing table R and topology T (port number = neighbour id).

    ``route_graph`` optionally gives a larger (switches, links) pair to compute
    routes over; rules are still only emitted for ``switches``.
    """
    hops = next_hops(*(route_graph or (switches, links)))
    own = set(switches)
    by_sw: Dict[int, List[str]] = {}
    for (s, d), h in sorted(hops.items()):
        if s in own:
            by_sw.setdefault(s, []).append(f"dst={d} ; pt<-{h}")
    r_terms = [f"sw={s} ; ({' + '.join(rules)})" for s, rules in sorted(by_sw.items())]
    t_terms = []
    for a, b in links:
        t_terms.append(f"sw={a} ; pt={b} ; sw<-{b}")
        t_terms.append(f"sw={b} ; pt={a} ; sw<-{a}")
    return (" + ".join(r_terms) or "bot"), (" + ".join(t_terms) or "bot")


def gen_topology(shape: str, n: int, queries: str = "linear") -> str:
    """Routed topology with reachability checks.

    ``queries`` is ``linear`` (one forward query per switch), ``pairs`` (one
    check per ordered pair) or ``none``.
    """
    sws, links = topology(shape, n)
    r, t = routing(sws, links)
    lo, hi = min(sws), max(sws)
    lines = [f"# {shape} topology, {len(sws)} switches, shortest-path routing",
             f"let R = {r}", f"let T = {t}", "let net = R ; T ; dup"]
    if queries == "linear":
        lines.append(f"for i in {lo}..{hi} do check "
                     f"(exists pt (exists dst (forward (sw=$i ; net*)))) == (sw in {lo}..{hi})")
    elif queries == "pairs":
        lines.append(f"for i in {lo}..{hi} do for j in {lo}..{hi} do "
                     f"check sw=$i ; dst=$j ; net* ; sw=$j =/= bot")
    return "\n".join(lines) + "\n"


def gen_slices(n: int, shared: bool) -> str:
    """Two line slices; with ``shared`` they meet at one switch with crossing rules.

    Disjoint slices satisfy ``net1* + net2* == (net1 + net2)*``; crossing slices
    let a packet continue in the other slice and break it.
    """
    a = list(range(1, n + 1))
    b = list(range(n + 1, 2 * n + 1))
    la = [(i, i + 1) for i in a[:-1]]
    lb = [(i, i + 1) for i in b[:-1]]
    graph1 = None
    if shared:
        # the last switch of slice 1 joins slice 2, and slice 1 routes slice-2
        # destinations towards it
        b = [a[-1]] + b
        lb = [(a[-1], b[1])] + lb
        graph1 = (a + b[1:], la + lb)
    r1, t1 = routing(a, la, graph1)
    r2, t2 = routing(b, lb)
    return (f"# slice isolation, {'crossing' if shared else 'disjoint'} slices of {n} switches\n"
            f"let net1 = ({r1}) ; ({t1}) ; dup\n"
            f"let net2 = ({r2}) ; ({t2}) ; dup\n"
            f"check net1* + net2* == (net1 + net2)*\n")
