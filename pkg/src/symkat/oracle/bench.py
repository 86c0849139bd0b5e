"""Benchmark runner emitting CSV rows: name, n, wall-ms, states, spp-nodes, exit."""
from __future__ import annotations

import csv
import sys
import time
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple

from ..nkpl import run_source
from .generators import KINDS, gen_combinatorial, gen_topology

DEFAULT_SIZES = {"inc": (10, 20, 30), "flip": (10, 20, 30), "nondet": (10, 20, 30),
                 "line": (25, 50, 100), "line-pairs": (10, 25, 50)}


def cases(sizes=None) -> List[Tuple[str, int, str]]:
    sizes = sizes or DEFAULT_SIZES
    out = []
    for name, ns in sizes.items():
        for n in ns:
            if name in KINDS:
                src = gen_combinatorial(name, n)
            elif name == "line-pairs":
                src = gen_topology("line", n, "pairs")
            else:
                src = gen_topology(name, n)
            out.append((name, n, src))
    return out


def run_bench(sizes=None, out: Optional[TextIO] = None) -> List[dict]:
    out = out or sys.stdout
    w = csv.writer(out)
    w.writerow(["name", "n", "wall_ms", "states", "spp_nodes", "exit"])
    rows = []
    for name, n, src in cases(sizes):
        t0 = time.perf_counter()
        rep = run_source(src)
        ms = (time.perf_counter() - t0) * 1000
        row = {"name": name, "n": n, "wall_ms": round(ms, 1), "states": rep.states_built,
               "spp_nodes": rep.spp_nodes, "exit": rep.exit_code}
        rows.append(row)
        w.writerow(list(row.values()))
        out.flush()
    return rows
