"""Random expressions, symbolic packets and packet programs for differential testing."""
from __future__ import annotations

import random
from typing import Callable, List, Optional, Sequence

from .. import exp as E
from .. import sp as SPm
from .. import spp as SPPm
from ..exp import Exp

_BINARY = (E.union, lambda a, b: E.seq(a, b), E.intersect, E.xor, E.diff)


def random_prim(rng: random.Random, fields: Sequence, values: Sequence[int]) -> Exp:
    r = rng.random()
    f = rng.choice(fields)
    v = rng.choice(values)
    if r < 0.3:
        return E.test(f, v)
    if r < 0.5:
        return E.test_ne(f, v)
    if r < 0.8:
        return E.mut(f, v)
    if r < 0.9:
        return E.TOP
    return E.BOT


def random_exp(rng: random.Random, fields: Sequence, values: Sequence[int], size: int = 12) -> Exp:
    """Random expression with at most ``size`` AST nodes.

    Roughly 40% primitives, 45% binary operators, 10% star, 5% dup.
    """
    if size <= 1:
        return E.dup() if rng.random() < 0.15 else random_prim(rng, fields, values)
    r = rng.random()
    if r < 0.40:
        return random_prim(rng, fields, values)
    if r < 0.85 and size >= 3:
        left = rng.randint(1, size - 2)
        right = rng.randint(1, size - 1 - left)
        op = rng.choice(_BINARY)
        return op(random_exp(rng, fields, values, left), random_exp(rng, fields, values, right))
    if r < 0.95:
        return E.star(random_exp(rng, fields, values, size - 1))
    return E.dup()


def _rewrite_once(rng: random.Random, e: Exp) -> Exp:
    """Apply one trace-preserving law at a random position."""
    subs = [x for x in E.subterms(e)]
    target = rng.choice(subs)
    k = target.kind
    choices: List[Callable[[], Exp]] = []
    if k == E.STAR:
        p = target.args[0]
        choices.append(lambda: E.union(E.TOP, E.seq(p, target)))
        choices.append(lambda: E.union(E.TOP, E.seq(target, p)))
        choices.append(lambda: E.star(E.union(E.TOP, p)))
    if k == E.SEQ and len(target.args) >= 2:
        head, rest = target.args[0], E.seq(*target.args[1:])
        if head.kind == E.UNION:
            choices.append(lambda: E.union(*(E.seq(a, rest) for a in head.args)))
        if rest.kind == E.UNION:
            choices.append(lambda: E.union(*(E.seq(head, a) for a in rest.args)))
    if k == E.UNION and len(target.args) >= 2:
        a, b = target.args[0], E.union(*target.args[1:])
        choices.append(lambda: E.diff(E.union(a, b), E.diff(E.intersect(a, b), b)))
        choices.append(lambda: E.union(E.xor(a, b), E.intersect(a, b)))
    if k == E.INTER:
        a, b = target.args
        choices.append(lambda: E.diff(a, E.diff(a, b)))
    if k == E.MUT:
        f, v = target.args
        choices.append(lambda: E.seq(target, E.test(f, v)))
    if k == E.TEST:
        f, v = target.args
        choices.append(lambda: E.seq(target, target))
        choices.append(lambda: E.seq(target, E.mut(f, v)))
    choices.append(lambda: E.union(target, target))
    choices.append(lambda: E.seq(E.TOP, target))
    new = rng.choice(choices)()
    return replace(e, target, new)


def replace(e: Exp, old: Exp, new: Exp) -> Exp:
    """Substitute ``new`` for every occurrence of ``old`` (rebuilding via smart constructors)."""
    if e is old:
        return new
    if e.kind not in (E.UNION, E.SEQ, E.STAR, E.INTER, E.XOR, E.DIFF):
        return e
    args = [replace(a, old, new) for a in e.args]
    return rebuild(e.kind, args)


def rebuild(kind: int, args: List[Exp]) -> Exp:
    if kind == E.UNION:
        return E.union(*args)
    if kind == E.SEQ:
        return E.seq(*args)
    if kind == E.STAR:
        return E.star(args[0])
    if kind == E.INTER:
        return E.intersect(*args)
    if kind == E.XOR:
        return E.xor(*args)
    return E.diff(*args)


def random_pair(rng: random.Random, fields: Sequence, values: Sequence[int], size: int = 12):
    """A pair that is equivalent by construction about half of the time."""
    e1 = random_exp(rng, fields, values, size)
    r = rng.random()
    if r < 0.35:
        return e1, random_exp(rng, fields, values, size)
    e2 = e1
    for _ in range(rng.randint(1, 3)):
        e2 = _rewrite_once(rng, e2)
    if r < 0.7:
        return e1, e2
    # near miss: perturb one leaf
    leaves = [x for x in E.subterms(e2) if x.kind not in (E.UNION, E.SEQ, E.STAR, E.INTER, E.XOR, E.DIFF)]
    return e1, replace(e2, rng.choice(leaves), random_prim(rng, fields, values))


def shrink(e1: Exp, e2: Exp, fails: Callable[[Exp, Exp], bool], rounds: int = 50):
    """Greedily replace subterms by Bot, Top or a child while ``fails`` still holds."""
    for _ in range(rounds):
        improved = False
        for side in (0, 1):
            cur = (e1, e2)[side]
            for sub in sorted(E.subterms(cur), key=lambda x: -x.size):
                cands = [E.BOT, E.TOP]
                if sub.kind in (E.UNION, E.SEQ, E.STAR, E.INTER, E.XOR, E.DIFF):
                    cands.extend(sub.args)
                for c in cands:
                    if c is sub:
                        continue
                    new = replace(cur, sub, c)
                    if new.size >= cur.size:
                        continue
                    pair = (new, e2) if side == 0 else (e1, new)
                    try:
                        bad = fails(*pair)
                    except Exception:
                        bad = False
                    if bad:
                        e1, e2 = pair
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
        if not improved:
            break
    return e1, e2


# -- raw diagrams, built directly through the smart constructors -------------------

def random_sp(rng: random.Random, ranks: Sequence[int], values: Sequence[int], level: int = 0) -> SPm.SP:
    if level >= len(ranks) or rng.random() < 0.2:
        return SPm.TOP if rng.random() < 0.5 else SPm.BOT
    f = ranks[level]
    keys = [v for v in values if rng.random() < 0.5]
    b = {v: random_sp(rng, ranks, values, level + 1) for v in keys}
    return SPm.spsc(f, b, random_sp(rng, ranks, values, level + 1))


def random_spp(rng: random.Random, ranks: Sequence[int], values: Sequence[int], level: int = 0) -> SPPm.SPP:
    if level >= len(ranks) or rng.random() < 0.15:
        return SPPm.TOP if rng.random() < 0.6 else SPPm.BOT

    def child():
        return random_spp(rng, ranks, values, level + 1)

    f = ranks[level]
    b = {}
    for v in values:
        if rng.random() < 0.4:
            b[v] = {w: child() for w in values if rng.random() < 0.4}
    m = {w: child() for w in values if rng.random() < 0.35}
    return SPPm.sppsc(f, b, m, child())
