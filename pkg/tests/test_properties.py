import random

from hypothesis import given, settings
from hypothesis import strategies as st

from symkat import analysis as An
from symkat import core, sp, spp
from symkat import exp as E
from symkat.oracle import randexp as R
from symkat.oracle.fuzz import Brute, small_universe
from symkat.oracle.semantics import naive_bisim

RANKS = [0, 1]
VALUES = [0, 1, 2]
seeds = st.integers(min_value=0, max_value=2 ** 32)


def session():
    core.reset(["a", "b"])
    return Brute(small_universe())


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_sp_boolean_algebra(seed):
    session()
    rng = random.Random(seed)
    p, q, r = (R.random_sp(rng, RANKS, VALUES) for _ in range(3))
    assert sp.union(p, sp.intersect(q, r)) is sp.intersect(sp.union(p, q), sp.union(p, r))
    assert sp.neg(sp.union(p, q)) is sp.intersect(sp.neg(p), sp.neg(q))
    assert sp.xor(p, q) is sp.union(sp.diff(p, q), sp.diff(q, p))
    assert sp.exists(0, sp.exists(1, p)) is sp.exists(1, sp.exists(0, p))
    assert sp.forall(0, p) is sp.neg(sp.exists(0, sp.neg(p)))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_spp_laws(seed):
    br = session()
    rng = random.Random(seed)
    s, t, w = (R.random_spp(rng, RANKS, VALUES) for _ in range(3))
    assert spp.seq(s, spp.union(t, w)) is spp.union(spp.seq(s, t), spp.seq(s, w))
    assert spp.seq(spp.seq(s, t), w) is spp.seq(s, spp.seq(t, w))
    st_ = spp.star(s)
    assert spp.seq(st_, st_) is st_
    assert spp.union(spp.TOP, spp.seq(s, st_)) is st_
    p = R.random_sp(rng, RANKS, VALUES)
    assert spp.push(p, s) is spp.fwd(spp.seq(spp.from_sp(p), s))
    assert br.sp_set(spp.fwd(s)) == br.image(br.full, br.spp_rel(s))


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_get_behaviour(seed):
    # s on a packet with f=v behaves like the assignments returned by get(s, v)
    br = session()
    rng = random.Random(seed)
    s = R.random_spp(rng, RANKS, VALUES)
    if s.is_terminal or s.field != 0:
        return
    for pk in br.packets:
        want = spp.eval_tuple(s, pk)
        got = set()
        for w, q in spp.get(s, pk[0]).items():
            got |= spp.eval_tuple(q, (w,) + pk[1:])
        assert got == want


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_equiv_matches_oracle(seed):
    br = session()
    rng = random.Random(seed)
    e1, e2 = R.random_pair(rng, ["a", "b"], VALUES, 10)
    assert An.check_equiv(e1, e2).equal == naive_bisim(e1, e2, br.u)
    assert An.check_equiv(e1, e1).equal


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_inclusion_is_union_equivalence(seed):
    br = session()
    rng = random.Random(seed)
    e1, e2 = R.random_pair(rng, ["a", "b"], VALUES, 8)
    assert An.check_inclusion(e1, e2).equal == An.check_equiv(E.union(e1, e2), e2).equal


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_compile_matches_observe(seed):
    br = session()
    rng = random.Random(seed)
    e = R.random_exp(rng, ["a", "b"], VALUES, 10)
    if E.is_dup_free(e):
        assert E.compile_dup_free(e) is E.observe(e)
