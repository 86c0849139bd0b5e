import pytest

from symkat import analysis as An
from symkat import core
from symkat import exp as E
from symkat import spp
from symkat.core import Packet, Universe
from symkat.nkpl import interp as I
from symkat.nkpl import syntax as N
from symkat.oracle import (OracleLimit, differing_inputs, distinguishing_depth, eval_traces,
                           gen_combinatorial, gen_slices, gen_topology, input_prefixed, naive_bisim)
from symkat.oracle import fuzz
from symkat.oracle.generators import next_hops, topology


def flip():
    return E.union(E.seq(E.test("x", 0), E.mut("x", 1)), E.seq(E.test("x", 1), E.mut("x", 0)))


def env_of(src):
    it = I.Interpreter()
    it.run(N.parse(src))
    return it.env


def test_flip_traces(fresh):
    fresh(["x"])
    u = Universe.of({"x": [0, 1]})
    x0, x1 = Packet(x=0), Packet(x=1)
    e = E.star(E.seq(flip(), E.dup()))
    tr = eval_traces(e, x0, u, 3)
    assert tr == {(x0,), (x1, x1), (x1, x0, x0)}
    assert input_prefixed(tr, x0) == {(x0,), (x0, x1), (x0, x1, x0)}


def test_traces_depth_bound(fresh):
    fresh(["x"])
    u = Universe.of({"x": [0, 1]})
    e = E.star(E.seq(flip(), E.dup()))
    for d in range(1, 6):
        tr = eval_traces(e, Packet(x=0), u, d)
        assert len(tr) == d and all(len(t) <= d for t in tr)


def test_naive_bisim(fresh):
    u = Universe.of({"a": [0, 1]})
    p = E.star(E.seq(E.mut("a", 1), E.dup()))
    assert naive_bisim(p, p, u)
    assert not naive_bisim(E.dup(), E.seq(E.dup(), E.dup()), u)
    pk = Packet(a=0)
    k = distinguishing_depth(E.dup(), E.seq(E.dup(), E.dup()), pk, u)
    assert eval_traces(E.dup(), pk, u, k + 1) != eval_traces(E.seq(E.dup(), E.dup()), pk, u, k + 1)
    assert differing_inputs(E.dup(), E.seq(E.dup(), E.dup()), u) == {Packet(a=0), Packet(a=1)}


def test_oracle_limit(fresh):
    u = Universe.of({f: range(10) for f in "abcd"})
    with pytest.raises(OracleLimit):
        naive_bisim(E.dup(), E.dup(), u)


def test_flip_one_bit(fresh):
    rep = I.run_source(gen_combinatorial("flip", 1))
    assert rep.exit_code == 0


def test_nondet_one(fresh):
    assert I.run_source(gen_combinatorial("nondet", 1)).exit_code == 0


def test_inc_two_bits_reaches_ones(fresh):
    rep = I.run_source(gen_combinatorial("inc", 2) +
                       "check forward ((x1<-0 ; x2<-0) ; inc*) & (x1=1 ; x2=1) == (x1=1 ; x2=1)\n")
    assert rep.exit_code == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_inc_encoding_against_oracle(fresh, n):
    env = env_of(gen_combinatorial("inc", n))
    xs = [f"x{i}" for i in range(1, n + 1)]
    u = Universe.of({x: [0, 1, 2] for x in xs})
    inc = env["inc"]
    # inc adds one to the binary number x_n..x_1 and drops overflow
    for bits in range(2 ** n):
        pk = Packet({x: (bits >> i) & 1 for i, x in enumerate(xs)})
        out = {p for p in spp.eval_packet(E.compile_dup_free(inc), pk)}
        want = set() if bits == 2 ** n - 1 else {Packet({x: ((bits + 1) >> i) & 1 for i, x in enumerate(xs)})}
        assert out == want
    zero = E.seq(*(E.mut(x, 0) for x in xs))
    ones = E.seq(*(E.test(x, 1) for x in xs))
    assert not naive_bisim(E.seq(zero, E.star(inc), ones), E.BOT, u)


@pytest.mark.parametrize("kind", ["flip", "nondet"])
def test_combinatorial_truth_by_oracle(fresh, kind):
    env = env_of(gen_combinatorial(kind, 2))
    u = Universe.of({"x1": [0, 1, 2, 3], "x2": [0, 1, 2, 3]})
    if kind == "flip":
        dom, f = env["dom"], env["flip"]
        assert naive_bisim(E.seq(dom, f, f), dom, u)
    else:
        nd = env["nd"]
        assert naive_bisim(E.seq(nd, nd), nd, u)


def test_next_hops():
    sws, links = topology("star", 3)
    hops = next_hops(sws, links)
    assert hops[(1, 2)] == 0 and hops[(0, 3)] == 3


def test_line_two(fresh):
    src = gen_topology("line", 2, "none") + "check sw=1 ; dst=2 ; net* ; sw=2 != bot\n"
    assert I.run_source(src).exit_code == 0


def test_star_three(fresh):
    src = gen_topology("star", 3, "none") + "check sw=1 ; dst=3 ; net* ; sw=3 != bot\n"
    assert I.run_source(src).exit_code == 0


def test_disconnected_pair(fresh):
    src = gen_slices(2, shared=False) + "check sw=1 ; (net1 + net2)* ; sw=3 != bot\n"
    rep = I.run_source(src)
    assert rep.exit_code == 1
    # the query denotes the empty set, so there is no counter-example input
    assert rep.checks[-1].witness_inputs is None


@pytest.mark.parametrize("shape,n", [("line", 3), ("star", 2), ("grid", 2)])
def test_generated_queries_by_oracle(fresh, shape, n):
    src = gen_topology(shape, n, "linear")
    assert I.run_source(src).exit_code == 0
    core.reset()
    env = env_of(src)
    sws, _ = topology(shape, n)
    fresh_sw = max(sws) + 1
    u = Universe.of({"sw": sws + [fresh_sw], "dst": sws, "pt": sws + [fresh_sw]})
    net = env["net"]
    for i in sws:
        for j in sws:
            q = E.seq(E.test("sw", i), E.test("dst", j), E.star(net), E.test("sw", j))
            assert not naive_bisim(q, E.BOT, u)


def test_fuzz_suite_small():
    rep = fuzz.fuzz_suite(seed=0, cases=150, exp_cases=150)
    assert rep.ok, rep.summary()
    assert rep.counts["sp-enumerated"] == 512


def test_fuzz_empty_counts():
    rep = fuzz.fuzz_suite(seed=1, cases=0, exp_cases=0)
    assert rep.ok


def test_fuzz_catches_broken_seq(monkeypatch):
    real = spp.seq

    def broken(p, q):
        # forget the right operand's effect whenever the left one mutates
        if p.muts and not p.is_terminal:
            return p
        return real(p, q)
    monkeypatch.setattr(spp, "seq", broken)
    rep = fuzz.fuzz_suite(seed=0, cases=200, exp_cases=0)
    assert not rep.ok
    assert any(f.stage == "spp-seq" for f in rep.failures)


def test_fuzz_catches_broken_star(monkeypatch):
    # a single unrolling instead of the fixpoint
    monkeypatch.setattr(spp, "star", lambda p, cap=None: spp.union(spp.TOP, p))
    rep = fuzz.fuzz_suite(seed=0, cases=200, exp_cases=0)
    assert any(f.stage == "spp-star" for f in rep.failures)
