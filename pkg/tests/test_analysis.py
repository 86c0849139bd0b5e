from symkat import analysis as An
from symkat import exp as E
from symkat import sp
from symkat.core import Universe, enumerate_packets
from symkat.oracle import differing_inputs, naive_bisim


def test_forward_backward_examples(fresh):
    assert An.forward(E.BOT) is sp.BOT
    assert An.forward(E.mut("a", 3)) is sp.test("a", 3)
    assert An.backward(E.BOT) is sp.BOT
    assert An.backward(E.seq(E.test("a", 3), E.dup())) is sp.test("a", 3)
    e = E.seq(E.star(E.seq(E.mut("a", 1), E.dup())), E.mut("b", 2))
    assert An.forward(E.xor(e, e)) is sp.BOT


def test_check_equiv(fresh):
    p = E.star(E.seq(E.mut("a", 1), E.dup()))
    assert An.check_equiv(p, p).equal
    v = An.check_equiv(E.dup(), E.seq(E.dup(), E.dup()))
    assert not v.equal
    assert v.witness_inputs is sp.TOP
    assert v.witness_packet is not None


def test_witness_matches_oracle(fresh):
    fresh(["a", "b"])
    e1 = E.seq(E.test("a", 1), E.dup(), E.mut("b", 2))
    e2 = E.seq(E.dup(), E.mut("b", 2))
    v = An.check_equiv(e1, e2)
    u = Universe.of({"a": [0, 1, 2], "b": [0, 1, 2, 3]})
    got = {pk for pk in enumerate_packets(u) if sp.member(v.witness_inputs, pk)}
    assert got == differing_inputs(e1, e2, u)
    assert sp.member(v.witness_inputs, v.witness_packet)


def test_inclusion(fresh):
    p = E.seq(E.mut("a", 1), E.dup())
    assert An.check_inclusion(p, p).equal
    assert An.check_inclusion(E.BOT, p).equal
    v = An.check_inclusion(E.TOP, E.BOT)
    assert not v.equal and v.witness_inputs is sp.TOP
    assert An.check_inclusion(E.seq(E.test("a", 1), p), p).equal
    assert not An.check_inclusion(p, E.seq(E.test("a", 1), p)).equal


def test_emptiness(fresh):
    assert An.emptiness(E.BOT).equal
    assert not An.emptiness(E.dup()).equal
    assert An.emptiness(E.seq(E.test("a", 3), E.test_ne("a", 3))).equal


def test_slice_isolation_equal(fresh):
    fresh(["sw", "pt"])
    n1 = E.seq(E.test("sw", 1), E.test("pt", 2), E.mut("sw", 2), E.dup())
    n2 = E.seq(E.test("sw", 5), E.test("pt", 6), E.mut("sw", 6), E.dup())
    lhs = E.union(E.star(n1), E.star(n2))
    rhs = E.star(E.union(n1, n2))
    assert An.check_equiv(lhs, rhs).equal
    u = Universe.of({"sw": [1, 2, 5, 6, 7], "pt": [2, 6, 7]})
    assert naive_bisim(lhs, rhs, u)
