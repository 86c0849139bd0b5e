import pytest

from symkat import core, sp, spp
from symkat import exp as E
from symkat.core import Packet, Universe, enumerate_packets
from symkat.oracle.fuzz import Brute


def node(s):
    return (s.field, s.bmap, s.mmap, s.default)


def rel(s, u):
    return {pk: frozenset(spp.eval_packet(s, pk)) for pk in enumerate_packets(u)}


def test_primitive_shapes(fresh):
    f = core.register_field("f").rank
    assert node(spp.mut("f", 2)) == (f, {}, {2: spp.TOP}, spp.BOT)
    assert spp.from_sp(sp.TOP) is spp.TOP
    assert spp.from_sp(sp.BOT) is spp.BOT
    assert spp.from_sp(sp.test("f", 3)) is spp.test("f", 3)
    assert spp.from_sp(sp.test_ne("f", 3)) is spp.test_ne("f", 3)


def test_eval_basics(fresh):
    fresh(["a"])
    pk = Packet(a=1)
    assert spp.eval_packet(spp.TOP, pk) == {pk}
    assert spp.eval_packet(spp.BOT, pk) == set()
    s = spp.seq(spp.test("a", 3), spp.mut("a", 4))
    assert spp.eval_packet(s, Packet(a=3)) == {Packet(a=4)}
    assert spp.eval_packet(s, Packet(a=5)) == set()


def test_nested_branch_evaluation(fresh):
    fresh(["a", "b", "c"])
    p = E.seq(E.union(E.test("a", 5), E.test("b", 2)), E.union(E.mut("b", 1), E.test("c", 5)))
    s = E.compile_dup_free(p)
    out = spp.eval_packet(s, Packet(a=5, b=3, c=5))
    assert out == {Packet(a=5, b=1, c=5), Packet(a=5, b=3, c=5)}


def test_binary_examples(fresh):
    fresh(["a"])
    s = spp.mut("a", 1)
    assert spp.union(s, spp.BOT) is s
    assert spp.intersect(spp.mut("a", 1), spp.mut("a", 2)) is spp.BOT
    assert spp.xor(s, s) is spp.BOT
    assert spp.seq(s, spp.TOP) is s and spp.seq(spp.TOP, s) is s


def test_star(fresh):
    fresh(["x"])
    assert spp.star(spp.BOT) is spp.TOP
    assert spp.star(spp.TOP) is spp.TOP
    flip = E.union(E.seq(E.test("x", 0), E.mut("x", 1)), E.seq(E.test("x", 1), E.mut("x", 0)))
    s = E.compile_dup_free(E.star(flip))
    assert spp.eval_packet(s, Packet(x=0)) == {Packet(x=0), Packet(x=1)}


def test_star_cap(fresh):
    fresh(["x1", "x2", "x3"])
    # a 3-bit counter needs more than one doubling round
    inc = E.BOT
    for x in ("x3", "x2", "x1"):
        inc = E.union(E.seq(E.test(x, 0), E.mut(x, 1)), E.seq(E.test(x, 1), E.mut(x, 0), inc))
    s = E.compile_dup_free(inc)
    with pytest.raises(spp.StarDivergence):
        spp.star(s, cap=1)
    assert spp.is_ro(spp.star(s))


def test_fwd_bwd(fresh):
    m = spp.mut("a", 3)
    assert spp.fwd(m) is sp.test("a", 3)
    assert spp.bwd(m) is sp.TOP
    t = spp.test("a", 3)
    assert spp.fwd(t) is sp.test("a", 3)
    assert spp.bwd(t) is sp.test("a", 3)
    assert spp.fwd(spp.BOT) is sp.BOT and spp.bwd(spp.BOT) is sp.BOT


def test_push_pull(fresh):
    assert spp.push(sp.test("a", 3), spp.mut("a", 4)) is sp.test("a", 4)
    assert spp.pull(spp.mut("a", 4), sp.test("a", 4)) is sp.TOP
    assert spp.pull(spp.mut("a", 4), sp.test("a", 3)) is sp.BOT
    # confirm by enumeration
    fresh(["a", "b"])
    u = Universe.of({"a": [3, 4, 5], "b": [0, 1]})
    img = set()
    for pk in enumerate_packets(u):
        if pk["a"] == 3:
            img |= spp.eval_packet(spp.mut("a", 4), pk)
    assert img == {pk for pk in enumerate_packets(u) if sp.member(sp.test("a", 4), pk)}


def test_sppsc_trivial(fresh):
    d = spp.mut("b", 1)
    assert spp.sppsc("f", {}, {}, d) is d


def test_sppsc_condition3(fresh):
    fresh(["f", "b"])
    f = core.field_rank("f")
    d = spp.mut("b", 1)
    muts = {2: spp.TOP}
    s = spp.sppsc("f", {7: {**muts, 7: d}}, muts, d)
    assert 7 not in s.bmap
    raw = spp.sppsc("f", {}, muts, d)
    assert s is raw
    u = Universe.of({"f": [2, 7, 8], "b": [0, 1, 2]})
    assert rel(s, u)[Packet(f=7, b=0)] == {Packet(f=2, b=0), Packet(f=7, b=1)}


def test_sppsc_bot_entry_with_bot_default(fresh):
    # Bot mutation to 3 with Bot default: the extra test branch for 3 equals the
    # default behaviour at 3 and is therefore removed; the relation is unchanged
    fresh(["f"])
    f = core.field_rank("f")
    s = spp.sppsc("f", {}, {3: spp.BOT, 4: spp.TOP}, spp.BOT)
    assert node(s) == (f, {}, {4: spp.TOP}, spp.BOT)
    u = Universe.of({"f": [2, 3, 4, 5]})
    for pk in enumerate_packets(u):
        assert spp.eval_packet(s, pk) == {Packet(f=4)}


def test_sppsc_bot_entry_with_default(fresh):
    # with an identity default the Bot entry matters: f=3 must not pass through
    fresh(["f"])
    s = spp.sppsc("f", {}, {3: spp.BOT}, spp.TOP)
    assert spp.eval_packet(s, Packet(f=3)) == set()
    assert spp.eval_packet(s, Packet(f=5)) == {Packet(f=5)}
    assert s.bmap == {3: {}}


def test_get(fresh):
    fresh(["f"])
    s = spp.sppsc("f", {1: {2: spp.TOP}}, {5: spp.TOP}, spp.TOP)
    assert spp.get(s, 1) == {2: spp.TOP}
    assert spp.get(s, 5) == {5: spp.TOP}
    assert spp.get(s, 9) == {5: spp.TOP, 9: spp.TOP}


def test_brute_agrees_on_sequence(fresh):
    fresh(["a", "b"])
    u = Universe.of({"a": [0, 1, 2], "b": [0, 1, 2]})
    br = Brute(u)
    s = spp.union(spp.mut("a", 1), spp.seq(spp.test("b", 2), spp.mut("b", 0)))
    t = spp.union(spp.test("a", 1), spp.mut("b", 2))
    assert br.spp_rel(spp.seq(s, t)) == br.compose(br.spp_rel(s), br.spp_rel(t))
    assert br.spp_rel(spp.star(s)) == br.closure(br.spp_rel(s))


def test_show_and_dot(fresh):
    fresh(["a", "b"])
    s = spp.union(spp.mut("a", 1), spp.test("b", 2))
    assert spp.show(spp.TOP) and spp.show(spp.BOT)
    text = spp.show(s)
    assert "a" in text and "b" in text
    assert spp.to_dot(s).startswith("digraph")
    assert spp.size(s) >= 2
