import pytest

from symkat import core
from symkat.core import ConfigurationError, DomainError, Packet, Universe, enumerate_packets


def test_ranks_follow_first_registration(fresh):
    a = core.register_field("a")
    b = core.register_field("b")
    assert (a.rank, b.rank) == (0, 1)
    assert core.register_field("a") is a


def test_explicit_order(fresh):
    fresh(["sw", "pt", "dst"])
    assert core.register_field("pt").rank == 1


def test_locked_order_rejects_unknown(fresh):
    fresh(["sw"])
    with pytest.raises(ConfigurationError):
        core.register_field("zz")


def test_packet_update(fresh):
    fresh(["x", "a", "b"])
    assert Packet(x=0).update("x", 1) == Packet(x=1)
    p = Packet(a=3, b=4)
    assert p.update("a", 3) == p
    assert p.update("b", 9) == Packet(a=3, b=9)
    with pytest.raises(DomainError):
        Packet(a=1).update("b", 2)


def test_packet_rejects_negative(fresh):
    with pytest.raises(DomainError):
        Packet(a=-1)


def test_enumerate(fresh):
    u = Universe.of({"x": [0, 1]})
    assert list(enumerate_packets(u)) == [Packet(x=0), Packet(x=1)]
    u = Universe.of({"a": [0, 1], "b": [0]})
    assert set(enumerate_packets(u)) == {Packet(a=0, b=0), Packet(a=1, b=0)}
    assert len(list(enumerate_packets(Universe.of({"a": [0, 1, 2], "b": [0, 1, 2]})))) == 9


def test_empty_value_set(fresh):
    with pytest.raises(DomainError):
        list(enumerate_packets(Universe.of({"a": []})))


def test_named_values_are_large(fresh):
    v = core.VALUES.intern("h1")
    assert v >= core.NAMED_VALUE_BASE
    assert core.VALUES.intern("h1") == v
    assert core.VALUES.show(v) == "h1"


def test_reset_clears_nodes(fresh):
    from symkat import sp
    sp.test("a", 1)
    assert sp.node_count() > 0
    core.reset()
    assert sp.node_count() == 0
