"""Fields, values, concrete packets and the session-wide registries.

Every decision diagram stores fields by *rank* (an ``int``); the registry is
the only place that knows the names.  The order of ranks is the variable
order of all diagrams, so it must be fixed before the first diagram is built.
"""
from __future__ import annotations

import itertools
import sys
import threading
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

# Diagrams recurse once per field level; deep field orders need headroom.
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

# Rank of the Top/Bot sinks: greater than any real field.
TERMINAL_RANK = sys.maxsize

# Symbolic value names are mapped above this bound so that they never collide
# with numeric literals.
NAMED_VALUE_BASE = 2 ** 32


class ConfigurationError(Exception):
    """Raised when the field order is used inconsistently."""


class DomainError(ValueError):
    """Raised for packets/universes that do not fit the declared fields."""


@dataclass(frozen=True)
class Field:
    name: str
    rank: int

    def __lt__(self, other: "Field") -> bool:
        return self.rank < other.rank

    def __str__(self) -> str:
        return self.name


class FieldRegistry:
    """Interns field names and hands out ranks.

    By default ranks follow first registration.  ``set_order`` installs an
    explicit order and locks the registry against names outside it.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._by_name: Dict[str, Field] = {}
        self._by_rank: List[Field] = []
        self._explicit: Optional[List[str]] = None

    def set_order(self, names: Sequence[str]) -> None:
        with self._lock:
            if self._by_rank:
                raise ConfigurationError("field order must be set before any field is registered")
            if len(set(names)) != len(names):
                raise ConfigurationError("duplicate field in explicit order")
            self._explicit = list(names)
            for name in names:
                self._add(name)

    def register(self, name: str) -> Field:
        f = self._by_name.get(name)
        if f is not None:
            return f
        with self._lock:
            f = self._by_name.get(name)
            if f is not None:
                return f
            if self._explicit is not None:
                raise ConfigurationError(
                    f"field {name!r} is not part of the explicit order {self._explicit}")
            return self._add(name)

    def _add(self, name: str) -> Field:
        if not name or not (name[0].isalpha() or name[0] == "_"):
            raise ConfigurationError(f"invalid field name {name!r}")
        f = Field(name, len(self._by_rank))
        self._by_name[name] = f
        self._by_rank.append(f)
        return f

    def get(self, name: str) -> Optional[Field]:
        return self._by_name.get(name)

    def by_rank(self, rank: int) -> Field:
        return self._by_rank[rank]

    def name(self, rank: int) -> str:
        return self._by_rank[rank].name

    @property
    def fields(self) -> Tuple[Field, ...]:
        return tuple(self._by_rank)

    @property
    def locked(self) -> bool:
        return self._explicit is not None

    def __len__(self) -> int:
        return len(self._by_rank)

    def clear(self) -> None:
        with self._lock:
            self._by_name.clear()
            self._by_rank.clear()
            self._explicit = None


class ValueNames:
    """Per-session table from symbolic value names to integers."""

    def __init__(self) -> None:
        self._by_name: Dict[str, int] = {}
        self._by_value: Dict[int, str] = {}

    def intern(self, name: str) -> int:
        v = self._by_name.get(name)
        if v is None:
            v = NAMED_VALUE_BASE + len(self._by_name)
            self._by_name[name] = v
            self._by_value[v] = name
        return v

    def show(self, value: int) -> str:
        return self._by_value.get(value, str(value))

    def clear(self) -> None:
        self._by_name.clear()
        self._by_value.clear()


FIELDS = FieldRegistry()
VALUES = ValueNames()

_reset_hooks: List[Callable[[], None]] = []


def on_reset(hook: Callable[[], None]) -> Callable[[], None]:
    """Register a callback that clears a module-level table on ``reset``."""
    _reset_hooks.append(hook)
    return hook


def reset(field_order: Optional[Sequence[str]] = None) -> None:
    """Forget every field, value name, interned node and memo table."""
    for hook in _reset_hooks:
        hook()
    FIELDS.clear()
    VALUES.clear()
    if field_order:
        FIELDS.set_order(field_order)


def register_field(name: str) -> Field:
    return FIELDS.register(name)


def field_rank(f) -> int:
    """Accept a Field, a name or a rank and return the rank."""
    if isinstance(f, Field):
        return f.rank
    if isinstance(f, str):
        return FIELDS.register(f).rank
    return int(f)


class Packet(Mapping):
    """An immutable total assignment of values to a set of fields.

    Keys may be given as :class:`Field`, field names or ranks; iteration
    yields field names in rank order.
    """

    __slots__ = ("_vals", "_hash")

    def __init__(self, bindings: Mapping = (), **kw: int) -> None:
        vals: Dict[int, int] = {}
        items = list(bindings.items()) if isinstance(bindings, Mapping) else list(bindings)
        items.extend(kw.items())
        for k, v in items:
            if not isinstance(v, int) or v < 0:
                raise DomainError(f"packet values are naturals, got {v!r}")
            vals[field_rank(k)] = v
        self._vals = dict(sorted(vals.items()))
        self._hash = None

    @classmethod
    def _from_ranks(cls, vals: Dict[int, int]) -> "Packet":
        p = cls.__new__(cls)
        p._vals = dict(sorted(vals.items()))
        p._hash = None
        return p

    def __getitem__(self, key) -> int:
        if isinstance(key, int) and not isinstance(key, bool):
            return self._vals[key]
        f = FIELDS.get(key) if isinstance(key, str) else key
        if f is None:
            raise KeyError(key)
        return self._vals[f.rank]

    def __iter__(self) -> Iterator[str]:
        return (FIELDS.name(r) for r in self._vals)

    def __len__(self) -> int:
        return len(self._vals)

    def ranks(self) -> Dict[int, int]:
        return dict(self._vals)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._vals.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Packet):
            return self._vals == other._vals
        return NotImplemented

    def update(self, f, v: int) -> "Packet":
        """Return the packet with ``f`` rebound to ``v``."""
        r = field_rank(f)
        if r not in self._vals:
            raise DomainError(f"field {f!r} is not part of this packet")
        if v < 0:
            raise DomainError("packet values are naturals")
        vals = dict(self._vals)
        vals[r] = v
        return Packet._from_ranks(vals)

    def __repr__(self) -> str:
        inner = ", ".join(f"{FIELDS.name(r)}={VALUES.show(v)}" for r, v in self._vals.items())
        return "{" + inner + "}"


def update_packet(pk: Packet, f, v: int) -> Packet:
    return pk.update(f, v)


@dataclass
class Universe:
    """A finite slice of the packet space, used only by the reference oracle."""

    values: Dict[Field, Tuple[int, ...]] = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        norm: Dict[Field, Tuple[int, ...]] = {}
        for f, vs in self.values.items():
            f = f if isinstance(f, Field) else FIELDS.register(f)
            norm[f] = tuple(sorted(set(vs)))
        self.values = dict(sorted(norm.items(), key=lambda kv: kv[0].rank))

    @classmethod
    def of(cls, spec: Mapping[str, Iterable[int]]) -> "Universe":
        return cls({FIELDS.register(k): tuple(v) for k, v in spec.items()})

    @property
    def fields(self) -> Tuple[Field, ...]:
        return tuple(self.values)

    def size(self) -> int:
        n = 1
        for vs in self.values.values():
            n *= len(vs)
        return n

    def tuples(self) -> Iterator[Tuple[int, ...]]:
        for f, vs in self.values.items():
            if not vs:
                raise DomainError(f"field {f.name} has an empty value set")
        return itertools.product(*self.values.values())

    def packet(self, vals: Sequence[int]) -> Packet:
        return Packet._from_ranks({f.rank: v for f, v in zip(self.values, vals)})


def enumerate_packets(u: Universe) -> Iterator[Packet]:
    """Yield every packet of ``u`` once, first field varying slowest."""
    for vals in u.tuples():
        yield u.packet(vals)
