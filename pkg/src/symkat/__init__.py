"""Symbolic NetKAT verification: decision diagrams, derivative automata, NKPL."""
from .core import (ConfigurationError, DomainError, Field, Packet, Universe, enumerate_packets,
                   field_rank, register_field, reset, update_packet)

__version__ = "0.1.0"
