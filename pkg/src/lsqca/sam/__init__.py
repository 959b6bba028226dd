"""Scan-access memory banks: occupancy state, movement costs and choreography."""

from .engine import (
    IN_MEMORY_KINDS,
    LOCALITY_AWARE,
    REVERSE,
    STORE_POLICIES,
    in_memory_access,
    in_memory_cost,
    load,
    load_cost,
    store,
    store_cost,
)
from .state import LineBank, LoadRecord, MoveCost, PointBank, SamError, SamState

__all__ = [
    "IN_MEMORY_KINDS",
    "LOCALITY_AWARE",
    "REVERSE",
    "STORE_POLICIES",
    "LineBank",
    "LoadRecord",
    "MoveCost",
    "PointBank",
    "SamError",
    "SamState",
    "in_memory_access",
    "in_memory_cost",
    "load",
    "load_cost",
    "store",
    "store_cost",
]
