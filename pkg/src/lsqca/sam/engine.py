"""Load, store and in-memory access on a :class:`SamState`.

Every operation is quoted from the current occupancy and applied in place.
Variables in the conventional region move for free and take the register
latency of each operation.
"""

from __future__ import annotations

from typing import Optional

from ..floorplan import CONV
from . import line as _line
from . import point as _point
from .point import OP_BEATS
from .state import ZERO, LineBank, LoadRecord, MoveCost, PointBank, SamError, SamState

LOCALITY_AWARE, REVERSE = "locality_aware", "reverse"
STORE_POLICIES = (LOCALITY_AWARE, REVERSE)
IN_MEMORY_KINDS = tuple(OP_BEATS)


def _resident(state: SamState, q: int):
    b = state.bank_of(q)
    if q in state.out:
        raise SamError(f"M{q} is loaded in the CR, not in memory")
    if b == CONV:
        return b, None, None
    return b, state.banks[b], state.pos[q]


def load_cost(state: SamState, q: int) -> int:
    b, bank, cell = _resident(state, q)
    if bank is None:
        return 0
    if isinstance(bank, LineBank):
        return _line.load_cost(bank, cell)
    return _point.quote_load(bank.geom, cell, bank.empties()).beats


def point_load(state: SamState, q: int) -> MoveCost:
    b, bank, cell = _resident(state, q)
    if not isinstance(bank, PointBank):
        raise SamError(f"M{q} is not in a point bank")
    cost = _point.load_path(bank, cell)
    left = bank.apply(cost.path)
    if left != q:
        raise SamError(f"load of M{q} delivered M{left}")
    del state.pos[q]
    state.out[q] = LoadRecord(b, cell, cost.beats, cost.path, tuple(bank.empties()))
    state.refresh(b)
    return cost


def line_load(state: SamState, q: int) -> MoveCost:
    b, bank, cell = _resident(state, q)
    if not isinstance(bank, LineBank):
        raise SamError(f"M{q} is not in a line bank")
    row_obj = bank.grid[cell[0]]
    cost, left = _line.load(bank, cell)
    if left != q:
        raise SamError(f"load of M{q} delivered M{left}")
    del state.pos[q]
    rec = LoadRecord(b, cell, cost.beats)
    rec.empties_after = (row_obj, cell[1])  # the row object survives shifts
    state.out[q] = rec
    state.refresh(b)
    return cost


def load(state: SamState, q: int) -> MoveCost:
    b, bank, cell = _resident(state, q)
    if bank is None:
        state.out[q] = LoadRecord(CONV, None, 0)
        return ZERO
    if isinstance(bank, LineBank):
        return line_load(state, q)
    return point_load(state, q)


def _inverse(path) -> tuple:
    return tuple(tuple((dst, src) for src, dst in beat) for beat in reversed(path))


def store(state: SamState, q: int, policy: str = LOCALITY_AWARE, partner: Optional[int] = None) -> MoveCost:
    """Return ``q`` from the CR to its home bank."""
    if policy not in STORE_POLICIES:
        raise ValueError(f"unknown store policy {policy!r}")
    if q not in state.out:
        raise SamError(f"M{q} is not loaded")
    rec = state.out[q]
    if rec.bank == CONV:
        del state.out[q]
        return ZERO
    bank = state.banks[rec.bank]
    if isinstance(bank, PointBank):
        if policy == REVERSE and tuple(bank.empties()) == rec.empties_after:
            cost = MoveCost(rec.beats, _inverse(rec.path))
        else:
            cost = _point.store_path(bank)
        bank.apply(cost.path, incoming=q)
    else:
        if policy == REVERSE:
            row_obj, x = rec.empties_after
            r = next(i for i, row in enumerate(bank.grid) if row is row_obj)
            if row_obj[x] is None:
                beats = _line._shift(bank, r) + [((None, (r, x)),)]
                row_obj[x] = q
                cost = MoveCost(len(beats), tuple(beats))
            else:
                cost = _line.store(bank, q)
        else:
            pcell = None
            if partner is not None and partner in state.pos and state.home.get(partner) == rec.bank:
                pcell = state.pos[partner]
            cost = _line.store(bank, q, pcell)
    del state.out[q]
    state.refresh(rec.bank)
    if q not in state.pos:
        raise SamError(f"store lost M{q}")
    return cost


def store_cost(state: SamState, q: int, policy: str = LOCALITY_AWARE, partner: Optional[int] = None) -> int:
    """Quote a store without applying it."""
    rec = state.out[q]
    if rec.bank == CONV:
        return 0
    bank = state.banks[rec.bank]
    if isinstance(bank, PointBank):
        if policy == REVERSE and tuple(bank.empties()) == rec.empties_after:
            return rec.beats
        return _point.store_quote(bank.geom, bank.empties())[0]
    pcell = state.pos.get(partner) if partner is not None and state.home.get(partner) == rec.bank else None
    if policy == REVERSE:
        row_obj, x = rec.empties_after
        if row_obj[x] is None:
            r = next(i for i, row in enumerate(bank.grid) if row is row_obj)
            return abs(r - bank.scan)
        pcell = None
    return _line.store_quote(bank, pcell)[0]


def in_memory_cost(state: SamState, q: int, kind: str) -> int:
    b, bank, cell = _resident(state, q)
    if bank is None or OP_BEATS[kind] == 0:
        return OP_BEATS[kind]
    if isinstance(bank, LineBank):
        return _line.in_memory_cost(bank, cell, kind)
    if kind in ("MZZ", "MXX"):
        return _point.quote_load(bank.geom, cell, bank.empties(), in_memory=True).beats + OP_BEATS[kind]
    d, _, _ = _point.neighbor_quote(bank.geom, cell, bank.empties())
    return int(d) + OP_BEATS[kind]


def in_memory_access(state: SamState, q: int, kind: str) -> MoveCost:
    """Operate on ``q`` where it sits.

    Point SAM parks an empty cell next to the target for HD/PH; for MZZ/MXX
    it walks the target into a port cell so it touches the CR, and leaves it
    there.  Line SAM brings the scan row alongside the target's row.
    """
    if kind not in OP_BEATS:
        raise ValueError(f"unknown in-memory operation {kind!r}")
    b, bank, cell = _resident(state, q)
    if bank is None:
        return MoveCost(OP_BEATS[kind], ((),) * OP_BEATS[kind])
    if OP_BEATS[kind] == 0:
        return ZERO
    if isinstance(bank, LineBank):
        cost = _line.in_memory(bank, cell, kind)
    elif kind in ("MZZ", "MXX"):
        walk = _point.load_path(bank, cell, in_memory=True)
        cost = walk + MoveCost(OP_BEATS[kind], ((),) * OP_BEATS[kind])
        bank.apply(walk.path)
    else:
        cost = _point.single_qubit_path(bank, cell, kind)
        bank.apply(cost.path)
    state.refresh(b)
    return cost
