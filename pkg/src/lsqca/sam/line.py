"""Line SAM: whole rows shift across the scan row, one row per beat.

Loading a qubit in row ``r`` with the scan row at ``s`` shifts ``|r - s| - 1``
rows so that the scan row becomes adjacent to ``r``, then transports the
qubit along the scan row into the CR in one beat.  A second access to the
same row therefore costs only the transport beat.
"""

from __future__ import annotations

from typing import Optional

from ..floorplan import Cell
from .point import OP_BEATS
from .state import Beat, LineBank, MoveCost, SamError

TRANSPORT = 1


def shifts_to(bank: LineBank, r: int) -> int:
    if r == bank.scan:
        raise SamError("the scan row holds no data")
    return abs(r - bank.scan) - 1


def _shift(bank: LineBank, r: int) -> list[Beat]:
    """Move the scan row next to row ``r``; returns one beat per row shift."""
    beats = []
    step = 1 if r > bank.scan else -1
    while abs(r - bank.scan) > 1:
        s, n = bank.scan, bank.scan + step
        beats.append(tuple(((n, x), (s, x)) for x, q in enumerate(bank.grid[n]) if q is not None))
        bank.grid[s], bank.grid[n] = bank.grid[n], bank.grid[s]
        bank.scan = n
    return beats


def load_cost(bank: LineBank, cell: Cell) -> int:
    return shifts_to(bank, cell[0]) + TRANSPORT


def load(bank: LineBank, cell: Cell) -> tuple[MoveCost, int]:
    r, x = cell
    q = bank.grid[r][x]
    if q is None:
        raise SamError(f"no data in {cell}")
    beats = _shift(bank, r)
    bank.grid[r][x] = None
    beats.append((((r, x), None),))
    return MoveCost(len(beats), tuple(beats)), q


def in_memory_cost(bank: LineBank, cell: Cell, op: str) -> int:
    if OP_BEATS[op] == 0:
        return 0
    return shifts_to(bank, cell[0]) + OP_BEATS[op]


def in_memory(bank: LineBank, cell: Cell, op: str) -> MoveCost:
    if in_memory_cost(bank, cell, op) == 0:
        return MoveCost(0)
    beats = _shift(bank, cell[0]) + [()] * OP_BEATS[op]
    return MoveCost(len(beats), tuple(beats))


def store_quote(bank: LineBank, partner: Optional[Cell] = None) -> tuple[int, Cell, bool]:
    """(beats, vacancy used, whether a partner-row qubit is pushed out).

    Without a partner the qubit goes to the vacancy closest to the scan row.
    With a resident partner the qubit joins the partner's row: directly if
    that row has a vacancy, otherwise one of its other qubits is pushed into
    the nearest vacancy first, which costs one extra beat.
    """
    vac = bank.empties()
    if not vac:
        raise SamError("line bank is full")
    if partner is not None:
        prow = partner[0]
        mine = [c for c in vac if c[0] == prow]
        if mine:
            return abs(prow - bank.scan), mine[0], False
    best = min(vac, key=lambda c: (abs(c[0] - bank.scan), c[0], c[1]))
    cost = abs(best[0] - bank.scan)
    if partner is None or bank.geom.width < 2:
        return cost, best, False
    return cost + 1, best, True


def store(bank: LineBank, q: int, partner: Optional[Cell] = None) -> MoveCost:
    beats_n, cell, push = store_quote(bank, partner)
    prow_obj = bank.grid[partner[0]] if partner is not None else None
    beats = _shift(bank, cell[0])
    if push:
        prow = next(i for i, row in enumerate(bank.grid) if row is prow_obj)
        vx = min(x for x, v in enumerate(prow_obj) if v is not None and x != partner[1])
        bank.grid[cell[0]][cell[1]] = prow_obj[vx]
        prow_obj[vx] = None
        beats.append((((prow, vx), cell),))
        cell = (prow, vx)
    bank.grid[cell[0]][cell[1]] = q
    beats.append(((None, cell),))
    cost = MoveCost(len(beats), tuple(beats))
    if cost.beats != beats_n:
        raise SamError(f"line store took {cost.beats} beats, quoted {beats_n}")
    return cost
