"""Reference load costs from explicit primitive-move search.

This module shares no cost arithmetic with :mod:`point`.  It walks the
target cell by cell toward the port and asks a breadth-first search how many
beats the empty cells need between steps:

* the approach is a search over joint empty-cell configurations (one move
  per beat) until the cells the first step needs are empty;
* with one circulating blank, each further step routes that blank around the
  target by the shortest path;
* with two blanks, each macro (one straight or one diagonal step) is searched
  with parallel moves, from and to the configuration where the blanks sit in
  front of and beside the target.

It is meant for tests and is deliberately slow and literal.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Optional

from ..floorplan import BankGeometry, Cell
from .state import LineBank, SamError, SamState

INF = float("inf")


def _step(c, d):
    return (c[0] + d[0], c[1] + d[1])


def target_path(geom: BankGeometry, start: Cell) -> list[Cell]:
    """Cells the target visits on its way to a port cell, start included."""
    r, x = start
    rc = geom.center_row
    vert = 1 if r < rc else -1
    lefts = x
    downs = max(0, abs(r - rc) - 1)
    out = [start]
    cur = start
    # run along the longer axis alone first, then zig-zag
    extra = lefts - downs
    for _ in range(abs(extra)):
        cur = _step(cur, (0, -1) if extra > 0 else (vert, 0))
        out.append(cur)
    for _ in range(min(lefts, downs)):
        if extra >= 0:
            cur = _step(cur, (0, -1))
            out.append(cur)
            cur = _step(cur, (vert, 0))
        else:
            cur = _step(cur, (vert, 0))
            out.append(cur)
            cur = _step(cur, (0, -1))
        out.append(cur)
    return out


def side_direction(geom: BankGeometry, path: list[Cell]) -> tuple[int, int]:
    """Where the second blank rides along: the zig-zag's second half-step,
    or (for a straight run) toward the centre row / the CR, falling back to
    up-then-down or rightward."""
    start = path[0]
    steps = [(b[0] - a[0], b[1] - a[1]) for a, b in zip(path, path[1:])]
    first = steps[0]
    for d in steps[1:]:
        if d != first:
            return d
    r, x = start
    rc = geom.center_row
    if first[0] == 0:  # moving left
        if r != rc:
            return (1 if r < rc else -1, 0)
        return (-1, 0) if geom.contains((r - 1, x)) else (1, 0)
    return (0, -1) if x > 0 else (0, 1)


def _macros(path: list[Cell]) -> list[list[Cell]]:
    steps = [(b[0] - a[0], b[1] - a[1]) for a, b in zip(path, path[1:])]
    out, i = [], 0
    first = steps[0]
    while i < len(steps):
        if i + 1 < len(steps) and steps[i] == first and steps[i + 1] != first:
            out.append(path[i : i + 3])
            i += 2
        else:
            out.append(path[i : i + 2])
            i += 1
    return out


# -- sequential search over empty-cell configurations -------------------------


def _joint_neighbors(geom: BankGeometry, blanks: frozenset, target: Cell) -> Iterable[frozenset]:
    for b in blanks:
        for n in geom.neighbors(b):
            if n != target and n not in blanks:
                yield (blanks - {b}) | {n}


@lru_cache(maxsize=4096)
def _approach_field(geom: BankGeometry, target: Cell, need: frozenset, size: int) -> dict:
    """Moves from every ``size``-blank configuration to one containing ``need``."""
    cells = [c for c in geom.all_cells() if c != target]
    goals = []
    rest = [c for c in cells if c not in need]
    if size < len(need):
        return {}
    for extra in combinations(rest, size - len(need)):
        goals.append(frozenset(need) | frozenset(extra))
    dist = {g: 0 for g in goals}
    frontier = deque(goals)
    while frontier:
        s = frontier.popleft()
        for n in _joint_neighbors(geom, s, target):
            if n not in dist:
                dist[n] = dist[s] + 1
                frontier.append(n)
    return dist


def _route_len(geom: BankGeometry, a: Cell, b: Cell, avoid: Cell) -> float:
    if a == b:
        return 0
    seen = {a}
    frontier = deque([(a, 0)])
    while frontier:
        c, d = frontier.popleft()
        for n in geom.neighbors(c):
            if n == avoid or n in seen:
                continue
            if n == b:
                return d + 1
            seen.add(n)
            frontier.append((n, d + 1))
    return INF


@lru_cache(maxsize=4096)
def _single_blank_walk(geom: BankGeometry, path: tuple) -> float:
    """Beats from 'blank in front of the target' to 'target in the port cell'."""
    beats = 0
    blank = path[1]
    for k in range(len(path) - 1):
        t, nxt = path[k], path[k + 1]
        if k:
            beats += _route_len(geom, blank, nxt, t)
        beats += 1
        blank = t
    return beats


# -- parallel search for two blanks -----------------------------------------------


def _actions(geom, window, target, nxt, blank):
    yield None, blank, False
    for n in geom.neighbors(blank):
        if n in window and n != target:
            yield (blank, n), n, False
    if nxt is not None and blank == nxt:
        yield (blank, target), target, True


@lru_cache(maxsize=65536)
def _parallel_macro(geom: BankGeometry, cells: tuple, start: frozenset, goal: Optional[frozenset]) -> float:
    """Fewest beats to push the target along ``cells`` from blanks ``start``.

    Two blanks act per beat on disjoint cells; a blank either stays, swaps
    with a neighbouring data cell, or lets the target step into it.  The
    search is confined to cells within two of the macro.
    """
    window = {
        (r, x)
        for (cr, cx) in cells
        for r in range(cr - 2, cr + 3)
        for x in range(cx - 2, cx + 3)
        if geom.contains((r, x))
    }
    end = len(cells) - 1
    init = (0, start)
    dist = {init: 0}
    frontier = deque([init])
    while frontier:
        state = frontier.popleft()
        k, blanks = state
        if k == end and (goal is None or blanks == goal):
            return dist[state]
        target = cells[k]
        nxt = cells[k + 1] if k < end else None
        b1, b2 = sorted(blanks)
        for m1, n1, t1 in _actions(geom, window, target, nxt, b1):
            for m2, n2, t2 in _actions(geom, window, target, nxt, b2):
                if m1 is None and m2 is None:
                    continue
                if t1 and t2:
                    continue
                if m1 is not None and m2 is not None and set(m1) & set(m2):
                    continue
                if n1 == n2:
                    continue
                ns = (k + (1 if t1 or t2 else 0), frozenset((n1, n2)))
                if ns not in dist:
                    dist[ns] = dist[state] + 1
                    frontier.append(ns)
    return INF


@lru_cache(maxsize=4096)
def _two_blank_walk(geom: BankGeometry, path: tuple, side: tuple[int, int]) -> float:
    primary = (path[1][0] - path[0][0], path[1][1] - path[0][1])
    macros = _macros(path)
    total = 0
    for i, cells in enumerate(macros):
        t0, t1 = cells[0], cells[-1]
        start = frozenset((_step(t0, primary), _step(t0, side)))
        goal = None if i == len(macros) - 1 else frozenset((_step(t1, primary), _step(t1, side)))
        if not all(geom.contains(c) for c in start):
            return INF
        total += _parallel_macro(geom, tuple(cells), start, goal)
    return total


def point_oracle(geom: BankGeometry, target: Cell, empties: Iterable[Cell]) -> float:
    empties = frozenset(empties)
    if target in empties or not geom.contains(target):
        raise SamError(f"{target} holds no data")
    path = target_path(geom, target)
    if len(path) == 1:
        return 1
    best = INF
    field = _approach_field(geom, target, frozenset([path[1]]), len(empties))
    if empties in field:
        best = field[empties] + _single_blank_walk(geom, tuple(path)) + 1
    side = side_direction(geom, path)
    side_cell = _step(target, side)
    if len(empties) == 2 and geom.contains(side_cell):
        field2 = _approach_field(geom, target, frozenset([path[1], side_cell]), 2)
        if empties in field2:
            best = min(best, field2[empties] + _two_blank_walk(geom, tuple(path), side) + 1)
    return best


def line_oracle(bank: LineBank, cell: Cell) -> int:
    """Shift rows one at a time until the scan row touches the target's row."""
    rows = [list(r) for r in bank.grid]
    scan = bank.scan
    r = cell[0]
    beats = 0
    while abs(scan - r) > 1:
        step = 1 if r > scan else -1
        rows[scan], rows[scan + step] = rows[scan + step], rows[scan]
        scan += step
        beats += 1
    if rows[r][cell[1]] is None:
        raise SamError(f"{cell} holds no data")
    return beats + 1


def oracle_load_cost(state: SamState, q: int) -> float:
    b = state.bank_of(q)
    if q in state.out:
        return 1  # already in the CR port
    if b < 0:
        return 0
    bank = state.banks[b]
    cell = state.pos[q]
    if isinstance(bank, LineBank):
        return line_oracle(bank, cell)
    return point_oracle(bank.geom, cell, bank.empties())


def replay(geom: BankGeometry, cells: dict, path, incoming: Optional[int] = None) -> tuple[dict, Optional[int]]:
    """Play a move path on a copy of ``cells`` checking every primitive rule.

    Returns the new occupancy and the variable that left through the port.
    """
    cells = dict(cells)
    left = None
    ports = set(geom.port_cells())
    for n, beat in enumerate(path):
        touched: set = set()
        for src, dst in beat:
            for c in (src, dst):
                if c is None:
                    continue
                if not geom.contains(c):
                    raise SamError(f"beat {n}: {c} is outside the bank")
                if c in touched:
                    raise SamError(f"beat {n}: {c} used twice")
                touched.add(c)
        for src, dst in beat:
            if dst is None:
                if src not in ports and geom.kind == "point":
                    raise SamError(f"beat {n}: {src} is not a port cell")
                left = cells[src]
                cells[src] = None
            elif src is None:
                if cells[dst] is not None:
                    raise SamError(f"beat {n}: store into occupied {dst}")
                cells[dst] = incoming
            else:
                if abs(src[0] - dst[0]) + abs(src[1] - dst[1]) != 1:
                    raise SamError(f"beat {n}: {src}->{dst} is not a unit move")
                if cells[dst] is not None:
                    raise SamError(f"beat {n}: {dst} is occupied")
                cells[dst], cells[src] = cells[src], None
    return cells, left
