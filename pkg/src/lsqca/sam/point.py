"""Point SAM: sliding-puzzle loads with one or two empty cells.

A load moves the target toward the port column (x = 0, rows centre-1..centre+1)
as a sequence of macros: ``K = |W - H|`` straight steps along the primary axis
followed by ``D = min(W, H)`` diagonal steps.  With a single empty cell the
blank is parked in front of the target and circulates around it (5 beats per
straight, 6 per diagonal).  With a second empty cell parked at the target's
side the two blanks move in parallel (3 and 4 beats).  The last macro skips
its trailing repositioning, and the port-to-register hop costs ``C_PORT``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from ..floorplan import BankGeometry, Cell
from .state import Beat, MoveCost, PointBank, SamError

C_PORT = 1
STRAIGHT_1, DIAGONAL_1 = 5, 6
TAIL_1 = {"S": 4, "D": 2}
STRAIGHT_2, DIAGONAL_2 = 3, 4
TAIL_2 = 2
OP_BEATS = {"HD": 3, "PH": 2, "MZZ": 1, "MXX": 1, "MX": 0, "MZ": 0, "PZ": 0, "PP": 0}

UP, DOWN, LEFT, RIGHT = (-1, 0), (1, 0), (0, -1), (0, 1)
INF = float("inf")


def _add(c: Cell, *ds: Cell) -> Cell:
    r, x = c
    for d in ds:
        r, x = r + d[0], x + d[1]
    return r, x


@dataclass(frozen=True)
class LoadPlan:
    target: Cell
    primary: Cell
    secondary: Cell
    straights: int
    diagonals: int

    @property
    def macros(self) -> tuple[str, ...]:
        return ("S",) * self.straights + ("D",) * self.diagonals

    @property
    def front(self) -> Cell:
        return _add(self.target, self.primary)

    @property
    def side(self) -> Cell:
        return _add(self.target, self.secondary)


def displacement(geom: BankGeometry, cell: Cell) -> tuple[int, int]:
    """(W, H): columns and rows the target must cross to reach a port cell."""
    r, x = cell
    return x, max(0, abs(r - geom.center_row) - 1)


def plan_load(geom: BankGeometry, cell: Cell) -> LoadPlan:
    r, x = cell
    rc = geom.center_row
    W, H = displacement(geom, cell)
    toward = (rc > r) - (rc < r)
    if W >= H:
        primary = LEFT
        if toward:
            secondary = (toward, 0)
        else:
            secondary = UP if geom.contains((r - 1, x)) else DOWN
    else:
        primary = (toward, 0)
        secondary = LEFT if x > 0 else RIGHT
    return LoadPlan(cell, primary, secondary, abs(W - H), min(W, H))


# -- distances ----------------------------------------------------------------


def _bfs_dist(geom: BankGeometry, a: Cell, b: Cell, avoid: Optional[Cell]) -> float:
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


def blank_distance(geom: BankGeometry, a: Cell, b: Cell, avoid: Optional[Cell] = None) -> float:
    """Moves for an empty cell to travel from ``a`` to ``b`` without crossing ``avoid``.

    Manhattan distance, plus a two-move detour when ``avoid`` sits strictly
    between ``a`` and ``b`` on one line.  Shapes where the bounding box is not
    fully present fall back to a search.
    """
    if a == b:
        return 0
    (r1, x1), (r2, x2) = a, b
    corner = (max(r1, r2), max(x1, x2))
    if not geom.contains(corner):
        return _bfs_dist(geom, a, b, avoid)
    d = abs(r1 - r2) + abs(x1 - x2)
    if avoid is None:
        return d
    ra, xa = avoid
    if r1 == r2 == ra and min(x1, x2) < xa < max(x1, x2):
        if r1 >= 1 or geom.contains((r1 + 1, corner[1])):
            return d + 2
        return _bfs_dist(geom, a, b, avoid)
    if x1 == x2 == xa and min(r1, r2) < ra < max(r1, r2):
        if x1 >= 1 or geom.contains((corner[0], x1 + 1)):
            return d + 2
        return _bfs_dist(geom, a, b, avoid)
    return d


def _route(geom: BankGeometry, a: Cell, b: Cell, blocked: set) -> Optional[list[Cell]]:
    """Shortest cell sequence from a to b (exclusive of a) avoiding ``blocked``."""
    if a == b:
        return []
    prev = {a: None}
    frontier = deque([a])
    while frontier:
        c = frontier.popleft()
        for n in geom.neighbors(c):
            if n in blocked or n in prev:
                continue
            prev[n] = c
            if n == b:
                out = [n]
                while prev[out[-1]] != a:
                    out.append(prev[out[-1]])
                return out[::-1]
            frontier.append(n)
    return None


def _blank_walk(a: Cell, cells: list[Cell]) -> list[Beat]:
    # the blank at ``a`` walks along ``cells``: each neighbour slides into it
    out, cur = [], a
    for n in cells:
        out.append(((n, cur),))
        cur = n
    return out


# -- macro choreography ---------------------------------------------------------


def macro_path(plan: LoadPlan, two: bool) -> tuple[list[Beat], Cell]:
    """Beats moving the target from its staged position to the port cell."""
    T = plan.target
    p, s = plan.primary, plan.secondary
    beats: list[Beat] = []
    seq = plan.macros
    for i, m in enumerate(seq):
        last = i == len(seq) - 1
        if not two and m == "S":
            beats.append(((T, _add(T, p)),))
            if not last:
                beats += [
                    ((_add(T, s), T),),
                    ((_add(T, p, s), _add(T, s)),),
                    ((_add(T, p, p, s), _add(T, p, s)),),
                    ((_add(T, p, p), _add(T, p, p, s)),),
                ]
            T = _add(T, p)
        elif not two:
            beats += [
                ((T, _add(T, p)),),
                ((_add(T, s), T),),
                ((_add(T, p, s), _add(T, s)),),
                ((_add(T, p), _add(T, p, s)),),
            ]
            if not last:
                beats += [((_add(T, p, p), _add(T, p)),), ((_add(T, p, p, s), _add(T, p, p)),)]
            T = _add(T, p, s)
        elif m == "S":
            beats.append(((T, _add(T, p)), (_add(T, p, s), _add(T, s))))
            if not last:
                beats.append(((_add(T, p, p, s), _add(T, p, s)), (_add(T, s), T)))
                beats.append(((_add(T, p, p), _add(T, p, p, s)), (_add(T, p, s), _add(T, s))))
            T = _add(T, p)
        else:
            beats.append(((T, _add(T, p)), (_add(T, p, s), _add(T, s))))
            beats.append(((_add(T, p), _add(T, p, s)), (_add(T, s), T)))
            if not last:
                beats.append(((_add(T, p, p), _add(T, p)), (_add(T, s, s), _add(T, s))))
                beats.append(((_add(T, p, p, s), _add(T, p, p)), (_add(T, p, s, s), _add(T, s, s))))
            T = _add(T, p, s)
    return beats, T


@lru_cache(maxsize=1 << 16)
def _feasible(geom: BankGeometry, plan: LoadPlan, two: bool) -> bool:
    beats, _ = macro_path(plan, two)
    cells = {c for beat in beats for mv in beat for c in mv}
    if two:
        cells.add(plan.side)
    return all(geom.contains(c) for c in cells)


def macro_beats(plan: LoadPlan, two: bool) -> int:
    K, D = plan.straights, plan.diagonals
    if K + D == 0:
        return 0
    if two:
        return STRAIGHT_2 * K + DIAGONAL_2 * D - TAIL_2
    return STRAIGHT_1 * K + DIAGONAL_1 * D - TAIL_1[plan.macros[-1]]


def _approach_one(geom, plan, empties) -> tuple[float, Optional[Cell]]:
    best, who = INF, None
    for e in empties:
        d = blank_distance(geom, e, plan.front, plan.target)
        if d < best:
            best, who = d, e
    return best, who


def _approach_two(geom, plan, empties) -> tuple[float, Optional[tuple[Cell, Cell]]]:
    best, who = INF, None
    F, S = plan.front, plan.side
    df = {e: blank_distance(geom, e, F, plan.target) for e in empties}
    ds = {e: blank_distance(geom, e, S, plan.target) for e in empties}
    for a in empties:
        for b in empties:
            if a != b and df[a] + ds[b] < best:
                best, who = df[a] + ds[b], (a, b)
    return best, who


@dataclass(frozen=True)
class LoadQuote:
    beats: int
    plan: LoadPlan
    two: bool
    approach: int
    blanks: tuple  # blanks chosen for the approach


def quote_load(geom: BankGeometry, cell: Cell, empties: list[Cell], in_memory: bool = False) -> LoadQuote:
    """Closed-form cost of bringing ``cell`` out through the port.

    ``in_memory`` drops the final port-to-register hop (the target stays in
    the port cell for lattice surgery with the CR).
    """
    plan = plan_load(geom, cell)
    tail = 0 if in_memory else C_PORT
    if not plan.macros:
        return LoadQuote(tail, plan, False, 0, ())
    options = []
    if _feasible(geom, plan, False):
        a1, e1 = _approach_one(geom, plan, empties)
        if a1 < INF:
            options.append((a1 + macro_beats(plan, False), 0, a1, False, (e1,)))
    if len(empties) >= 2 and geom.contains(plan.side) and _feasible(geom, plan, True):
        a2, pair = _approach_two(geom, plan, empties)
        if a2 < INF:
            options.append((a2 + macro_beats(plan, True), 1, a2, True, pair))
    if not options:
        raise SamError(f"no load procedure reaches the port from {cell}")
    cost, _, approach, two, blanks = min(options)
    return LoadQuote(int(cost) + tail, plan, two, int(approach), blanks)


def _approach_path(geom, quote: LoadQuote) -> list[Beat]:
    plan = quote.plan
    if not quote.two:
        route = _route(geom, quote.blanks[0], plan.front, {plan.target})
        return _blank_walk(quote.blanks[0], route)
    a, b = quote.blanks
    F, S = plan.front, plan.side
    for (x, gx), (y, gy) in (((a, F), (b, S)), ((b, S), (a, F))):
        r1 = _route(geom, x, gx, {plan.target})
        if r1 is None:
            continue
        # the second blank must not disturb the first one once it is parked
        r2 = _route(geom, y, gy, {plan.target, gx})
        if r2 is not None and len(r1) + len(r2) == quote.approach and y not in r1:
            return _blank_walk(x, r1) + _blank_walk(y, r2)
    raise SamError(f"cannot realise a {quote.approach}-move approach for {plan.target}")


def load_path(bank: PointBank, cell: Cell, in_memory: bool = False) -> MoveCost:
    geom = bank.geom
    quote = quote_load(geom, cell, bank.empties(), in_memory)
    beats = _approach_path(geom, quote) if quote.plan.macros else []
    mbeats, end = macro_path(quote.plan, quote.two)
    beats += mbeats
    if not in_memory:
        beats.append(((end, None),))
    cost = MoveCost(len(beats), tuple(beats))
    if cost.beats != quote.beats:
        raise SamError(f"load path of {cell} has {cost.beats} beats, closed form says {quote.beats}")
    return cost


def end_cell(geom: BankGeometry, cell: Cell) -> Cell:
    plan = plan_load(geom, cell)
    return macro_path(plan, False)[1]


# -- in-memory access and stores ----------------------------------------------


def neighbor_quote(geom: BankGeometry, cell: Cell, empties: list[Cell]) -> tuple[float, Optional[Cell], Optional[Cell]]:
    """Cheapest way to park an empty cell next to ``cell``: (moves, blank, goal)."""
    best = (INF, None, None)
    for e in empties:
        for n in geom.neighbors(cell):
            d = blank_distance(geom, e, n, cell)
            if d < best[0]:
                best = (d, e, n)
    return best


def single_qubit_path(bank: PointBank, cell: Cell, op: str) -> MoveCost:
    d, e, n = neighbor_quote(bank.geom, cell, bank.empties())
    if d == INF:
        raise SamError(f"no empty cell can reach {cell}")
    beats = _blank_walk(e, _route(bank.geom, e, n, {cell})) + [()] * OP_BEATS[op]
    return MoveCost(len(beats), tuple(beats))


def store_quote(geom: BankGeometry, empties: list[Cell]) -> tuple[int, Cell, Cell]:
    """Locality-aware store: (beats, empty cell used, port cell the qubit enters)."""
    best = None
    for e in empties:
        for k, port in enumerate(geom.port_cells()):
            d = blank_distance(geom, e, port)
            key = (d, e, k)
            if best is None or key < best[0]:
                best = (key, e, port)
    if best is None:
        raise SamError("no empty cell to store into")
    (d, _, _), e, port = best
    return int(d) + C_PORT, e, port


def store_path(bank: PointBank) -> MoveCost:
    beats, e, port = store_quote(bank.geom, bank.empties())
    path = _blank_walk(e, _route(bank.geom, e, port, set())) + [((None, port),)]
    return MoveCost(beats, tuple(path))
