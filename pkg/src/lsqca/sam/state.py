"""Dynamic SAM occupancy: which cell holds which variable, where the scan resources are."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..floorplan import CONV, LINE, POINT, BankGeometry, Cell, Layout, QubitMap

# A move shifts the content of ``src`` into the empty cell ``dst``.  ``None``
# stands for the CR side of the port: (cell, None) leaves the bank,
# (None, cell) enters it.
Move = tuple[Optional[Cell], Optional[Cell]]
Beat = tuple[Move, ...]  # moves on pairwise disjoint cells; () is a beat spent on a logical op


class SamError(RuntimeError):
    pass


@dataclass(frozen=True)
class MoveCost:
    beats: int
    path: tuple[Beat, ...] = ()

    def __post_init__(self) -> None:
        if self.path and len(self.path) != self.beats:
            raise ValueError(f"path has {len(self.path)} beats, cost says {self.beats}")

    def __add__(self, other: "MoveCost") -> "MoveCost":
        return MoveCost(self.beats + other.beats, self.path + other.path)


ZERO = MoveCost(0)


class PointBank:
    def __init__(self, geom: BankGeometry):
        self.geom = geom
        self.cells: dict[Cell, Optional[int]] = {c: None for c in geom.all_cells()}

    def empties(self) -> list[Cell]:
        return sorted(c for c, q in self.cells.items() if q is None)

    def apply(self, path, incoming: Optional[int] = None) -> Optional[int]:
        """Play a path of moves; returns the variable that left through the port."""
        left = None
        for beat in path:
            for src, dst in beat:
                if dst is None:
                    left = self.cells[src]
                    self.cells[src] = None
                elif src is None:
                    if self.cells[dst] is not None:
                        raise SamError(f"store into occupied cell {dst}")
                    self.cells[dst] = incoming
                else:
                    if self.cells[dst] is not None:
                        raise SamError(f"move {src}->{dst} into occupied cell")
                    self.cells[dst], self.cells[src] = self.cells[src], None
        return left

    def locate(self) -> dict[int, Cell]:
        return {q: c for c, q in self.cells.items() if q is not None}


class LineBank:
    def __init__(self, geom: BankGeometry):
        self.geom = geom
        self.grid: list[list[Optional[int]]] = [[None] * geom.width for _ in range(geom.rows)]
        self.scan = geom.center_row

    @property
    def cells(self) -> dict[Cell, Optional[int]]:
        return {(r, x): q for r, row in enumerate(self.grid) for x, q in enumerate(row)}

    def empties(self) -> list[Cell]:
        return [(r, x) for r, row in enumerate(self.grid) if r != self.scan for x, q in enumerate(row) if q is None]

    def locate(self) -> dict[int, Cell]:
        return {q: (r, x) for r, row in enumerate(self.grid) for x, q in enumerate(row) if q is not None}


Bank = Union[PointBank, LineBank]


@dataclass
class LoadRecord:
    bank: int
    cell: Cell  # where the variable sat before it was loaded
    beats: int
    path: tuple = ()
    empties_after: tuple = ()  # bank empties right after the load, for reverse stores


@dataclass
class SamState:
    layout: Layout
    banks: list = field(default_factory=list)
    home: dict[int, int] = field(default_factory=dict)  # variable -> bank id or CONV
    out: dict[int, LoadRecord] = field(default_factory=dict)  # variables currently in the CR
    pos: dict[int, Cell] = field(default_factory=dict)  # variables resident in a bank

    @classmethod
    def create(cls, layout: Layout, qmap: QubitMap) -> "SamState":
        st = cls(layout)
        for geom in layout.banks:
            st.banks.append(PointBank(geom) if geom.kind == POINT else LineBank(geom))
        for q, (b, cell) in sorted(qmap.location.items()):
            st.home[q] = b
            if b == CONV:
                continue
            bank = st.banks[b]
            if isinstance(bank, LineBank):
                if cell[0] == bank.scan:
                    raise SamError(f"M{q} placed on the scan row")
                bank.grid[cell[0]][cell[1]] = q
            else:
                bank.cells[cell] = q
            st.pos[q] = cell
        st.check()
        return st

    # -- queries -------------------------------------------------------------

    def bank_of(self, q: int) -> int:
        if q not in self.home:
            raise SamError(f"M{q} is not mapped")
        return self.home[q]

    def is_conventional(self, q: int) -> bool:
        return self.bank_of(q) == CONV

    def is_loaded(self, q: int) -> bool:
        return q in self.out

    def cell_of(self, q: int) -> Optional[Cell]:
        return self.pos.get(q)

    @property
    def pending_empties(self) -> list[int]:
        return [len(b.empties()) for b in self.banks]

    @property
    def qubit_map(self) -> QubitMap:
        qm = QubitMap()
        for q, b in self.home.items():
            qm.location[q] = (b, self.pos.get(q))
        return qm

    def refresh(self, b: int) -> None:
        """Re-read variable positions of bank ``b`` after its cells moved."""
        bank = self.banks[b]
        for q, cell in bank.locate().items():
            self.pos[q] = cell

    def check(self) -> None:
        """Cross-check occupancy grids against the variable map."""
        seen: dict[int, tuple[int, Cell]] = {}
        for b, bank in enumerate(self.banks):
            for q, cell in bank.locate().items():
                if q in seen:
                    raise SamError(f"M{q} appears twice")
                seen[q] = (b, cell)
            if isinstance(bank, PointBank):
                loaded = sum(1 for r in self.out.values() if r.bank == b)
                resident = len(bank.locate())
                if len(bank.empties()) != bank.geom.cells - resident:
                    raise SamError("point bank empties miscounted")
                if bank.geom.cells - resident < 1 + loaded:
                    raise SamError(f"point bank {b} has fewer empties than 1 + loaded")
            else:
                if any(q is not None for q in bank.grid[bank.scan]):
                    raise SamError(f"line bank {b}: scan row holds data")
        for q, b in self.home.items():
            if b == CONV:
                continue
            if q in self.out:
                if q in seen:
                    raise SamError(f"M{q} is both loaded and resident")
                continue
            if seen.get(q) != (b, self.pos.get(q)):
                raise SamError(f"M{q} map {b, self.pos.get(q)} disagrees with grid {seen.get(q)}")
        if len(seen) + sum(1 for r in self.out.values() if r.bank != CONV) !=sum(1 for b in self.home.values() if b != CONV):
            raise SamError("variable count mismatch")
