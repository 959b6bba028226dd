"""Cell-grid floorplans: point SAM, line SAM, multi-bank, conventional and hybrid.

Bank coordinates are ``(row, x)`` with ``x = 0`` the column facing the CR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

POINT, LINE, CONVENTIONAL = "point", "line", "conventional"
SAM_KINDS = (POINT, LINE, CONVENTIONAL)
COMPACT_CR_CELLS = 6
REGISTER_CELLS = 2

Cell = tuple[int, int]


@dataclass(frozen=True)
class LayoutConfig:
    sam_kind: str = LINE
    banks: int = 1
    factories: int = 1
    hybrid_fraction: Fraction = Fraction(0)
    buffer_capacity: Optional[int] = None
    warm_start: bool = False

    def __post_init__(self) -> None:
        if self.sam_kind not in SAM_KINDS:
            raise ValueError(f"unknown sam_kind {self.sam_kind!r}")
        if self.sam_kind == POINT and self.banks not in (1, 2):
            raise ValueError("point SAM supports 1 or 2 banks")
        if self.sam_kind == LINE and self.banks not in (1, 2, 4):
            raise ValueError("line SAM supports 1, 2 or 4 banks")
        if self.factories < 0:
            raise ValueError("factory count must be >= 0")
        f = Fraction(self.hybrid_fraction).limit_denominator(10**6)
        if not 0 <= f <= 1:
            raise ValueError("hybrid fraction must lie in [0, 1]")
        object.__setattr__(self, "hybrid_fraction", f)

    @property
    def buffer(self) -> int:
        return 2 * self.factories if self.buffer_capacity is None else self.buffer_capacity


@dataclass(frozen=True)
class BankGeometry:
    """One SAM bank as left-justified rows of cells.

    Row lengths never increase downwards, so only the bottom rows can be
    short; their cells sit next to the CR.  Line banks are rectangles with
    one of their rows acting as the scan row.
    """

    kind: str
    index: int
    row_lengths: tuple[int, ...]

    @property
    def rows(self) -> int:
        return len(self.row_lengths)

    @property
    def width(self) -> int:
        return self.row_lengths[0] if self.row_lengths else 0

    @property
    def last_row(self) -> int:
        return self.row_lengths[-1] if self.row_lengths else 0

    @property
    def is_rect(self) -> bool:
        return len(set(self.row_lengths)) <= 1

    @property
    def cells(self) -> int:
        return sum(self.row_lengths)

    @property
    def data_capacity(self) -> int:
        if not self.row_lengths:
            return 0
        if self.kind == POINT:
            return self.cells - 1
        return self.cells - self.width

    @property
    def center_row(self) -> int:
        return self.rows // 2

    def row_len(self, r: int) -> int:
        return self.row_lengths[r]

    def contains(self, cell: Cell) -> bool:
        r, x = cell
        return 0 <= r < len(self.row_lengths) and 0 <= x < self.row_lengths[r]

    def all_cells(self) -> list[Cell]:
        return [(r, x) for r, n in enumerate(self.row_lengths) for x in range(n)]

    def port_cells(self) -> list[Cell]:
        """Cells next to the CR a point-SAM qubit can leave from, centre row first."""
        rc = self.center_row
        return [(r, 0) for r in (rc, rc - 1, rc + 1) if 0 <= r < self.rows]

    def neighbors(self, cell: Cell) -> tuple[Cell, ...]:
        return _neighbors(self.row_lengths, cell)


@lru_cache(maxsize=1 << 16)
def _neighbors(row_lengths: tuple[int, ...], cell: Cell) -> tuple[Cell, ...]:
    r, x = cell
    out = ((r - 1, x), (r + 1, x), (r, x - 1), (r, x + 1))
    return tuple((a, b) for a, b in out if 0 <= a < len(row_lengths) and 0 <= b < row_lengths[a])


def _point_rows(cells: int) -> tuple[int, ...]:
    if cells <= 2:
        return (cells,)
    width = math.isqrt(cells - 1) + 1
    full, rest = divmod(cells, width)
    rows = [width] * full + ([rest] if rest else [])
    if len(rows) == 2 and rows[1] < rows[0] and width > 2:
        # 5 cells: a 3+2 bank strands the far corner; use 2+2+1 instead
        rows = [2, 2, 1]
    elif len(rows) >= 7 and rows[-1] == 1:
        # a lone bottom cell is a dead end that can trap the scan cell
        rows[-2] -= 1
        rows[-1] = 2
    return tuple(rows)


def point_bank(index: int, data: int) -> BankGeometry:
    return BankGeometry(POINT, index, _point_rows(data + 1))


def _line_shape(data: int) -> tuple[int, int]:
    """(data rows, width) minimising bank + CR cells for ``data`` qubits."""
    if data <= 0:
        return 0, 0
    L = math.isqrt(data - 1) + 1  # smallest L with L*L >= data
    options = [(L, L)]
    k = math.isqrt(data)
    while k * (k + 1) < data:
        k += 1
    options.append((k, k + 1))
    # cells = (rows+1)*width + 2*(rows+1)
    return min(options, key=lambda s: ((s[0] + 1) * (s[1] + 2), s))


def line_bank(index: int, data: int) -> BankGeometry:
    rows, width = _line_shape(data)
    return BankGeometry(LINE, index, (width,) * (rows + 1) if rows else ())


@dataclass(frozen=True)
class Layout:
    config: LayoutConfig
    qubit_count: int
    banks: tuple[BankGeometry, ...]
    cr_cells: int
    conventional_qubits: int
    register_cells: int = REGISTER_CELLS

    @property
    def conventional_cells(self) -> int:
        return 2 * self.conventional_qubits

    @property
    def sam_cells(self) -> int:
        return sum(b.cells for b in self.banks)

    @property
    def total_cells(self) -> int:
        return self.sam_cells + self.cr_cells + self.conventional_cells

    @property
    def data_capacity(self) -> int:
        return sum(b.data_capacity for b in self.banks) + self.conventional_qubits

    @property
    def sam_kind(self) -> str:
        return self.config.sam_kind

    def dump(self) -> str:
        lines = [
            f"sam_kind {self.sam_kind}",
            f"qubits {self.qubit_count}",
            f"total_cells {self.total_cells}",
            f"cr_cells {self.cr_cells}",
            f"conventional_cells {self.conventional_cells}",
        ]
        for b in self.banks:
            lines.append(
                f"bank {b.index} kind={b.kind} rows={b.rows} width={b.width} "
                f"cells={b.cells} capacity={b.data_capacity}"
            )
            lines.extend("  " + _render_bank_row(b, r) for r in range(b.rows))
        return "\n".join(lines) + "\n"


def _render_bank_row(b: BankGeometry, r: int) -> str:
    # CR sits to the left in the dump; x = 0 is the leftmost printed cell
    if b.kind == LINE:
        return ("s" if r == b.center_row else "d") * b.row_len(r)
    return "".join("s" if (r, x) == (b.center_row, 0) else "d" for x in range(b.row_len(r)))


def conventional_count(n: int, f: Union[Fraction, float]) -> int:
    """Number of qubits the hybrid floorplan keeps in the conventional region (round half up)."""
    return math.floor(Fraction(n) * Fraction(f).limit_denominator(10**6) + Fraction(1, 2))


def build_layout(cfg: LayoutConfig, qubit_count: int) -> Layout:
    if qubit_count < 1:
        raise ValueError("qubit_count must be >= 1")
    if cfg.sam_kind == CONVENTIONAL:
        return Layout(cfg, qubit_count, (), 0, qubit_count, register_cells=0)
    n_conv = conventional_count(qubit_count, cfg.hybrid_fraction)
    sam = qubit_count - n_conv
    if sam == 0:
        return Layout(cfg, qubit_count, (), 0, n_conv, register_cells=0)
    per_bank = [sam // cfg.banks + (1 if b < sam % cfg.banks else 0) for b in range(cfg.banks)]
    if cfg.sam_kind == POINT:
        banks = tuple(point_bank(b, d) for b, d in enumerate(per_bank) if d > 0)
        cr = COMPACT_CR_CELLS
    else:
        # all banks share one shape so the stacked CR column stays straight
        shape = line_bank(0, max(per_bank))
        banks = tuple(
            BankGeometry(LINE, b, shape.row_lengths)
            for b, d in enumerate(per_bank)
            if d > 0
        )
        cr = 2 * sum(b.rows for b in banks)
    return Layout(cfg, qubit_count, banks, cr, n_conv)


def memory_density(layout: Layout, used_qubits: Optional[int] = None) -> Fraction:
    """Qubits over SAM + CR + conventional cells (factories excluded)."""
    used = layout.qubit_count if used_qubits is None else used_qubits
    if used > layout.data_capacity:
        raise ValueError("more qubits than the layout holds")
    if used == 0:
        return Fraction(0)
    return Fraction(used, layout.total_cells)


CONV = -1  # bank id of the conventional region


@dataclass
class QubitMap:
    location: dict[int, tuple[int, Optional[Cell]]] = field(default_factory=dict)

    def bank_of(self, q: int) -> int:
        return self.location[q][0]

    def cell_of(self, q: int) -> Optional[Cell]:
        return self.location[q][1]

    def occupancy(self) -> dict[tuple[int, Cell], int]:
        out = {}
        for q, (b, cell) in self.location.items():
            if b != CONV and cell is not None:
                if (b, cell) in out:
                    raise ValueError(f"cell {cell} of bank {b} holds two qubits")
                out[(b, cell)] = q
        return out

    def copy(self) -> "QubitMap":
        return QubitMap(dict(self.location))


def fill_order(b: BankGeometry) -> list[Cell]:
    """Data cells of a fresh bank, nearest to the CR port first."""
    if b.kind == POINT:
        scan = (b.center_row, 0)
        cells = [c for c in b.all_cells() if c != scan]
        return sorted(cells, key=lambda c: (abs(c[0] - scan[0]) + c[1], c[0], c[1]))
    rc = b.center_row
    cells = [c for c in b.all_cells() if c[0] != rc]
    return sorted(cells, key=lambda c: (abs(c[0] - rc), c[0], c[1]))


def assign_initial(
    layout: Layout, qubit_count: Optional[int] = None, hotness: Optional[Sequence[int]] = None
) -> QubitMap:
    """Place variables 0..n-1.

    The ``conventional_qubits`` hottest variables (by ``hotness`` order, or
    the lowest indices without one) go to the conventional region; the rest
    are dealt round-robin over banks in index order.
    """
    n = layout.qubit_count if qubit_count is None else qubit_count
    if n > layout.data_capacity:
        raise ValueError(f"{n} qubits exceed layout capacity {layout.data_capacity}")
    k = layout.conventional_qubits
    order = list(hotness) if hotness is not None else list(range(n))
    if sorted(order) != list(range(n)):
        raise ValueError("hotness must be a permutation of the variables")
    conv = set(order[:k])
    qmap = QubitMap()
    for q in sorted(conv):
        qmap.location[q] = (CONV, None)
    rest = [q for q in range(n) if q not in conv]
    slots = [iter(fill_order(b)) for b in layout.banks]
    for i, q in enumerate(rest):
        bank = i % len(layout.banks)
        qmap.location[q] = (bank, next(slots[bank]))
    return qmap
