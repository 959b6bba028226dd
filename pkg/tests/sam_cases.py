"""Shared case generators for point-SAM oracle comparisons."""

import itertools

from lsqca.floorplan import POINT, BankGeometry, point_bank
from lsqca.sam import point
from lsqca.sam.oracle import point_oracle


def rectangles(max_side=6):
    for h in range(2, max_side + 1):
        for w in range(2, max_side + 1):
            yield BankGeometry(POINT, 0, (w,) * h)


def occupancies(geom, sizes=(1, 2)):
    cells = geom.all_cells()
    for t in cells:
        others = [c for c in cells if c != t]
        for k in sizes:
            for empties in itertools.combinations(others, k):
                yield t, empties


def closed_form(geom, target, empties):
    try:
        return point.quote_load(geom, target, list(empties)).beats
    except point.SamError:
        return float("inf")


def mismatches(geoms):
    """(cases checked, list of disagreements)."""
    n, bad = 0, []
    for g in geoms:
        for t, empties in occupancies(g):
            n += 1
            a, b = closed_form(g, t, empties), point_oracle(g, t, empties)
            if a != b:
                bad.append((g.row_lengths, t, empties, a, b))
    return n, bad


def point_shapes(lo, hi):
    return [point_bank(0, d) for d in range(lo, hi + 1)]
