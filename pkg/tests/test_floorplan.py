from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lsqca.floorplan import (
    CONV,
    LINE,
    POINT,
    LayoutConfig,
    assign_initial,
    build_layout,
    conventional_count,
    fill_order,
    line_bank,
    memory_density,
    point_bank,
)


def test_point_48():
    lay = build_layout(LayoutConfig(POINT), 48)
    assert lay.total_cells == 55
    assert memory_density(lay) == Fraction(48, 55)


def test_line_400():
    lay = build_layout(LayoutConfig(LINE), 400)
    assert lay.total_cells == 462
    assert memory_density(lay) == Fraction(400, 462)


def test_point_400():
    assert memory_density(build_layout(LayoutConfig(POINT), 400)) == Fraction(400, 407)


def test_conventional_400():
    lay = build_layout(LayoutConfig("conventional"), 400)
    assert lay.total_cells == 800
    assert memory_density(lay) == Fraction(1, 2)


@pytest.mark.parametrize("L", range(2, 41))
def test_line_square_identity(L):
    assert build_layout(LayoutConfig(LINE), L * L).total_cells == (L + 1) * (L + 2)


def test_line_density_approaches_one():
    assert memory_density(build_layout(LayoutConfig(LINE), 10**6)) > Fraction(99, 100)


@given(st.integers(1, 3000))
def test_point_bank_holds_data(n):
    b = point_bank(0, n)
    assert b.data_capacity == n
    assert list(b.row_lengths) == sorted(b.row_lengths, reverse=True)


@given(st.integers(1, 3000))
def test_line_bank_holds_data(n):
    b = line_bank(0, n)
    assert b.data_capacity >= n
    assert b.is_rect


@given(st.sampled_from([(POINT, 1), (POINT, 2), (LINE, 1), (LINE, 2), (LINE, 4)]), st.integers(1, 500))
def test_capacity_covers_qubits(kind_banks, n):
    kind, banks = kind_banks
    lay = build_layout(LayoutConfig(kind, banks), n)
    assert lay.data_capacity >= n
    assert len(lay.banks) <= banks


def _curve(kind, n):
    lays = [build_layout(LayoutConfig(kind, hybrid_fraction=Fraction(k, 20)), n) for k in range(21)]
    return lays, [memory_density(l) for l in lays]


@pytest.mark.parametrize("n", [2, 10, 48, 64, 255, 400])
def test_point_hybrid_density_non_increasing(n):
    lays, dens = _curve(POINT, n)
    sam = [k for k in range(21) if lays[k].banks]
    assert all(dens[a] >= dens[b] for a, b in zip(sam, sam[1:]))
    # once the SAM is gone the CR goes with it and density lands on one half
    assert all(dens[k] == Fraction(1, 2) for k in range(21) if not lays[k].banks)


@pytest.mark.parametrize("n", [10, 64, 100, 400])
def test_line_hybrid_density_only_rises_at_shape_steps(n):
    lays, dens = _curve(LINE, n)
    for a in range(20):
        if not lays[a + 1].banks:
            continue
        if lays[a].banks[0].row_lengths == lays[a + 1].banks[0].row_lengths:
            assert dens[a] >= dens[a + 1]
    assert dens[20] == Fraction(1, 2)


def test_line_hybrid_density_at_400_is_monotone():
    lays, dens = _curve(LINE, 400)
    assert all(a >= b for a, b in zip(dens[:20], dens[1:20]))


def test_conventional_count_rounding():
    assert conventional_count(10, Fraction(1, 20)) == 1  # 0.5 rounds up
    assert conventional_count(10, 0) == 0
    assert conventional_count(10, 1) == 10


def test_round_robin_over_banks():
    lay = build_layout(LayoutConfig(LINE, banks=2), 10)
    qm = assign_initial(lay)
    assert [qm.bank_of(q) for q in range(10)] == [0, 1] * 5
    qm.occupancy()


def test_hotness_fills_conventional_region():
    lay = build_layout(LayoutConfig(POINT, hybrid_fraction=Fraction(1, 4)), 8)
    qm = assign_initial(lay, hotness=[7, 6, 0, 1, 2, 3, 4, 5])
    assert {q for q in range(8) if qm.bank_of(q) == CONV} == {7, 6}


def test_fill_order_starts_next_to_port():
    b = point_bank(0, 8)
    assert fill_order(b)[0] in {(b.center_row, 1), (b.center_row - 1, 0), (b.center_row + 1, 0)}
    lb = line_bank(0, 9)
    assert abs(fill_order(lb)[0][0] - lb.center_row) == 1


@pytest.mark.parametrize(
    "kwargs",
    [dict(sam_kind="disk"), dict(sam_kind=POINT, banks=3), dict(sam_kind=LINE, banks=3), dict(factories=-1), dict(hybrid_fraction=2)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        LayoutConfig(**kwargs)


def test_over_capacity_rejected():
    lay = build_layout(LayoutConfig(POINT), 4)
    with pytest.raises(ValueError):
        assign_initial(lay, 5)


def test_dump_mentions_every_bank():
    lay = build_layout(LayoutConfig(LINE, banks=4), 40)
    text = lay.dump()
    assert text.count("bank ") == 4 and "total_cells" in text
