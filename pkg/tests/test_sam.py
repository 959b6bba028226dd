import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from lsqca.floorplan import LINE, POINT, BankGeometry, LayoutConfig, assign_initial, build_layout, line_bank, point_bank
from lsqca.sam import (
    LOCALITY_AWARE,
    REVERSE,
    LineBank,
    PointBank,
    SamError,
    SamState,
    in_memory_access,
    in_memory_cost,
    load,
    load_cost,
    store,
    store_cost,
)
from lsqca.sam import point
from lsqca.sam.oracle import line_oracle, oracle_load_cost, point_oracle, replay

from sam_cases import closed_form, mismatches, point_shapes, rectangles


def _state(kind, n, banks=1, f=0):
    lay = build_layout(LayoutConfig(kind, banks, hybrid_fraction=f), n)
    return SamState.create(lay, assign_initial(lay, n))


# -- closed form against the move-search oracle --------------------------------


def test_rectangles_up_to_four_exhaustive():
    n, bad = mismatches(rectangles(4))
    assert n > 1000 and bad == []


def test_irregular_shapes_exhaustive():
    n, bad = mismatches(point_shapes(1, 20))
    assert bad == []


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 7), st.integers(2, 7), st.data())
def test_random_rectangle_occupancy(h, w, data):
    g = BankGeometry(POINT, 0, (w,) * h)
    cells = g.all_cells()
    t = data.draw(st.sampled_from(cells))
    others = [c for c in cells if c != t]
    k = data.draw(st.integers(1, 2))
    empties = data.draw(st.lists(st.sampled_from(others), min_size=k, max_size=k, unique=True))
    assert closed_form(g, t, empties) == point_oracle(g, t, empties)


# -- point examples -------------------------------------------------------------


def test_port_cell_costs_the_hop_only():
    g = BankGeometry(POINT, 0, (3, 3, 3))
    assert point.quote_load(g, (1, 0), [(0, 0)]).beats == 1


def test_one_step_with_blank_in_front():
    g = BankGeometry(POINT, 0, (3, 3, 3))
    # blank already in the port cell: one shift plus the hop
    assert point.quote_load(g, (1, 1), [(1, 0)]).beats == 2


def test_single_qubit_bank():
    st_ = _state(POINT, 1)
    assert st_.banks[0].geom.row_lengths == (2,)
    assert st_.pos[0] == (0, 1)
    assert load_cost(st_, 0) == 2


def test_hd_in_memory_corner():
    st_ = _state(POINT, 8)
    assert st_.pos[7] == (2, 2)
    assert in_memory_cost(st_, 7, "HD") == 5


# -- line examples --------------------------------------------------------------


def test_line_adjacent_and_far_rows():
    st_ = _state(LINE, 16)
    bank = st_.banks[0]
    near = next(q for q, c in st_.pos.items() if abs(c[0] - bank.scan) == 1)
    far = next(q for q, c in st_.pos.items() if abs(c[0] - bank.scan) == 2)
    assert load_cost(st_, near) == 1
    assert load_cost(st_, far) == 2
    assert line_oracle(bank, st_.pos[far]) == 2


def test_line_row_reuse_costs_one():
    st_ = _state(LINE, 16)
    bank = st_.banks[0]
    row = [q for q, c in st_.pos.items() if abs(c[0] - bank.scan) == 2]
    assert load(st_, row[0]).beats == 2
    assert load_cost(st_, row[1]) == 1


def test_line_in_memory_hd():
    st_ = _state(LINE, 16)
    q = next(q for q, c in st_.pos.items() if abs(c[0] - st_.banks[0].scan) == 1)
    assert in_memory_cost(st_, q, "HD") == 3
    assert in_memory_cost(st_, q, "MZ") == 0


def test_line_store_joins_partner_row():
    st_ = _state(LINE, 16)
    bank = st_.banks[0]
    a, b = 0, 15
    load(st_, a)
    store(st_, a, LOCALITY_AWARE, partner=b)
    assert st_.pos[a][0] == st_.pos[b][0]


# -- stores and locality ------------------------------------------------------


def test_point_store_lands_next_to_port():
    st_ = _state(POINT, 24)
    far = max(st_.pos, key=lambda q: load_cost(st_, q))
    first = load_cost(st_, far)
    load(st_, far)
    store(st_, far, LOCALITY_AWARE)
    second = load_cost(st_, far)
    load(st_, far)
    store(st_, far, LOCALITY_AWARE)
    third = load_cost(st_, far)
    assert first >= second >= third
    assert third <= min(load_cost(st_, q) for q in st_.pos) + 6


def test_reverse_store_undoes_load():
    st_ = _state(POINT, 15)
    before = dict(st_.banks[0].cells)
    c = load(st_, 14)
    back = store(st_, 14, REVERSE)
    assert back.beats == c.beats
    assert st_.banks[0].cells == before


def test_store_of_unloaded_variable_fails():
    st_ = _state(POINT, 4)
    with pytest.raises(SamError):
        store(st_, 0)
    with pytest.raises(ValueError):
        store(st_, 0, "sideways")


# -- worst case ------------------------------------------------------------------


@pytest.mark.parametrize("n", [16, 64, 256])
def test_worst_case_bounds(n):
    p = _state(POINT, n)
    assert max(load_cost(p, q) for q in range(n)) <= 7 * math.sqrt(n) + 12
    l = _state(LINE, n)
    assert max(load_cost(l, q) for q in range(n)) <= 0.5 * math.sqrt(n) + 2


# -- random operation sequences ---------------------------------------------------


def _random_walk(kind, nq, banks, f, seed, steps=250):
    rng = random.Random(seed)
    st_ = _state(kind, nq, banks, f)
    for _ in range(steps):
        loaded = list(st_.out)
        if loaded and (rng.random() < 0.5 or len(loaded) >= 2):
            q = rng.choice(loaded)
            pol = rng.choice([LOCALITY_AWARE, REVERSE])
            partner = rng.choice([None] + sorted(st_.pos))
            b = st_.out[q].bank
            before = dict(st_.banks[b].cells) if b >= 0 else None
            quoted = store_cost(st_, q, pol, partner)
            c = store(st_, q, pol, partner)
            assert c.beats == quoted
            if b >= 0 and isinstance(st_.banks[b], PointBank):
                after, _ = replay(st_.banks[b].geom, before, c.path, incoming=q)
                assert after == st_.banks[b].cells
        else:
            q = rng.choice([p for p in range(nq) if p not in st_.out])
            b = st_.home[q]
            before = dict(st_.banks[b].cells) if b >= 0 else None
            if rng.random() < 0.5:
                quoted = load_cost(st_, q)
                if b >= 0:
                    assert quoted == oracle_load_cost(st_, q)
                c = load(st_, q)
                assert c.beats == quoted
                if b >= 0 and isinstance(st_.banks[b], PointBank):
                    after, left = replay(st_.banks[b].geom, before, c.path)
                    assert left == q and after == st_.banks[b].cells
            else:
                op = rng.choice(["HD", "PH", "MZZ", "MXX", "MZ"])
                quoted = in_memory_cost(st_, q, op)
                c = in_memory_access(st_, q, op)
                assert c.beats == quoted
                if b >= 0 and isinstance(st_.banks[b], PointBank):
                    after, _ = replay(st_.banks[b].geom, before, c.path)
                    assert after == st_.banks[b].cells
        st_.check()


@pytest.mark.parametrize(
    "kind, nq, banks, f",
    [(POINT, 3, 1, 0), (POINT, 20, 2, 0), (POINT, 47, 1, 0.25), (LINE, 8, 1, 0), (LINE, 20, 4, 0), (LINE, 64, 2, 0.25)],
)
def test_random_sequences_stay_consistent(kind, nq, banks, f):
    _random_walk(kind, nq, banks, f, seed=nq * 7 + banks)


def test_replay_rejects_illegal_moves():
    g = BankGeometry(POINT, 0, (2, 2))
    cells = {c: i for i, c in enumerate(g.all_cells())}
    cells[(0, 0)] = None
    with pytest.raises(SamError):
        replay(g, cells, [(((1, 1), (0, 0)),)])  # diagonal
    with pytest.raises(SamError):
        replay(g, cells, [(((0, 1), (1, 1)),)])  # occupied
    with pytest.raises(SamError):
        replay(g, cells, [(((1, 1), None),)])  # not a port cell
