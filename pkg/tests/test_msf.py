import pytest
from hypothesis import given, strategies as st

from lsqca.msf import PERIOD, MsfState


def test_first_state_at_period():
    m = MsfState.create(1)
    m.advance_to(PERIOD - 1)
    assert m.stock == 0
    m.tick()
    assert m.beat == 15 and m.stock == 1


def test_buffer_saturates():
    m = MsfState.create(1).advance_to(10 * PERIOD)
    assert m.stock == 2 and m.discarded == 8 and m.produced == 2


def test_drain_every_beat_rate():
    m = MsfState.create(1)
    for _ in range(1500):
        m.tick()
        m.request_magic()
    assert abs(m.granted - 100) <= 1


def test_no_factories_never_delivers():
    m = MsfState.create(0)
    assert m.next_delivery() is None
    m.advance_to(1000)
    assert not m.request_magic()


def test_warm_start():
    m = MsfState.create(3, warm_start=True)
    assert m.stock == 6
    assert MsfState.create(3, buffer_capacity=1, warm_start=True).stock == 1


@given(st.integers(0, 4), st.integers(0, 6), st.lists(st.integers(1, 40), max_size=30))
def test_conservation_and_jump_equivalence(f, cap, gaps):
    a = MsfState.create(f, cap)
    b = MsfState.create(f, cap)
    for g in gaps:
        a.advance_to(a.beat + g)
        for _ in range(g):
            b.tick()
        assert (a.stock, a.phase, a.beat) == (b.stock, b.phase, b.beat)
        a.request_magic()
        b.request_magic()
        assert a.produced + a.discarded == f * (a.beat // PERIOD)
        assert a.stock == a.produced - a.granted
        assert 0 <= a.stock <= cap


def test_clock_cannot_go_back():
    m = MsfState.create(1).advance_to(5)
    with pytest.raises(ValueError):
        m.advance_to(4)
