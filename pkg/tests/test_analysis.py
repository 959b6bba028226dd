from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lsqca.analysis import (
    F_GRID,
    ReferenceTrace,
    cdf_csv,
    geomean_overhead,
    hotness_rank,
    median_period,
    period_cdf,
    reference_trace,
    refs_csv,
    sweep_hybrid,
)
from lsqca.floorplan import LINE, POINT, LayoutConfig
from lsqca.frontend import compile_circuit, gen_builtin
from lsqca import analysis
from lsqca.sim import DeadlockError, SimulationError, run_baseline


def test_cdf_steps():
    t = ReferenceTrace({0: [0, 2, 4], 1: [1, 9]})
    assert period_cdf(t) == [(2, Fraction(2, 3)), (8, Fraction(1))]
    assert median_period(t) == 2


def test_uniform_trace_is_one_step():
    t = ReferenceTrace({q: [0, 5, 10] for q in range(4)})
    assert period_cdf(t) == [(5, Fraction(1))]


def test_empty_trace():
    assert period_cdf(ReferenceTrace()) == []
    assert median_period(ReferenceTrace()) is None


@given(st.dictionaries(st.integers(0, 20), st.lists(st.integers(0, 500), max_size=20)))
def test_cdf_is_monotone_and_ends_at_one(refs):
    t = ReferenceTrace({q: sorted(v) for q, v in refs.items()})
    cdf = period_cdf(t)
    if cdf:
        assert cdf[-1][1] == 1
        assert all(a[0] < b[0] and a[1] < b[1] for a, b in zip(cdf, cdf[1:]))


@given(st.dictionaries(st.integers(0, 20), st.lists(st.integers(0, 50), max_size=8)))
def test_hotness_is_a_permutation(refs):
    t = ReferenceTrace(refs)
    order = hotness_rank(t, 21)
    assert sorted(order) == list(range(21))
    counts = [len(refs.get(q, [])) for q in order]
    assert counts == sorted(counts, reverse=True)


def test_hotness_ties_by_index():
    assert hotness_rank(ReferenceTrace({2: [1], 0: [1], 1: [1, 2]})) == [1, 0, 2]


def test_ghz3_reference_counts():
    r = run_baseline(compile_circuit(gen_builtin("ghz", 3)))
    t = reference_trace(r)
    # M1: CX as target, CX as control, MZ
    assert t.counts() == {0: 3, 1: 3, 2: 2}
    assert t.refs[1] == [3, 5, 7]


def test_same_beat_references_collapse():
    from lsqca.isa import parse_program

    r = run_baseline(parse_program("MZ.M M0 V0\nSK V0\nPH.M M0\n"))
    assert r.per_qubit_refs[0] == [0, 0]
    t = reference_trace(r)
    assert t.refs[0] == [0] and t.all_periods() == []


def test_magic_intervals_follow_factory_rate():
    c = gen_builtin("adder", 2)
    t = reference_trace(run_baseline(compile_circuit(c), c.qubit_count))
    assert t.mean_magic_interval() == pytest.approx(15, abs=0.5)


def test_geomean():
    assert geomean_overhead([0, 0, 0]) == pytest.approx(0)
    assert geomean_overhead([0.1]) == pytest.approx(0.1)
    assert geomean_overhead([0.06, 0.07]) == pytest.approx(0.065, abs=1e-3)
    with pytest.raises(ValueError):
        geomean_overhead([])
    with pytest.raises(ValueError):
        geomean_overhead([-1])


@pytest.mark.parametrize("kind", [POINT, LINE])
def test_sweep_endpoints(kind):
    c = gen_builtin("ghz", 12)
    curve = sweep_hybrid(compile_circuit(c), LayoutConfig(kind), c.qubit_count, name="ghz12")
    assert len(curve.points) == 21 == len(F_GRID)
    assert curve.points[-1].overhead == 0
    assert curve.points[-1].density == Fraction(1, 2)
    assert all(p.overhead >= 0 for p in curve.points)
    lines = curve.csv().splitlines()
    assert lines[0] == "f,density,overhead" and len(lines) == 22
    assert lines[-1].startswith("1.00,0.500000,0.000000")


def test_sweep_parallel_matches_serial():
    c = gen_builtin("bv", 8)
    prog = compile_circuit(c)
    grid = F_GRID[::5]
    a = sweep_hybrid(prog, LayoutConfig(LINE), c.qubit_count, grid)
    b = sweep_hybrid(prog, LayoutConfig(LINE), c.qubit_count, grid, jobs=2)
    assert a.csv() == b.csv()


def test_sweep_profiling_failure_propagates():
    c = gen_builtin("adder", 1)
    with pytest.raises(DeadlockError):
        sweep_hybrid(compile_circuit(c), LayoutConfig(LINE, factories=0), c.qubit_count, F_GRID[:2])


def test_sweep_marks_failed_points(monkeypatch):
    real = analysis.run

    def flaky(program, layout, qmap=None, options=None):
        if layout.config.hybrid_fraction == Fraction(1, 20):
            raise SimulationError("injected")
        return real(program, layout, qmap, options)

    monkeypatch.setattr(analysis, "run", flaky)
    c = gen_builtin("ghz", 4)
    curve = sweep_hybrid(compile_circuit(c), LayoutConfig(LINE), c.qubit_count, F_GRID[:3])
    assert [p.failed for p in curve.points] == [False, True, False]
    assert curve.points[1].error == "injected"
    assert curve.csv().splitlines()[2].endswith(",")


def test_csv_headers():
    t = ReferenceTrace({0: [1, 4]})
    assert refs_csv(t) == "qubit,beat\n0,1\n0,4\n"
    assert cdf_csv(period_cdf(t)) == "period,cdf\n3,1.000000\n"
