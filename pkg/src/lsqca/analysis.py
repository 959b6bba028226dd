"""Reference-trace statistics, hotness ranking, hybrid sweeps and overhead aggregation."""

from __future__ import annotations

import csv
import io
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .floorplan import LayoutConfig, assign_initial, build_layout, memory_density
from .isa import Program
from .sim import RunResult, SimOptions, SimulationError, run, run_baseline

F_GRID = tuple(Fraction(k, 20) for k in range(21))


@dataclass
class ReferenceTrace:
    refs: dict[int, list[int]] = field(default_factory=dict)  # qubit -> sorted issue beats
    magic: list[int] = field(default_factory=list)  # PM issue beats

    def periods(self, q: int) -> list[int]:
        beats = self.refs.get(q, [])
        return [b - a for a, b in zip(beats, beats[1:])]

    def all_periods(self, qubits: Optional[Iterable[int]] = None) -> list[int]:
        qs = self.refs if qubits is None else qubits
        return [p for q in qs for p in self.periods(q)]

    def counts(self) -> dict[int, int]:
        return {q: len(v) for q, v in self.refs.items()}

    def magic_intervals(self) -> list[int]:
        return [b - a for a, b in zip(self.magic, self.magic[1:])]

    def mean_magic_interval(self) -> Optional[float]:
        iv = self.magic_intervals()
        return statistics.fmean(iv) if iv else None


def reference_trace(result: RunResult) -> ReferenceTrace:
    """One timestamp per beat a variable is named by an issuing instruction.

    Several zero-latency instructions touching a variable in the same beat
    count as one reference, so every period is positive.
    """
    return ReferenceTrace({q: sorted(set(v)) for q, v in result.per_qubit_refs.items()}, sorted(result.magic_beats))


def period_cdf(trace: ReferenceTrace, qubits: Optional[Iterable[int]] = None) -> list[tuple[int, Fraction]]:
    """Empirical CDF of inter-reference periods as (period, fraction <= period) steps."""
    ps = sorted(trace.all_periods(qubits))
    if not ps:
        return []
    out: list[tuple[int, Fraction]] = []
    for i, p in enumerate(ps, start=1):
        if out and out[-1][0] == p:
            out[-1] = (p, Fraction(i, len(ps)))
        else:
            out.append((p, Fraction(i, len(ps))))
    return out


def median_period(trace: ReferenceTrace, qubits: Optional[Iterable[int]] = None) -> Optional[float]:
    ps = trace.all_periods(qubits)
    return statistics.median(ps) if ps else None


def hotness_rank(trace: ReferenceTrace, qubit_count: Optional[int] = None) -> list[int]:
    """Variables by descending reference count, ties by index.

    With ``qubit_count`` the ranking covers 0..n-1 (unreferenced variables last)
    so it can feed :func:`assign_initial`.
    """
    counts = trace.counts()
    qs = set(counts) if qubit_count is None else set(range(qubit_count))
    return sorted(qs, key=lambda q: (-counts.get(q, 0), q))


@dataclass(frozen=True)
class SweepPoint:
    f: Fraction
    density: Fraction
    overhead: Optional[Fraction]
    beats: Optional[int]
    error: str = ""

    @property
    def failed(self) -> bool:
        return bool(self.error)


@dataclass
class SweepCurve:
    name: str
    baseline_beats: int
    points: list[SweepPoint]

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["f", "density", "overhead"])
        for p in self.points:
            over = "" if p.overhead is None else f"{float(p.overhead):.6f}"
            w.writerow([f"{float(p.f):.2f}", f"{float(p.density):.6f}", over])
        return buf.getvalue()


def _overhead(beats: int, base: int) -> Fraction:
    if base == 0:
        return Fraction(0) if beats == 0 else Fraction(beats)
    return Fraction(beats, base) - 1


def _sweep_point(args) -> SweepPoint:
    program, cfg, n, hotness, f, base, opts = args
    layout = build_layout(replace(cfg, hybrid_fraction=f), n)
    density = memory_density(layout)
    try:
        r = run(program, layout, assign_initial(layout, n, hotness), opts)
    except SimulationError as exc:
        return SweepPoint(Fraction(f), density, None, None, str(exc).splitlines()[0])
    return SweepPoint(Fraction(f), density, _overhead(r.total_beats, base), r.total_beats)


def sweep_hybrid(
    program: Program,
    cfg: LayoutConfig,
    qubit_count: Optional[int] = None,
    f_grid: Sequence = F_GRID,
    options: SimOptions = SimOptions(),
    jobs: int = 1,
    name: str = "",
) -> SweepCurve:
    """Run the program at every hybrid fraction in ``f_grid``.

    The hottest variables (counted on the conventional-floorplan run, so the
    ranking does not depend on the layout under test) fill the conventional
    region first.  A point whose run fails is kept with its error.
    """
    n = max(program.memory_span, qubit_count or 0, 1)
    base = run_baseline(program, n, cfg.factories, cfg.buffer_capacity, cfg.warm_start, options)
    hot = hotness_rank(reference_trace(base), n)
    tasks = [(program, cfg, n, hot, Fraction(f).limit_denominator(10**6), base.total_beats, options) for f in f_grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_sweep_point, tasks))
    else:
        points = [_sweep_point(t) for t in tasks]
    return SweepCurve(name, base.total_beats, points)


def geomean_overhead(overheads: Iterable) -> float:
    """Geometric mean of (1 + overhead), minus one."""
    xs = [1 + float(o) for o in overheads]
    if not xs:
        raise ValueError("no overheads to aggregate")
    if any(x <= 0 for x in xs):
        raise ValueError("overheads must exceed -1")
    return statistics.geometric_mean(xs) - 1


def refs_csv(trace: ReferenceTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["qubit", "beat"])
    for q in sorted(trace.refs):
        for b in trace.refs[q]:
            w.writerow([q, b])
    return buf.getvalue()


def cdf_csv(cdf: Sequence[tuple[int, Fraction]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["period", "cdf"])
    for p, frac in cdf:
        w.writerow([p, f"{float(frac):.6f}"])
    return buf.getvalue()
