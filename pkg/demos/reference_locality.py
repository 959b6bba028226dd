"""Reference pattern of the SELECT circuit by register."""

import statistics

from lsqca.analysis import period_cdf, reference_trace
from lsqca.frontend import compile_circuit, gen_builtin
from lsqca.sim import run_baseline

c = gen_builtin("select", 3)
prog = compile_circuit(c)
pm = prog.count("PM")
# conventional floorplan with magic states always on hand
trace = reference_trace(run_baseline(prog, c.qubit_count, factories=pm, buffer_capacity=pm, warm_start=True))

for reg in ("control", "temporal", "system"):
    qs = [q for q, r in c.registers.items() if r == reg]
    ps = trace.all_periods(qs)
    refs = statistics.fmean(len(trace.refs.get(q, [])) for q in qs)
    cdf = period_cdf(trace, qs)
    at4 = max((float(f) for p, f in cdf if p <= 4), default=0.0)
    print(
        f"{reg:8s} qubits {len(qs):3d} refs/qubit {refs:7.1f} "
        f"median period {statistics.median(ps):5.1f} mean {statistics.fmean(ps):7.1f} P(period<=4) {at4:.2f}"
    )
