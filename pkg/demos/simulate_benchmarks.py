"""Execution-time overhead of point and line SAM against the conventional floorplan."""

from lsqca.analysis import geomean_overhead
from lsqca.floorplan import LINE, POINT, LayoutConfig, build_layout, memory_density
from lsqca.frontend import compile_circuit, gen_builtin
from lsqca.sim import run, run_baseline

BENCH = [("ghz", 32), ("cat", 32), ("bv", 31), ("adder", 4), ("select", 3)]

for kind in (POINT, LINE):
    over = []
    print(f"{kind} SAM, 1 bank, 1 factory")
    for name, size in BENCH:
        c = gen_builtin(name, size)
        prog = compile_circuit(c)
        lay = build_layout(LayoutConfig(kind), c.qubit_count)
        r = run(prog, lay)
        b = run_baseline(prog, c.qubit_count)
        over.append(r.total_beats / b.total_beats - 1)
        print(
            f"  {name + str(size):<9} beats {r.total_beats:6d} baseline {b.total_beats:6d} "
            f"overhead {over[-1]:7.3f} density {float(memory_density(lay)):.3f}"
        )
    print(f"  GEOMEAN overhead {geomean_overhead(over):.3f}\n")
