"""Magic-state supply against T-gate demand on the adder."""

from lsqca.analysis import reference_trace
from lsqca.frontend import compile_circuit, gen_builtin
from lsqca.msf import MsfState
from lsqca.sim import run_baseline

m = MsfState.create(1)
for _ in range(1500):
    m.tick()
    m.request_magic()
print(f"1 factory, greedy consumer: {m.granted} states in 1500 beats")

c = gen_builtin("adder", 4)
prog = compile_circuit(c)
for f in (1, 2, 4, 8):
    r = run_baseline(prog, c.qubit_count, factories=f)
    gap = reference_trace(r).mean_magic_interval()
    print(f"adder4, {f} factories: {r.total_beats:5d} beats, mean gap between PM issues {gap:.2f}")
