"""Density against overhead as the hottest qubits move to the conventional region."""

from lsqca.analysis import sweep_hybrid
from lsqca.floorplan import POINT, LayoutConfig
from lsqca.frontend import compile_circuit, gen_builtin

c = gen_builtin("ghz", 16)
curve = sweep_hybrid(compile_circuit(c), LayoutConfig(POINT), c.qubit_count, name="ghz16")
print(f"baseline {curve.baseline_beats} beats")
print(curve.csv())
