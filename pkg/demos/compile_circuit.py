"""Lower a small QASM circuit to Clifford+T and compile it to assembly."""

from lsqca.frontend import compile_circuit, lower_to_clifford_t, parse_gate_circuit
from lsqca.isa import render_program

QASM = """
OPENQASM 2.0;
qreg q[3];
creg c[3];
h q[0];
cx q[0],q[1];
ccx q[0],q[1],q[2];
measure q -> c;
"""

circ = parse_gate_circuit(QASM)
low = lower_to_clifford_t(circ)
print(f"{len(circ.gates)} gates, {circ.toffoli_count} Toffoli -> {len(low.gates)} gates, T count {low.t_count}")

prog = compile_circuit(circ)
print(f"{len(prog)} instructions, {prog.count('PM')} magic-state requests\n")
print(render_program(prog))
