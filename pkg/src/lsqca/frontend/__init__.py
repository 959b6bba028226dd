"""Circuit ingestion, generation, lowering and compilation to LSQCA programs."""

from .circuit import (
    CircuitParseError,
    Gate,
    GateCircuit,
    parse_gate_circuit,
    render_native,
    render_qasm,
)
from .compiler import CompileError, CompilePolicy, compile_to_lsqca
from .generators import BUILTINS, gen_builtin, gen_select, heisenberg_terms
from .lowering import lower_to_clifford_t, toffoli_clifford_t


def compile_circuit(circuit: GateCircuit, policy: CompilePolicy = CompilePolicy()):
    """Lower to Clifford+T and compile in one step."""
    return compile_to_lsqca(lower_to_clifford_t(circuit), policy)


__all__ = [
    "BUILTINS",
    "CircuitParseError",
    "CompileError",
    "CompilePolicy",
    "Gate",
    "GateCircuit",
    "compile_circuit",
    "compile_to_lsqca",
    "gen_builtin",
    "gen_select",
    "heisenberg_terms",
    "lower_to_clifford_t",
    "parse_gate_circuit",
    "render_native",
    "render_qasm",
    "toffoli_clifford_t",
]
