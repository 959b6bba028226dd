"""Lowering to Clifford+T."""

from __future__ import annotations

from .circuit import CNOT, Gate, GateCircuit, H, T, Tdg


def toffoli_clifford_t(a: int, b: int, t: int) -> list[Gate]:
    """Standard 7-T Toffoli: 7 T/Tdg, 6 CNOT, 2 H."""
    return [
        H(t),
        CNOT(b, t),
        Tdg(t),
        CNOT(a, t),
        T(t),
        CNOT(b, t),
        Tdg(t),
        CNOT(a, t),
        T(b),
        T(t),
        H(t),
        CNOT(a, b),
        T(a),
        Tdg(b),
        CNOT(a, b),
    ]


def lower_to_clifford_t(circuit: GateCircuit) -> GateCircuit:
    out = GateCircuit(circuit.qubit_count, registers=dict(circuit.registers), name=circuit.name)
    for g in circuit.gates:
        if g.name == "Toffoli":
            out.gates.extend(toffoli_clifford_t(*g.qubits))
        else:
            out.gates.append(g)
    return out
