import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lsqca.frontend import (
    CircuitParseError,
    CompileError,
    CompilePolicy,
    Gate,
    GateCircuit,
    compile_circuit,
    compile_to_lsqca,
    gen_builtin,
    gen_select,
    heisenberg_terms,
    lower_to_clifford_t,
    parse_gate_circuit,
    render_native,
    render_qasm,
    toffoli_clifford_t,
)
from lsqca.frontend.circuit import CNOT, H, MeasZ, T, Toffoli
from lsqca.isa import render_program


# -- parsing ------------------------------------------------------------------


def test_qasm_basic():
    c = parse_gate_circuit("OPENQASM 2.0;\nqreg q[2];\nh q[0]; cx q[0],q[1];")
    assert c.qubit_count == 2
    assert c.gates == [H(0), CNOT(0, 1)]


def test_qasm_toffoli_and_measure():
    c = parse_gate_circuit("qreg a[2]; qreg b[1]; creg c[2];\nccx a[0],a[1],b[0];\nmeasure a -> c;")
    assert c.gates == [Toffoli(0, 1, 2), MeasZ(0, 0), MeasZ(1, 1)]


def test_qasm_multiline_statement_and_broadcast():
    c = parse_gate_circuit("qreg q[3];\ncreg c[3];\nh\n q;\nmeasure q -> c;\n")
    assert c.gates[:3] == [H(0), H(1), H(2)]
    assert c.gates[3:] == [MeasZ(i, i) for i in range(3)]


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("qreg q[2];\nrx(0.1) q[0];", 2, "unsupported"),
        ("qreg q[2];\nqreg q[3];", 2, "twice"),
        ("qreg q[2];\n\nh q[5];", 3, "out of range"),
    ],
)
def test_qasm_errors(text, line, fragment):
    with pytest.raises(CircuitParseError) as err:
        parse_gate_circuit(text)
    assert err.value.lineno == line and fragment in str(err.value)


def test_native_round_trip():
    c = gen_select(2)
    back = parse_gate_circuit(render_native(c), "native")
    assert back.gates == c.gates and back.registers == c.registers


def test_qasm_round_trip():
    c = gen_builtin("adder", 3)
    assert parse_gate_circuit(render_qasm(c)).gates == c.gates


# -- generators ---------------------------------------------------------------


def test_ghz3():
    assert gen_builtin("ghz", 3).gates == [H(0), CNOT(0, 1), CNOT(1, 2)] + [MeasZ(i, i) for i in range(3)]


def test_bv_all_ones():
    c = gen_builtin("bv", 4)
    assert [g for g in c.gates if g.name == "CNOT"] == [CNOT(q, 4) for q in range(4)]


@pytest.mark.parametrize("kind", ["ghz", "cat", "bv"])
def test_clifford_benchmarks_have_no_t(kind):
    c = gen_builtin(kind, 10)
    assert c.t_count == 0 and c.toffoli_count == 0


@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_adder_t_count(n):
    c = gen_builtin("adder", n)
    assert c.toffoli_count == 2 * n
    assert lower_to_clifford_t(c).t_count == 7 * c.toffoli_count


def test_select_width_two():
    c = gen_select(2)
    assert len(heisenberg_terms(2)) == 12
    regs = c.registers
    assert sum(1 for r in regs.values() if r == "control") == 4
    assert lower_to_clifford_t(c).t_count == 7 * c.toffoli_count


def test_select_width_eleven_size():
    c = gen_select(11)
    assert sum(1 for r in c.registers.values() if r == "system") == 121
    assert abs(c.qubit_count - 143) <= 14.3


@pytest.mark.parametrize("w", [2, 3, 4])
def test_select_touches_every_site(w):
    c = gen_select(w)
    system = {q for q, r in c.registers.items() if r == "system"}
    touched = {q for g in c.gates for q in g.qubits}
    assert system <= touched


def test_generator_range_checks():
    with pytest.raises(ValueError):
        gen_builtin("ghz", 0)
    with pytest.raises(ValueError):
        gen_builtin("ghz", 2**20)
    with pytest.raises(ValueError):
        gen_select(1)


# -- lowering -----------------------------------------------------------------

_H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
_T = np.diag([1, np.exp(1j * np.pi / 4)])
_ONE = {"H": _H, "T": _T, "Tdg": _T.conj().T}


def _unitary(gates, n=3):
    """Dense unitary; qubit 0 is the most significant bit."""
    u = np.eye(2**n, dtype=complex)
    for g in gates:
        if g.name == "CNOT":
            c, t = g.qubits
            m = np.zeros((2**n, 2**n))
            for s in range(2**n):
                bits = [(s >> (n - 1 - k)) & 1 for k in range(n)]
                if bits[c]:
                    bits[t] ^= 1
                m[sum(b << (n - 1 - k) for k, b in enumerate(bits)), s] = 1
        else:
            ops = [np.eye(2)] * n
            ops[g.qubits[0]] = _ONE[g.name]
            m = ops[0]
            for o in ops[1:]:
                m = np.kron(m, o)
        u = m @ u
    return u


@pytest.mark.parametrize("a, b, t", list(itertools.permutations(range(3))))
def test_toffoli_decomposition_is_exact(a, b, t):
    gates = toffoli_clifford_t(a, b, t)
    assert sum(g.name in ("T", "Tdg") for g in gates) == 7
    assert sum(g.name == "CNOT" for g in gates) == 6
    assert sum(g.name == "H" for g in gates) == 2
    want = np.zeros((8, 8))
    for s in range(8):
        bits = [(s >> (2 - k)) & 1 for k in range(3)]
        if bits[a] and bits[b]:
            bits[t] ^= 1
        want[sum(x << (2 - k) for k, x in enumerate(bits)), s] = 1
    assert np.allclose(_unitary(gates), want, atol=1e-12)


def test_lowering_identity_without_toffoli():
    c = gen_builtin("ghz", 5)
    assert lower_to_clifford_t(c).gates == c.gates


# -- compilation --------------------------------------------------------------


def _asm(circ, policy=CompilePolicy()):
    return render_program(compile_circuit(circ, policy)).splitlines()


def test_t_gate_sequence():
    c = GateCircuit(1, gates=[T(0)])
    assert _asm(c) == ["PM C0", "MZZ.M C0 M0 V0", "MX.C C0 V1", "SK V0", "PH.M M0"]


def test_prep_and_hadamard():
    c = GateCircuit(1, gates=[Gate("PrepZ", (0,)), H(0)])
    assert _asm(c) == ["PZ.M M0", "HD.M M0"]


def test_empty_circuit():
    assert len(compile_circuit(GateCircuit(0))) == 0


def test_cnot_and_measure():
    c = GateCircuit(2, gates=[CNOT(0, 1), MeasZ(1, 0), Gate("CondS", (0,), 0)])
    assert _asm(c) == ["CX M0 M1", "MZ.M M1 V0", "SK V0", "PH.M M0"]


def test_paulis_emit_nothing():
    c = GateCircuit(1, gates=[Gate("X", (0,)), Gate("Y", (0,)), Gate("Z", (0,))])
    assert _asm(c) == []


def test_policy_variants_and_register_pressure():
    c = GateCircuit(2, gates=[H(0), CNOT(0, 1), T(1)])
    manual = _asm(c, CompilePolicy(False, False, False))
    assert manual[:3] == ["LD M0 C0", "HD.C C0", "ST C0 M0"]
    assert "CX" not in " ".join(manual)
    with pytest.raises(CompileError):
        compile_to_lsqca(c, CompilePolicy(cx_as_instruction=False, registers=1))


def test_cond_s_before_measure_is_rejected():
    with pytest.raises(CompileError):
        compile_circuit(GateCircuit(1, gates=[Gate("CondS", (0,), 3)]))


@pytest.mark.parametrize("kind", ["ghz", "cat", "bv"])
def test_clifford_benchmarks_emit_no_pm(kind):
    assert compile_circuit(gen_builtin(kind, 12)).count("PM") == 0


gate_names = st.sampled_from(["H", "S", "Sdg", "T", "Tdg", "X", "CNOT", "Toffoli"])


@st.composite
def circuits(draw):
    n = draw(st.integers(3, 6))
    c = GateCircuit(n)
    for name in draw(st.lists(gate_names, max_size=30)):
        k = {"CNOT": 2, "Toffoli": 3}.get(name, 1)
        qs = draw(st.permutations(range(n)))[:k]
        c.append(Gate(name, tuple(qs)))
    return c


@settings(max_examples=60, deadline=None)
@given(circuits())
def test_pm_count_equals_t_count(c):
    assert compile_circuit(c).count("PM") == lower_to_clifford_t(c).t_count


@settings(max_examples=60, deadline=None)
@given(circuits())
def test_per_qubit_order_is_preserved(c):
    low = lower_to_clifford_t(c)
    prog = compile_circuit(c)
    for q in range(c.qubit_count):
        gates = [g.name for g in low.gates if q in g.qubits and g.name not in ("X", "Y", "Z")]
        # each non-Pauli gate touching q leaves exactly one M-operand reference to q
        kinds = []
        for ins in prog:
            if q in ins.memory:
                kinds.append(ins.opcode.value)
        expect = []
        for g in gates:
            expect.append({"H": "HD.M", "S": "PH.M", "Sdg": "PH.M", "T": "MZZ.M", "Tdg": "MZZ.M", "CNOT": "CX"}[g])
            if g in ("T", "Tdg"):
                expect.append("PH.M")
        assert kinds == expect


def test_compile_is_deterministic():
    c = gen_select(2)
    assert render_program(compile_circuit(c)) == render_program(compile_circuit(c))
