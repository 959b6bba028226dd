"""Clifford+T gate circuits to LSQCA programs."""

from __future__ import annotations

from dataclasses import dataclass

from ..isa import Instruction, Program, make
from .circuit import PAULI, GateCircuit


@dataclass(frozen=True)
class CompilePolicy:
    in_memory_single_qubit: bool = True
    cx_as_instruction: bool = True
    t_gate_in_memory_zz: bool = True
    registers: int = 2  # register cells the target CR offers


class CompileError(ValueError):
    pass


def registers_needed(policy: CompilePolicy) -> int:
    # A T gate holds the magic state in one register; without in-memory ZZ it
    # also loads the target.  A CNOT lowered by hand needs control + ancilla.
    if not policy.cx_as_instruction or not policy.t_gate_in_memory_zz:
        return 2
    return 1


class _Emitter:
    def __init__(self, policy: CompilePolicy):
        self.policy = policy
        self.out: list[Instruction] = []
        self.next_v = 0
        self.cvals: dict[int, int] = {}  # circuit classical slot -> V id
        self.next_c = 0

    def fresh_v(self) -> str:
        v = self.next_v
        self.next_v += 1
        return f"V{v}"

    def reg(self, offset: int = 0) -> str:
        # registers are handed out round-robin so consecutive T gates can overlap
        return f"C{(self.next_c + offset) % self.policy.registers}"

    def advance(self, n: int = 1) -> None:
        self.next_c = (self.next_c + n) % self.policy.registers

    def emit(self, opcode: str, *operands: str) -> None:
        self.out.append(make(opcode, *operands))

    def single(self, opcode_c: str, opcode_m: str, q: int) -> None:
        if self.policy.in_memory_single_qubit:
            self.emit(opcode_m, f"M{q}")
        else:
            c = self.reg()
            self.advance()
            self.emit("LD", f"M{q}", c)
            self.emit(opcode_c, c)
            self.emit("ST", c, f"M{q}")

    def t_gate(self, q: int) -> None:
        mq = f"M{q}"
        magic = self.reg()
        v_zz, v_x = self.fresh_v(), self.fresh_v()
        self.emit("PM", magic)
        if self.policy.t_gate_in_memory_zz:
            self.advance()
            self.emit("MZZ.M", magic, mq, v_zz)
            self.emit("MX.C", magic, v_x)
            self.emit("SK", v_zz)
            self.emit("PH.M", mq)
        else:
            target = self.reg(1)
            self.advance(2)
            self.emit("LD", mq, target)
            self.emit("MZZ.C", magic, target, v_zz)
            self.emit("MX.C", magic, v_x)
            self.emit("SK", v_zz)
            self.emit("PH.C", target)
            self.emit("ST", target, mq)

    def cnot(self, a: int, b: int) -> None:
        if self.policy.cx_as_instruction:
            self.emit("CX", f"M{a}", f"M{b}")
            return
        ctrl, anc = self.reg(), self.reg(1)
        self.advance(2)
        self.emit("LD", f"M{a}", ctrl)
        self.emit("PP.C", anc)
        self.emit("MZZ.C", ctrl, anc, self.fresh_v())
        self.emit("MXX.M", anc, f"M{b}", self.fresh_v())
        self.emit("MZ.C", anc, self.fresh_v())
        self.emit("ST", ctrl, f"M{a}")

    def measure(self, opcode: str, q: int, slot: int) -> None:
        v = self.fresh_v()
        self.cvals[slot] = int(v[1:])
        self.emit(opcode, f"M{q}", v)

    def cond_s(self, q: int, slot: int) -> None:
        if slot not in self.cvals:
            raise CompileError(f"CondS reads classical slot c{slot} before it is measured")
        self.emit("SK", f"V{self.cvals[slot]}")
        self.emit("PH.M", f"M{q}")


def compile_to_lsqca(circuit: GateCircuit, policy: CompilePolicy = CompilePolicy()) -> Program:
    """Translate a Clifford+T circuit gate by gate.

    Pauli gates are tracked in the classical frame and emit nothing.
    """
    if policy.registers < registers_needed(policy):
        raise CompileError(
            f"policy needs {registers_needed(policy)} register cells, CR offers {policy.registers}"
        )
    e = _Emitter(policy)
    for g in circuit.gates:
        name, qs = g.name, g.qubits
        if name in PAULI:
            continue
        if name == "H":
            e.single("HD.C", "HD.M", qs[0])
        elif name in ("S", "Sdg"):
            e.single("PH.C", "PH.M", qs[0])
        elif name in ("T", "Tdg"):
            e.t_gate(qs[0])
        elif name == "CNOT":
            e.cnot(*qs)
        elif name == "PrepZ":
            e.emit("PZ.M", f"M{qs[0]}")
        elif name == "PrepX":
            e.emit("PP.M", f"M{qs[0]}")
        elif name == "MeasZ":
            e.measure("MZ.M", qs[0], g.value)
        elif name == "MeasX":
            e.measure("MX.M", qs[0], g.value)
        elif name == "CondS":
            e.cond_s(qs[0], g.value)
        else:
            raise CompileError(f"gate {name} is not Clifford+T; lower the circuit first")
    labels = {"qubits": circuit.qubit_count, "registers": dict(circuit.registers), "name": circuit.name}
    return Program(tuple(e.out), labels=labels)
