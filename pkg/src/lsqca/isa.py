"""LSQCA instruction set: opcodes, operand kinds, assembly text and latency classes.

Assembly is one instruction per line, whitespace separated::

    PM C0
    MZZ.M C0 M3 V0
    SK V0
    PH.M M3

Operands carry a one-letter kind prefix followed by a decimal index:
``M`` names a logical memory variable, ``C`` a register qubit and ``V`` a
classical value.  ``#`` starts a comment.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional


class OperandKind(str, enum.Enum):
    MEMORY = "M"
    REGISTER = "C"
    VALUE = "V"


class Opcode(str, enum.Enum):
    LD = "LD"
    ST = "ST"
    PZ_C = "PZ.C"
    PP_C = "PP.C"
    PM = "PM"
    HD_C = "HD.C"
    PH_C = "PH.C"
    MX_C = "MX.C"
    MZ_C = "MZ.C"
    MXX_C = "MXX.C"
    MZZ_C = "MZZ.C"
    SK = "SK"
    PZ_M = "PZ.M"
    PP_M = "PP.M"
    HD_M = "HD.M"
    PH_M = "PH.M"
    MX_M = "MX.M"
    MZ_M = "MZ.M"
    MXX_M = "MXX.M"
    MZZ_M = "MZZ.M"
    CX = "CX"


M, C, V = OperandKind.MEMORY, OperandKind.REGISTER, OperandKind.VALUE

SIGNATURES: dict[Opcode, tuple[OperandKind, ...]] = {
    Opcode.LD: (M, C),
    Opcode.ST: (C, M),
    Opcode.PZ_C: (C,),
    Opcode.PP_C: (C,),
    Opcode.PM: (C,),
    Opcode.HD_C: (C,),
    Opcode.PH_C: (C,),
    Opcode.MX_C: (C, V),
    Opcode.MZ_C: (C, V),
    Opcode.MXX_C: (C, C, V),
    Opcode.MZZ_C: (C, C, V),
    Opcode.SK: (V,),
    Opcode.PZ_M: (M,),
    Opcode.PP_M: (M,),
    Opcode.HD_M: (M,),
    Opcode.PH_M: (M,),
    Opcode.MX_M: (M, V),
    Opcode.MZ_M: (M, V),
    Opcode.MXX_M: (C, M, V),
    Opcode.MZZ_M: (C, M, V),
    Opcode.CX: (M, M),
}

MEASUREMENTS = frozenset(
    {
        Opcode.MX_C,
        Opcode.MZ_C,
        Opcode.MXX_C,
        Opcode.MZZ_C,
        Opcode.MX_M,
        Opcode.MZ_M,
        Opcode.MXX_M,
        Opcode.MZZ_M,
    }
)


@dataclass(frozen=True)
class Operand:
    kind: OperandKind
    index: int

    def __str__(self) -> str:
        return f"{self.kind.value}{self.index}"

    @classmethod
    def parse(cls, token: str) -> "Operand":
        m = _OPERAND_RE.fullmatch(token)
        if m is None:
            raise ValueError(f"malformed operand {token!r}")
        return cls(OperandKind(m.group(1)), int(m.group(2)))


_OPERAND_RE = re.compile(r"([MCV])(0|[1-9][0-9]*)")


@dataclass(frozen=True)
class Instruction:
    opcode: Opcode
    operands: tuple[Operand, ...]

    def __post_init__(self) -> None:
        sig = SIGNATURES[self.opcode]
        kinds = tuple(o.kind for o in self.operands)
        if kinds != sig:
            want = " ".join(k.value for k in sig)
            raise ValueError(f"{self.opcode.value} expects operands {want}, got {self}")

    def __str__(self) -> str:
        return " ".join([self.opcode.value, *map(str, self.operands)])

    def of_kind(self, kind: OperandKind) -> list[int]:
        return [o.index for o in self.operands if o.kind is kind]

    @property
    def memory(self) -> list[int]:
        return self.of_kind(OperandKind.MEMORY)

    @property
    def registers(self) -> list[int]:
        return self.of_kind(OperandKind.REGISTER)

    @property
    def values(self) -> list[int]:
        return self.of_kind(OperandKind.VALUE)

    @property
    def writes_value(self) -> bool:
        return self.opcode in MEASUREMENTS


def make(opcode: Opcode | str, *operands: str | Operand) -> Instruction:
    """Build an instruction from an opcode and operand tokens, e.g. ``make("LD", "M0", "C0")``."""
    ops = tuple(o if isinstance(o, Operand) else Operand.parse(o) for o in operands)
    return Instruction(Opcode(opcode), ops)


@dataclass(frozen=True)
class Program:
    instructions: tuple[Instruction, ...] = ()
    # Metadata only; not part of the assembly text and ignored by equality.
    labels: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def _distinct(self, kind: OperandKind) -> set[int]:
        return {i for ins in self.instructions for i in ins.of_kind(kind)}

    @property
    def qubit_count(self) -> int:
        return len(self._distinct(OperandKind.MEMORY))

    @property
    def register_count(self) -> int:
        return len(self._distinct(OperandKind.REGISTER))

    @property
    def classical_count(self) -> int:
        return len(self._distinct(OperandKind.VALUE))

    @property
    def memory_span(self) -> int:
        """One past the largest M index (the address space a layout must hold)."""
        idx = self._distinct(OperandKind.MEMORY)
        return max(idx) + 1 if idx else 0

    def count(self, opcode: Opcode | str) -> int:
        opcode = Opcode(opcode)
        return sum(1 for ins in self.instructions if ins.opcode is opcode)

    def validate(self) -> None:
        """Check that every value read by SK was written earlier."""
        written: set[int] = set()
        for n, ins in enumerate(self.instructions):
            if ins.opcode is Opcode.SK and ins.values[0] not in written:
                raise ValueError(f"instruction {n}: SK reads V{ins.values[0]} before it is written")
            if ins.writes_value:
                written.update(ins.values)


class AssemblyError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def parse_program(text: str, validate: bool = True) -> Program:
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *tokens = line.split()
        try:
            opcode = Opcode(head.upper())
        except ValueError:
            raise AssemblyError(lineno, f"unknown opcode {head!r}") from None
        try:
            operands = tuple(Operand.parse(t) for t in tokens)
            instructions.append(Instruction(opcode, operands))
        except ValueError as exc:
            raise AssemblyError(lineno, str(exc)) from None
    program = Program(tuple(instructions))
    if validate:
        program.validate()
    return program


def render_program(program: Program | Iterable[Instruction]) -> str:
    lines = [str(ins) for ins in program]
    return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class LatencyClass:
    beats: Optional[int] = None

    @property
    def variable(self) -> bool:
        return self.beats is None

    def __str__(self) -> str:
        return "variable" if self.variable else f"{self.beats} beat"


VARIABLE = LatencyClass()

FIXED_LATENCY: dict[Opcode, int] = {
    Opcode.HD_C: 3,
    Opcode.PH_C: 2,
    Opcode.MXX_C: 1,
    Opcode.MZZ_C: 1,
    Opcode.PZ_C: 0,
    Opcode.PP_C: 0,
    Opcode.MX_C: 0,
    Opcode.MZ_C: 0,
    Opcode.PZ_M: 0,
    Opcode.PP_M: 0,
    Opcode.MX_M: 0,
    Opcode.MZ_M: 0,
}


def nominal_latency(ins: Instruction | Opcode) -> LatencyClass:
    opcode = ins.opcode if isinstance(ins, Instruction) else Opcode(ins)
    beats = FIXED_LATENCY.get(opcode)
    return VARIABLE if beats is None else LatencyClass(beats)
