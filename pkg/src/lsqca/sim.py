"""Beat-accurate execution of LSQCA programs on a floorplan.

The scheduler is a dataflow machine with program-order priority.  An
instruction issues at the first beat where every earlier instruction that
shares one of its operands (memory variable, register name or classical
value) has retired, the instruction after an ``SK`` has seen the ``SK``
retire, and its resources are free:

* a bank serves one movement operation at a time;
* register cells are bound by ``LD``/``PM``/``PZ.C``/``PP.C`` and released by
  ``ST``/``MX.C``/``MZ.C``; a ``CX`` that loads a SAM operand borrows one;
* ``PM`` needs a buffered magic state and the single MSF port.

Among issuable instructions the oldest goes first.  Zero-beat instructions
retire in the beat they issue, so their dependants can issue in that beat.
"""

from __future__ import annotations

import heapq
from bisect import insort
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .floorplan import CONV, CONVENTIONAL, Layout, LayoutConfig, QubitMap, assign_initial, build_layout, memory_density
from .isa import FIXED_LATENCY, Instruction, Opcode, OperandKind, Program, nominal_latency
from .msf import PORT_BEATS, MsfState
from .sam import engine
from .sam.state import LineBank, SamState

BASELINE_CX = 2  # conventional-floorplan CNOT: ZZ merge with an ancilla, then XX
CX_MERGE = 1

BINDS = frozenset({Opcode.LD, Opcode.PM, Opcode.PZ_C, Opcode.PP_C})
RELEASES = frozenset({Opcode.ST, Opcode.MX_C, Opcode.MZ_C})
IN_MEMORY = {
    Opcode.HD_M: "HD",
    Opcode.PH_M: "PH",
    Opcode.MZZ_M: "MZZ",
    Opcode.MXX_M: "MXX",
    Opcode.MX_M: "MX",
    Opcode.MZ_M: "MZ",
    Opcode.PZ_M: "PZ",
    Opcode.PP_M: "PP",
}


class SimulationError(RuntimeError):
    pass


class CapacityError(SimulationError):
    pass


class DeadlockError(SimulationError):
    def __init__(self, beat: int, blocked: list[str]):
        self.beat = beat
        self.blocked = blocked
        lines = "\n".join("  " + b for b in blocked)
        super().__init__(f"deadlock at beat {beat}; blocked instructions:\n{lines}")


@dataclass(frozen=True)
class SimOptions:
    store_policy: str = engine.LOCALITY_AWARE
    decoder_latency: int = 0  # beats an SK waits on its value; ideal decoding by default
    cx_merge: int = CX_MERGE
    batch_line_rotations: bool = True
    keep_trace: bool = True


@dataclass(frozen=True)
class TraceEvent:
    index: int
    issue: int
    retire: int
    opcode: str
    operands: str
    cells: tuple[str, ...] = ()
    resources: tuple[str, ...] = ()

    def line(self) -> str:
        return f"{self.issue} {self.retire} {self.opcode} {self.operands or '-'} {','.join(self.cells) or '-'}"


@dataclass
class RunResult:
    total_beats: int
    instruction_count: int
    trace: list[TraceEvent] = field(default_factory=list)
    per_qubit_refs: dict[int, list[int]] = field(default_factory=dict)
    magic_beats: list[int] = field(default_factory=list)
    density: Fraction = Fraction(0)
    sam_kind: str = CONVENTIONAL
    banks: int = 0
    factories: int = 0
    hybrid_fraction: Fraction = Fraction(0)
    magic_granted: int = 0
    magic_discarded: int = 0
    zero_latency_count: int = 0  # instructions with a fixed 0-beat latency

    @property
    def cpi(self) -> Fraction:
        if not self.instruction_count:
            return Fraction(0)
        return Fraction(self.total_beats, self.instruction_count)

    @property
    def cpi_excl_zero(self) -> Fraction:
        """CPI over instructions that can take time; fixed 0-beat ones are left out."""
        n = self.instruction_count - self.zero_latency_count
        return Fraction(self.total_beats, n) if n else Fraction(0)

    @property
    def cpi_undefined(self) -> bool:
        return self.instruction_count == 0

    def trace_text(self) -> str:
        return "".join(ev.line() + "\n" for ev in self.trace)

    def summary(self) -> str:
        rows = [
            ("beats", self.total_beats),
            ("instructions", self.instruction_count),
            ("cpi", f"{float(self.cpi):.6f}"),
            ("cpi_undefined", int(self.cpi_undefined)),
            ("cpi_excl_zero", f"{float(self.cpi_excl_zero):.6f}"),
            ("density", f"{float(self.density):.6f}"),
            ("sam_kind", self.sam_kind),
            ("banks", self.banks),
            ("factories", self.factories),
            ("hybrid_fraction", f"{float(self.hybrid_fraction):.4f}"),
            ("pm_count", len(self.magic_beats)),
            ("magic_discarded", self.magic_discarded),
        ]
        return "".join(f"{k} {v}\n" for k, v in rows)


def _keys(ins: Instruction) -> list[tuple[str, int]]:
    return [(o.kind.value, o.index) for o in ins.operands]


def _dependencies(program: Program) -> list[set[int]]:
    last: dict[tuple[str, int], int] = {}
    deps: list[set[int]] = []
    for i, ins in enumerate(program.instructions):
        d = {last[k] for k in _keys(ins) if k in last}
        if i and program.instructions[i - 1].opcode is Opcode.SK:
            d.add(i - 1)  # always-taken branch: the guarded instruction waits for the SK
        deps.append(d)
        for k in _keys(ins):
            last[k] = i
    return deps


class _Machine:
    def __init__(self, program: Program, layout: Layout, qmap: QubitMap, opts: SimOptions):
        self.p = program.instructions
        self.layout = layout
        self.opts = opts
        self.sam = SamState.create(layout, qmap)
        cfg = layout.config
        self.msf = MsfState.create(cfg.factories, cfg.buffer, cfg.warm_start)
        self.reg_cap: Optional[int] = layout.register_cells if layout.banks else None
        if self.reg_cap is not None and program.register_count > self.reg_cap:
            raise CapacityError(f"program names {program.register_count} registers, CR holds {self.reg_cap}")
        self.bank_free = [0] * len(layout.banks)
        self.port_free = 0
        self.reg_release: dict[int, Optional[int]] = {}  # register name -> release beat (None = held)
        self.borrowed: list[int] = []  # release beats of registers lent to CX
        self.reg_qubit: dict[int, int] = {}
        self.reg_partner: dict[int, int] = {}
        self.retire: dict[int, int] = {}
        self.events: list[int] = []
        self.trace: list[TraceEvent] = []
        self.refs: dict[int, list[int]] = {}
        self.magic: list[int] = []
        self.blocked: dict[int, str] = {}
        # CX instructions that will want a register: both operands live in SAM
        self.reg_cx = [
            i
            for i, ins in enumerate(self.p)
            if ins.opcode is Opcode.CX and self.reg_cap is not None and all(self._in_sam(q) for q in ins.memory)
        ]
        self.reg_cx_issued: set[int] = set()

    # -- helpers -------------------------------------------------------------

    def _in_sam(self, q: int) -> bool:
        return self.sam.home.get(q, CONV) != CONV

    def _bank(self, q: int) -> Optional[int]:
        b = self.sam.home.get(q, CONV)
        return None if b == CONV else b

    def _cell_label(self, q: int) -> str:
        b = self._bank(q)
        if b is None:
            return "conv"
        cell = self.sam.pos.get(q)
        return f"b{b}" if cell is None else f"b{b}({cell[0]}.{cell[1]})"

    def _regs_in_use(self, t: int) -> int:
        held = sum(1 for r in self.reg_release.values() if r is None or r > t)
        return held + sum(1 for r in self.borrowed if r > t)

    def _earliest_reg_cx(self) -> Optional[int]:
        while self.reg_cx and self.reg_cx[0] in self.reg_cx_issued:
            self.reg_cx.pop(0)
        return self.reg_cx[0] if self.reg_cx else None

    def _bank_ready(self, banks, t: int) -> bool:
        return all(self.bank_free[b] <= t for b in banks)

    # -- issue ---------------------------------------------------------------

    def try_issue(self, i: int, t: int, ready) -> Optional[list[TraceEvent]]:
        ins = self.p[i]
        op = ins.opcode
        regs = ins.registers
        mem = ins.memory

        # register binding
        new_bind = [r for r in regs if not (r in self.reg_release and self.reg_release[r] is None)]
        if new_bind and self.reg_cap is not None:
            if op in BINDS:
                first_cx = self._earliest_reg_cx()
                if first_cx is not None and first_cx < i:
                    self.blocked[i] = f"waits for register-hungry CX #{first_cx}"
                    return None
            if self._regs_in_use(t) + len(new_bind) > self.reg_cap:
                self.blocked[i] = "no free register cell"
                return None

        if op is Opcode.PM:
            if self.port_free > t:
                self.blocked[i] = "MSF port busy"
                return None
            if self.msf.stock == 0:
                self.blocked[i] = "no magic state buffered"
                return None

        if op is Opcode.CX:
            return self._issue_cx(i, t)

        banks = {self._bank(q) for q in mem} - {None}
        kind = IN_MEMORY.get(op)
        moves = op in (Opcode.LD, Opcode.ST) or (kind is not None and engine.OP_BEATS[kind] > 0)
        if moves and not self._bank_ready(banks, t):
            self.blocked[i] = f"bank {sorted(banks)} busy"
            return None

        cells = tuple(self._cell_label(q) for q in mem) + tuple(f"C{r}" for r in regs)
        batch = [i]
        if op is Opcode.LD:
            q = mem[0]
            cost = engine.load(self.sam, q).beats
            self.reg_qubit[regs[0]] = q
            self.reg_partner.pop(regs[0], None)
        elif op is Opcode.ST:
            q = mem[0]
            partner = self.reg_partner.pop(regs[0], None)
            if partner is not None and (partner in self.sam.out or self.sam.home.get(partner) != self.sam.home.get(q)):
                partner = None
            cost = engine.store(self.sam, q, self.opts.store_policy, partner).beats
            self.reg_qubit.pop(regs[0], None)
        elif op is Opcode.PM:
            self.msf.request_magic()
            cost = PORT_BEATS
            self.port_free = t + PORT_BEATS
            self.magic.append(t)
        elif op is Opcode.SK:
            cost = self.opts.decoder_latency
        elif kind is not None:
            q = mem[0]
            if (
                self.opts.batch_line_rotations
                and op in (Opcode.HD_M, Opcode.PH_M)
                and isinstance(self._bank_obj(q), LineBank)
            ):
                batch = self._line_batch(i, t, ready)
            cost = engine.in_memory_access(self.sam, q, kind).beats
        else:
            cost = FIXED_LATENCY[op]
            if op in (Opcode.MZZ_C, Opcode.MXX_C):
                a, b = regs
                if a in self.reg_qubit and b in self.reg_qubit:
                    self.reg_partner[a], self.reg_partner[b] = self.reg_qubit[b], self.reg_qubit[a]
        done = t + cost
        for r in new_bind:
            self.reg_release[r] = None
        if op in RELEASES:
            for r in regs:
                self.reg_release[r] = done
        for b in banks if moves else ():
            self.bank_free[b] = done
        out = []
        for j in batch:
            insj = self.p[j]
            cj = cells if j == i else tuple(self._cell_label(q) for q in insj.memory)
            res = tuple(f"bank{b}" for b in sorted(banks)) if moves else ()
            out.append(self._event(j, t, done, cj, res))
        return out

    def _bank_obj(self, q: int):
        b = self._bank(q)
        return None if b is None else self.sam.banks[b]

    def _line_batch(self, i: int, t: int, ready) -> list[int]:
        """Ready rotations in the same run of consecutive same-opcode
        instructions, on the same row of the same bank, share one window."""
        ins = self.p[i]
        q = ins.memory[0]
        b, row = self._bank(q), self.sam.pos[q][0]
        out = [i]
        j = i + 1
        while j < len(self.p) and self.p[j].opcode is ins.opcode:
            qj = self.p[j].memory[0]
            if ready(j) and self._bank(qj) == b and qj in self.sam.pos and self.sam.pos[qj][0] == row:
                out.append(j)
            j += 1
        return out

    def _issue_cx(self, i: int, t: int) -> Optional[list[TraceEvent]]:
        a, b = self.p[i].memory
        banks = {self._bank(a), self._bank(b)} - {None}
        if not self._bank_ready(banks, t):
            self.blocked[i] = f"bank {sorted(banks)} busy"
            return None
        ca = engine.load_cost(self.sam, a) if self._in_sam(a) else 0
        cb = engine.load_cost(self.sam, b) if self._in_sam(b) else 0
        first, other = (a, b) if ca <= cb else (b, a)
        borrow = self._in_sam(first) and self.reg_cap is not None
        if borrow and self._regs_in_use(t) + 1 > self.reg_cap:
            self.blocked[i] = "no free register cell for the loaded operand"
            return None
        cells = (self._cell_label(a), self._cell_label(b))
        load = engine.load(self.sam, first).beats
        walk = engine.in_memory_access(self.sam, other, "MXX").beats - engine.OP_BEATS["MXX"]
        store = engine.store(self.sam, first, self.opts.store_policy, partner=other).beats
        same_bank = self._bank(a) is not None and self._bank(a) == self._bank(b)
        if same_bank:
            cost = load + self.opts.cx_merge + walk + engine.OP_BEATS["MXX"] + store
        else:
            cost = max(load + self.opts.cx_merge, walk) + engine.OP_BEATS["MXX"] + store
        done = t + cost
        for bk in banks:
            self.bank_free[bk] = done
        if borrow:
            self.borrowed.append(done)
        self.reg_cx_issued.add(i)
        res = tuple(f"bank{bk}" for bk in sorted(banks))
        return [self._event(i, t, done, cells, res)]

    def _event(self, j: int, t: int, done: int, cells, res) -> TraceEvent:
        ins = self.p[j]
        self.retire[j] = done
        if done > t:
            heapq.heappush(self.events, done)
        for q in ins.memory:
            self.refs.setdefault(q, []).append(t)
        ev = TraceEvent(j, t, done, ins.opcode.value, ",".join(map(str, ins.operands)), tuple(cells), res)
        if self.opts.keep_trace:
            self.trace.append(ev)
        return ev

    # -- main loop -----------------------------------------------------------

    def run(self) -> int:
        n = len(self.p)
        deps = _dependencies(Program(self.p))
        succ: list[list[int]] = [[] for _ in range(n)]
        waiting = [len(d) for d in deps]
        for i, d in enumerate(deps):
            for j in d:
                succ[j].append(i)
        cands: list[int] = [i for i in range(n) if not waiting[i]]
        issued = 0
        t = 0
        end = 0

        def ready(j: int, now=None) -> bool:
            now = t if now is None else now
            return j not in self.retire and waiting[j] == 0 and all(self.retire[d] <= now for d in deps[j])

        while issued < n:
            self.msf.advance_to(t)
            progress = True
            while progress:
                progress = False
                for i in list(cands):
                    if i in self.retire or not ready(i):
                        continue
                    events = self.try_issue(i, t, ready)
                    if not events:
                        continue
                    for ev in events:
                        cands.remove(ev.index)
                        issued += 1
                        end = max(end, ev.retire)
                        self.blocked.pop(ev.index, None)
                        for s in succ[ev.index]:
                            waiting[s] -= 1
                            if waiting[s] == 0:
                                insort(cands, s)
                    progress = True
                    break
            if issued == n:
                break
            while self.events and self.events[0] <= t:
                heapq.heappop(self.events)
            nxt = self.events[0] if self.events else None
            if any(self.p[i].opcode is Opcode.PM for i in cands) and self.msf.stock == 0:
                d = self.msf.next_delivery()
                if d is not None and (nxt is None or d < nxt):
                    nxt = d
            if nxt is None:
                blocked = [
                    f"#{i} {self.p[i]}: {self.blocked.get(i, 'waiting on operands')}" for i in cands[:10]
                ]
                raise DeadlockError(t, blocked)
            t = nxt
        return end


def run(
    program: Program,
    layout: Layout,
    qmap: Optional[QubitMap] = None,
    options: SimOptions = SimOptions(),
) -> RunResult:
    """Execute ``program`` on ``layout``; deterministic."""
    if program.memory_span > layout.qubit_count:
        raise CapacityError(f"program addresses M0..M{program.memory_span - 1}, layout holds {layout.qubit_count}")
    if qmap is None:
        qmap = assign_initial(layout)
    m = _Machine(program, layout, qmap, options)
    total = m.run()
    cfg = layout.config
    return RunResult(
        total_beats=total,
        instruction_count=len(program),
        trace=sorted(m.trace, key=lambda e: e.index),
        per_qubit_refs={q: sorted(v) for q, v in sorted(m.refs.items())},
        magic_beats=sorted(m.magic),
        density=memory_density(layout),
        sam_kind=layout.sam_kind if layout.banks else CONVENTIONAL,
        banks=len(layout.banks),
        factories=cfg.factories,
        hybrid_fraction=cfg.hybrid_fraction,
        magic_granted=m.msf.granted,
        magic_discarded=m.msf.discarded,
        zero_latency_count=sum(1 for ins in program if nominal_latency(ins).beats == 0),
    )


def baseline_layout(qubit_count: int, factories: int = 1, buffer_capacity=None, warm_start=False) -> Layout:
    cfg = LayoutConfig(CONVENTIONAL, factories=factories, buffer_capacity=buffer_capacity, warm_start=warm_start)
    return build_layout(cfg, max(1, qubit_count))


def run_baseline(
    program: Program,
    qubit_count: Optional[int] = None,
    factories: int = 1,
    buffer_capacity: Optional[int] = None,
    warm_start: bool = False,
    options: SimOptions = SimOptions(),
) -> RunResult:
    """Conventional 50%-density floorplan: free loads and stores, no register limit."""
    n = max(program.memory_span, qubit_count or 0)
    return run(program, baseline_layout(n, factories, buffer_capacity, warm_start), options=options)
