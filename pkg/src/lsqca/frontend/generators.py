"""Built-in benchmark circuits."""

from __future__ import annotations

import math
from typing import Optional, Sequence

from .circuit import CNOT, MAX_QUBITS, Gate, GateCircuit, H, MeasZ, Toffoli, X

BUILTINS = ("ghz", "cat", "bv", "adder", "select")


def _check_size(size: int, qubits: int) -> None:
    if size < 1:
        raise ValueError(f"size must be >= 1, got {size}")
    if qubits >= MAX_QUBITS:
        raise ValueError(f"{qubits} qubits exceeds the supported maximum")


def ghz(n: int) -> GateCircuit:
    """H on qubit 0 followed by a CNOT chain, then Z measurements."""
    _check_size(n, n)
    c = GateCircuit(n, name=f"ghz{n}")
    c.append(H(0))
    c.extend(CNOT(i, i + 1) for i in range(n - 1))
    c.extend(MeasZ(i, i) for i in range(n))
    return c


def cat(n: int) -> GateCircuit:
    """Cat state by fan-out from qubit 0."""
    _check_size(n, n)
    c = GateCircuit(n, name=f"cat{n}")
    c.append(H(0))
    c.extend(CNOT(0, i) for i in range(1, n))
    c.extend(MeasZ(i, i) for i in range(n))
    return c


def bv(n: int, secret: Optional[Sequence[int]] = None) -> GateCircuit:
    """Bernstein-Vazirani with an ``n``-bit secret; qubit ``n`` is the oracle ancilla."""
    _check_size(n, n + 1)
    secret = [1] * n if secret is None else list(secret)
    if len(secret) != n:
        raise ValueError("secret length must equal n")
    anc = n
    c = GateCircuit(n + 1, name=f"bv{n}")
    c.append(X(anc))
    c.extend(H(q) for q in range(n + 1))
    c.extend(CNOT(q, anc) for q, bit in enumerate(secret) if bit)
    c.extend(H(q) for q in range(n))
    c.extend(MeasZ(q, q) for q in range(n))
    return c


def adder(n: int) -> GateCircuit:
    """Ripple-carry (Cuccaro) adder of two ``n``-bit registers.

    Layout: qubit 0 is the carry-in, ``a_i = 1 + 2i``, ``b_i = 2 + 2i`` and the
    carry-out is the last qubit.  Contains exactly ``2n`` Toffoli gates.
    """
    _check_size(n, 2 * n + 2)
    cin, cout = 0, 2 * n + 1
    a = [1 + 2 * i for i in range(n)]
    b = [2 + 2 * i for i in range(n)]
    c = GateCircuit(2 * n + 2, name=f"adder{n}")

    def maj(x, y, z):
        return [CNOT(z, y), CNOT(z, x), Toffoli(x, y, z)]

    def uma(x, y, z):
        return [Toffoli(x, y, z), CNOT(z, x), CNOT(x, y)]

    # operands a = b = 1...1 so the data path is not trivially idle
    c.extend(X(q) for q in a + b)
    chain = [(cin, b[0], a[0])] + [(a[i - 1], b[i], a[i]) for i in range(1, n)]
    for x, y, z in chain:
        c.extend(maj(x, y, z))
    c.append(CNOT(a[-1], cout))
    for x, y, z in reversed(chain):
        c.extend(uma(x, y, z))
    for k, q in enumerate(b + [cout]):
        c.append(MeasZ(q, k))
    return c


def heisenberg_terms(width: int) -> list[tuple[str, int, int]]:
    """Pauli terms (XX, YY, ZZ per nearest-neighbour bond) of a width x width lattice."""
    bonds = []
    for r in range(width):
        for col in range(width):
            s = r * width + col
            if col + 1 < width:
                bonds.append((s, s + 1))
            if r + 1 < width:
                bonds.append((s, s + width))
    return [(p, u, v) for u, v in bonds for p in ("X", "Y", "Z")]


def _controlled_pauli(flag: int, pauli: str, target: int) -> list[Gate]:
    if pauli == "X":
        return [CNOT(flag, target)]
    if pauli == "Z":
        return [H(target), CNOT(flag, target), H(target)]
    # CY = (I x S) CNOT (I x Sdg)
    return [Gate("Sdg", (target,)), CNOT(flag, target), Gate("S", (target,))]


def select(width: int) -> GateCircuit:
    """SELECT for the 2D Heisenberg model by unary iteration over all terms.

    For each term index ``i`` a ladder of Toffolis ANDs the control bits
    (negated where ``i`` has a 0 bit, via X conjugation) into the temporal
    register; its last qubit then controls the Pauli term on the system
    register.  Between consecutive indices only the ladder levels below their
    common bit prefix are uncomputed and recomputed.

    Qubits: control register first, then temporal, then system.
    """
    if width < 2:
        raise ValueError("lattice width must be >= 2")
    terms = heisenberg_terms(width)
    nbits = max(2, math.ceil(math.log2(len(terms))))
    control = list(range(nbits))
    temporal = list(range(nbits, 2 * nbits - 1))
    system = [2 * nbits - 1 + s for s in range(width * width)]
    _check_size(width, len(control) + len(temporal) + len(system))
    c = GateCircuit(len(control) + len(temporal) + len(system), name=f"select{width}")
    c.registers.update({q: "control" for q in control})
    c.registers.update({q: "temporal" for q in temporal})
    c.registers.update({q: "system" for q in system})

    def bits(i: int) -> list[int]:
        return [(i >> (nbits - 1 - k)) & 1 for k in range(nbits)]  # MSB first

    def level(k: int, pattern: list[int]) -> list[Gate]:
        # temporal[k-1] = AND of control bits 0..k under pattern
        ctrl = temporal[k - 2] if k >= 2 else control[0]
        flips = [control[j] for j in ((0, 1) if k == 1 else (k,)) if not pattern[j]]
        g = [X(q) for q in flips]
        return g + [Toffoli(ctrl, control[k], temporal[k - 1])] + g

    prev: Optional[list[int]] = None
    for i, (pauli, u, v) in enumerate(terms):
        pat = bits(i)
        if prev is None:
            keep = 0
        else:
            keep = next((k for k in range(nbits) if pat[k] != prev[k]), nbits)
            # ladder level k depends on bits 0..k; levels with k < keep survive
            for k in range(nbits - 1, max(keep, 1) - 1, -1):
                c.extend(level(k, prev))
        for k in range(max(keep, 1), nbits):
            c.extend(level(k, pat))
        flag = temporal[-1]
        c.extend(_controlled_pauli(flag, pauli, system[u]))
        c.extend(_controlled_pauli(flag, pauli, system[v]))
        prev = pat
    if prev is not None:
        for k in range(nbits - 1, 0, -1):
            c.extend(level(k, prev))
    return c


def gen_builtin(kind: str, size: int) -> GateCircuit:
    table = {"ghz": ghz, "cat": cat, "bv": bv, "adder": adder, "select": select}
    if kind not in table:
        raise ValueError(f"unknown builtin {kind!r}; choose from {', '.join(BUILTINS)}")
    return table[kind](size)


gen_select = select
