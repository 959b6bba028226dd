"""Command-line entry point: ``lsqca compile|simulate|sweep|report``.

Settings come from an optional flat ``key = value`` config file; command-line
flags override it.  Exit status is 0 on success, 2 on bad input and 3 when a
simulation deadlocks.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .analysis import geomean_overhead, sweep_hybrid
from .floorplan import LayoutConfig, build_layout
from .frontend import (
    BUILTINS,
    CircuitParseError,
    CompileError,
    CompilePolicy,
    compile_circuit,
    gen_builtin,
    lower_to_clifford_t,
    parse_gate_circuit,
)
from .isa import AssemblyError, Program, parse_program, render_program
from .sam import STORE_POLICIES
from .sim import DeadlockError, SimOptions, SimulationError, run, run_baseline

EXIT_OK, EXIT_INPUT, EXIT_DEADLOCK = 0, 2, 3

_BOOL = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}

# key -> (type, default)
KEYS = {
    "circuit": (str, None),
    "program": (str, None),
    "generator": (str, None),
    "size": (int, None),
    "name": (str, None),
    "sam_kind": (str, "line"),
    "banks": (int, 1),
    "factories": (int, 1),
    "hybrid_fraction": (Fraction, Fraction(0)),
    "buffer_capacity": (int, None),
    "warm_start": (bool, False),
    "in_memory_single_qubit": (bool, True),
    "cx_as_instruction": (bool, True),
    "t_gate_in_memory_zz": (bool, True),
    "store_policy": (str, "locality_aware"),
    "decoder_latency": (int, 0),
    "out": (str, "."),
    "jobs": (int, 1),
}


class InputError(ValueError):
    pass


def _convert(key: str, raw) -> object:
    typ, _ = KEYS[key]
    if raw is None or isinstance(raw, typ) and typ is not str:
        return raw
    text = str(raw).strip()
    if typ is bool:
        if text.lower() not in _BOOL:
            raise InputError(f"{key}: expected a boolean, got {text!r}")
        return _BOOL[text.lower()]
    try:
        return typ(text)
    except ValueError:
        raise InputError(f"{key}: cannot read {text!r}") from None


def read_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _convert(key, value)
    return out


@dataclass
class RunConfig:
    values: dict

    def __getattr__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None

    @classmethod
    def resolve(cls, args: argparse.Namespace) -> "RunConfig":
        values = {k: d for k, (_, d) in KEYS.items()}
        if getattr(args, "config", None):
            values.update(read_config(args.config))
        for key in KEYS:
            v = getattr(args, key, None)
            if v is not None:
                values[key] = _convert(key, v)
        cfg = cls(values)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        sources = [k for k in ("circuit", "program", "generator") if self.values.get(k)]
        if len(sources) != 1:
            raise InputError("give exactly one of circuit, program or generator")
        if self.generator and self.size is None:
            raise InputError("generator needs a size")
        if self.store_policy not in STORE_POLICIES:
            raise InputError(f"store_policy must be one of {', '.join(STORE_POLICIES)}")
        if not 0 <= self.hybrid_fraction <= 1:
            raise InputError("hybrid_fraction must lie in [0, 1]")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        if self.generator:
            return f"{self.generator}{self.size}"
        return Path(self.circuit or self.program).stem

    def layout_config(self) -> LayoutConfig:
        try:
            return LayoutConfig(
                self.sam_kind,
                self.banks,
                self.factories,
                self.hybrid_fraction,
                self.buffer_capacity,
                self.warm_start,
            )
        except ValueError as exc:
            raise InputError(str(exc)) from None

    def policy(self) -> CompilePolicy:
        return CompilePolicy(self.in_memory_single_qubit, self.cx_as_instruction, self.t_gate_in_memory_zz)

    def options(self) -> SimOptions:
        return SimOptions(store_policy=self.store_policy, decoder_latency=self.decoder_latency)


def load_circuit(cfg: RunConfig):
    if cfg.generator:
        if cfg.generator not in BUILTINS:
            raise InputError(f"unknown generator {cfg.generator!r}; choose from {', '.join(BUILTINS)}")
        try:
            return gen_builtin(cfg.generator, cfg.size)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    path = Path(cfg.circuit)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    fmt = "native" if path.suffix == ".gc" else "qasm"
    try:
        return parse_gate_circuit(text, fmt)
    except (CircuitParseError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def load_program(cfg: RunConfig) -> tuple[Program, int, Optional[int]]:
    """(program, qubit count, T-count or None when read from assembly)."""
    if cfg.program:
        try:
            prog = parse_program(Path(cfg.program).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {cfg.program}: {exc.strerror}") from None
        except (AssemblyError, ValueError) as exc:
            raise InputError(f"{cfg.program}: {exc}") from None
        return prog, max(1, prog.memory_span), None
    circ = load_circuit(cfg)
    try:
        prog = compile_circuit(circ, cfg.policy())
    except CompileError as exc:
        raise InputError(str(exc)) from None
    return prog, max(1, circ.qubit_count, prog.memory_span), lower_to_clifford_t(circ).t_count


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_compile(cfg: RunConfig) -> int:
    prog, n, tcount = load_program(cfg)
    path = _outdir(cfg) / f"{cfg.label}.lsq"
    path.write_text(render_program(prog))
    print(f"t_count {tcount if tcount is not None else '-'}")
    print(f"pm_count {prog.count('PM')}")
    print(f"qubits {n}")
    print(f"instructions {len(prog)}")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    prog, n, _ = load_program(cfg)
    lcfg = cfg.layout_config()
    layout = build_layout(lcfg, n)
    result = run(prog, layout, options=cfg.options())
    base = run_baseline(prog, n, lcfg.factories, lcfg.buffer_capacity, lcfg.warm_start, cfg.options())
    overhead = Fraction(result.total_beats, base.total_beats) - 1 if base.total_beats else Fraction(0)
    summary = (
        f"name {cfg.label}\n"
        + result.summary()
        + f"baseline_beats {base.total_beats}\noverhead {float(overhead):.6f}\n"
    )
    out = _outdir(cfg)
    (out / f"{cfg.label}.summary.txt").write_text(summary)
    (out / f"{cfg.label}.trace.log").write_text(result.trace_text())
    sys.stdout.write(summary)
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    prog, n, _ = load_program(cfg)
    curve = sweep_hybrid(prog, cfg.layout_config(), n, options=cfg.options(), jobs=cfg.jobs, name=cfg.label)
    path = _outdir(cfg) / f"{cfg.label}.sweep.csv"
    path.write_text(curve.csv())
    sys.stdout.write(curve.csv())
    for p in curve.points:
        if p.failed:
            print(f"f={float(p.f):.2f} failed: {p.error}", file=sys.stderr)
    return EXIT_OK


def read_summary(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    rec = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition(" ")
            rec[key] = value.strip()
    if "overhead" not in rec:
        raise InputError(f"{path}: not a simulate summary (no overhead field)")
    return rec


def cmd_report(inputs: Sequence[str], out: Optional[str]) -> int:
    if not inputs:
        raise InputError("report needs at least one summary file")
    recs = [read_summary(p) for p in inputs]
    cols = ["name", "sam_kind", "banks", "factories", "beats", "baseline_beats", "overhead", "density"]
    rows = [[r.get(c, "") for c in cols] for r in recs]
    gm = geomean_overhead(float(r["overhead"]) for r in recs)
    rows.append(["GEOMEAN", "", "", "", "", "", f"{gm:.6f}", ""])
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(cols)
    w.writerows(rows)
    if out:
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            w.writerows(rows)
    return EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value settings file")
    src = p.add_argument_group("circuit source (exactly one)")
    src.add_argument("--circuit", help=".qasm or .gc circuit file")
    src.add_argument("--program", help=".lsq assembly file")
    src.add_argument("--generator", help=f"builtin: {', '.join(BUILTINS)}")
    src.add_argument("--size", type=int)
    p.add_argument("--name", help="output file stem")
    lay = p.add_argument_group("layout")
    lay.add_argument("--sam-kind", dest="sam_kind", choices=("point", "line", "conventional"))
    lay.add_argument("--banks", type=int)
    lay.add_argument("--factories", type=int)
    lay.add_argument("--hybrid-fraction", dest="hybrid_fraction")
    lay.add_argument("--buffer-capacity", dest="buffer_capacity", type=int)
    lay.add_argument("--warm-start", dest="warm_start")
    pol = p.add_argument_group("compile policy")
    pol.add_argument("--in-memory-single-qubit", dest="in_memory_single_qubit")
    pol.add_argument("--cx-as-instruction", dest="cx_as_instruction")
    pol.add_argument("--t-gate-in-memory-zz", dest="t_gate_in_memory_zz")
    p.add_argument("--store-policy", dest="store_policy")
    p.add_argument("--decoder-latency", dest="decoder_latency", type=int)
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lsqca", description="Compile and simulate programs on load/store FTQC floorplans.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("compile", "lower and compile a circuit to .lsq assembly"),
        ("simulate", "run a program and write summary + trace"),
        ("sweep", "hybrid-fraction sweep to CSV"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_run_flags(p)
        if name == "sweep":
            p.add_argument("--jobs", type=int, help="worker processes (results do not depend on it)")
    rep = sub.add_parser("report", help="GEOMEAN table over simulate summaries")
    rep.add_argument("inputs", nargs="*", help="*.summary.txt files")
    rep.add_argument("-o", "--output", help="also write the table to this CSV")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "report":
            return cmd_report(args.inputs, args.output)
        cfg = RunConfig.resolve(args)
        return {"compile": cmd_compile, "simulate": cmd_simulate, "sweep": cmd_sweep}[args.command](cfg)
    except DeadlockError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEADLOCK
    except (InputError, SimulationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
