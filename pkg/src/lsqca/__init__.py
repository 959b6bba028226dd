"""Compiler and code-beat simulator for load/store fault-tolerant quantum architectures."""

from .analysis import geomean_overhead, hotness_rank, period_cdf, reference_trace, sweep_hybrid
from .floorplan import LayoutConfig, assign_initial, build_layout, memory_density
from .frontend import CompilePolicy, compile_circuit, gen_builtin, parse_gate_circuit
from .isa import Program, parse_program, render_program
from .msf import MsfState
from .sim import DeadlockError, RunResult, SimOptions, run, run_baseline

__version__ = "0.1.0"

__all__ = [
    "CompilePolicy",
    "DeadlockError",
    "LayoutConfig",
    "MsfState",
    "Program",
    "RunResult",
    "SimOptions",
    "assign_initial",
    "build_layout",
    "compile_circuit",
    "gen_builtin",
    "geomean_overhead",
    "hotness_rank",
    "memory_density",
    "parse_gate_circuit",
    "parse_program",
    "period_cdf",
    "reference_trace",
    "render_program",
    "run",
    "run_baseline",
    "sweep_hybrid",
]
