#!/usr/bin/env python3
"""
Command-line front end for Pauli tracking.

Subcommands:
    gen      seeded random circuit over {CNOT, RX4, RZ4, RZ8}
    lower    rewrite a {CNOT, H, P, T} circuit into the teleportation gate set
    run      simulate teleportation-based execution (deferred or immediate)
    track    compute the output correction frame from a circuit and a record
    verify   randomized equivalence checks plus the tau table oracle
    bench    tracking run-times over an (n, m) grid

Exit codes: 0 ok, 1 verification failure, 2 input or format error,
3 simulator capacity exceeded.
"""

import os
import sys
import argparse
from typing import List, Optional, Sequence

import numpy as np

import benchmark_tracking
from pauli_tracking.circuit import (
    GateKind,
    lower_clifford_t,
    parse_circuit,
    parse_weights,
    random_circuit,
    serialize_circuit,
)
from pauli_tracking.config import configure_logging, load_settings
from pauli_tracking.errors import CapacityError, PauliTrackingError, SimulationError
from pauli_tracking.oracle import format_diff, run_oracle
from pauli_tracking.sim import (
    RunMode,
    StateVector,
    check_capacity,
    check_run,
    dump_state,
    execute,
    parse_state,
    random_state,
)
from pauli_tracking.tracker import parse_record, serialize_record, track, track_trace

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_CAPACITY = 3


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def build_input_state(spec: str, n: int, seed: int) -> StateVector:
    """zero | random | basis:<bits> | file:<path>; slot k carries label k"""
    labels = tuple(range(n))
    if spec == "zero":
        return StateVector.basis(labels, "0" * n)
    if spec == "random":
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 1])))
        return random_state(labels, rng)
    if spec.startswith("basis:"):
        return StateVector.basis(labels, spec[len("basis:"):])
    if spec.startswith("file:"):
        return parse_state(_read(spec[len("file:"):]), labels)
    raise SimulationError(f"unknown input spec {spec!r}; use zero, random, basis:<bits> or file:<path>")


# ================== SUBCOMMANDS ==================

def cmd_gen(args) -> int:
    weights = parse_weights(args.weights) if args.weights else None
    circuit = random_circuit(args.n, args.m, args.seed, weights)
    _write(args.out, serialize_circuit(circuit))
    if args.out:
        print(f"✅ Generated {circuit.m} gates on {circuit.n} qubits -> {args.out}")
    return EXIT_OK


def cmd_lower(args) -> int:
    circuit = parse_circuit(_read(args.circuit), extended=True)
    lowered = lower_clifford_t(circuit)
    _write(args.out, serialize_circuit(lowered))
    if args.out:
        print(f"✅ Lowered {circuit.m} gates to {lowered.m} -> {args.out}")
    return EXIT_OK


def cmd_run(args) -> int:
    settings = load_settings()
    circuit = parse_circuit(_read(args.circuit))
    check_capacity(circuit.n, settings.sim_max_qubits)
    state = build_input_state(args.input, circuit.n, args.seed)
    mode = RunMode(args.mode)
    result = execute(circuit, mode, state, args.seed, settings.sim_max_qubits)

    state_path = args.state_out or f"{args.circuit}.state"
    _write(state_path, dump_state(result.final_state))
    print(f"✅ Ran {circuit.m} gates in {mode.value} mode: {len(result.record)} outcomes, "
          f"{result.second_stages} second stage(s), peak {result.peak_live_qubits} live qubits")
    if mode == RunMode.DEFERRED:
        record_path = args.record_out or f"{args.circuit}.record"
        _write(record_path, serialize_record(result.record))
        print(f"💾 Record saved to {record_path}")
    else:
        print(f"🔧 Applied {result.applied_corrections} corrections")
    print(f"💾 State saved to {state_path}")
    return EXIT_OK


def cmd_track(args) -> int:
    circuit = parse_circuit(_read(args.circuit))
    record = parse_record(_read(args.record))
    if args.trace:
        for index, (gate, frame) in enumerate(zip(circuit.gates, track_trace(circuit, record))):
            print(f"{index:>4} {str(gate):<12} " + " ".join(s.name for s in frame))
    frame = track(circuit, record)
    _write(args.out, frame.to_text())
    if args.out:
        print(f"✅ {frame.nontrivial_count}/{circuit.n} outputs need a correction -> {args.out}")
    return EXIT_OK


def _trial_seeds(seed: int, trials: int) -> List[int]:
    children = np.random.SeedSequence(seed).spawn(trials)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]


def _run_trials(trials: int, max_n: int, max_m: int, seed: int, mode: RunMode, tol: float):
    """Returns (passed, first counterexample or None)"""
    passed = 0
    failure = None
    for trial_seed in _trial_seeds(seed, trials):
        rng = np.random.Generator(np.random.PCG64(trial_seed))
        n = int(rng.integers(1, max_n + 1))
        m = int(rng.integers(min(1, max_m), max_m + 1))
        weights = None if n > 1 else {GateKind.RX4: 1.0, GateKind.RZ4: 1.0, GateKind.RZ8: 1.0}
        circuit = random_circuit(n, m, trial_seed, weights)
        state = random_state(tuple(range(n)), rng)
        ok, result = check_run(circuit, state, trial_seed, mode, tol)
        if ok:
            passed += 1
        elif failure is None:
            failure = (trial_seed, circuit, result.record)
    return passed, failure


def cmd_verify(args) -> int:
    settings = load_settings()
    check_capacity(args.max_n, settings.sim_max_qubits)
    tol = settings.tolerance
    ok = True

    for label, mode, trials in (
        ("Deferred execution + tracking", RunMode.DEFERRED, args.trials),
        ("Immediate corrections", RunMode.IMMEDIATE, args.immediate_trials),
    ):
        if trials <= 0:
            continue
        print(f"🧪 {label}: {trials} random circuits (n ≤ {args.max_n}, m ≤ {args.max_m})")
        passed, failure = _run_trials(trials, args.max_n, args.max_m, args.seed, mode, tol)
        marker = "✅" if passed == trials else "❌"
        print(f"{marker} {passed}/{trials} passed")
        if failure is not None:
            ok = False
            trial_seed, circuit, record = failure
            print(f"   first counterexample (seed {trial_seed}):")
            print("   " + serialize_circuit(circuit).replace("\n", "\n   ").rstrip())
            if mode == RunMode.DEFERRED:
                print("   record:")
                print("   " + serialize_record(record).replace("\n", "\n   ").rstrip())

    if args.no_oracle:
        return EXIT_OK if ok else EXIT_VERIFY_FAILED

    print("\n" + "=" * 60)
    print("🧪 Tau table oracle")
    report = run_oracle(seed=args.oracle_seed if args.oracle_seed is not None else settings.oracle_seed, tol=tol)
    agreement = report.cnot_agreement
    marker = "✅" if agreement == 16 else "❌"
    print(f"{marker} {agreement}/16 CNOT rules certified")
    ok = ok and agreement == 16
    if report.shipped_table_matches:
        print("✅ Shipped rotational table equals the certified table")
    else:
        print("❌ Shipped rotational table differs from the certified table")
        ok = False

    print(f"📊 {len(report.discrepancies)} row(s) differ from the reference table:")
    for row in report.discrepancies:
        print(f"   {row.row_id}: reference {row.reference}, certified {row.certified}")
    diff_path = args.diff_out or os.path.join(settings.results_dir, "tau_table.diff")
    _write(diff_path, format_diff(report.discrepancies))
    print(f"💾 Discrepancy report saved to {diff_path}")

    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_bench(args) -> int:
    bench = benchmark_tracking.TrackingBenchmark(args.results_dir)
    report = bench.run(args.n_list, args.m_list, args.seed, args.repeats, verbose=False)
    print(benchmark_tracking.format_table(report))
    for n in sorted({r.n for r in report.rows}):
        growth = report.growth(n)
        if growth is not None:
            print(f"📊 n={n}: RT(max m)/RT(min m) = {growth:.1f}")
    if args.save:
        bench.save_results(report)
        bench.generate_report(report)
    return EXIT_OK


# ================== PARSER ==================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Pauli tracking for teleportation-based circuits")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="Generate a random circuit")
    p.add_argument("-n", type=int, required=True, help="Qubit count")
    p.add_argument("-m", type=int, required=True, help="Gate count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--weights", help="Gate weights, e.g. CNOT=1,RX4=1,RZ4=1,RZ8=1")
    p.add_argument("-o", "--out", help="Output file (default: stdout)")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("lower", help="Lower a {CNOT, H, P, T} circuit")
    p.add_argument("circuit")
    p.add_argument("-o", "--out", help="Output file (default: stdout)")
    p.set_defaults(handler=cmd_lower)

    p = sub.add_parser("run", help="Simulate teleportation-based execution")
    p.add_argument("circuit")
    p.add_argument("--mode", choices=[m.value for m in RunMode], default=RunMode.DEFERRED.value)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--input", default="zero", help="zero | random | basis:<bits> | file:<path>")
    p.add_argument("--record-out", help="Record file (default: <circuit>.record)")
    p.add_argument("--state-out", help="State dump (default: <circuit>.state)")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("track", help="Track corrections through a circuit")
    p.add_argument("circuit")
    p.add_argument("record")
    p.add_argument("-o", "--out", help="Frame file (default: stdout)")
    p.add_argument("--trace", action="store_true", help="Print the frame after every gate")
    p.set_defaults(handler=cmd_track)

    p = sub.add_parser("verify", help="Randomized equivalence checks and the tau oracle")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--immediate-trials", type=int, default=100)
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--max-m", type=int, default=25)
    p.add_argument("--seed", type=int, default=3)
    p.add_argument("--oracle-seed", type=int)
    p.add_argument("--no-oracle", action="store_true", help="Skip the tau table oracle")
    p.add_argument("--diff-out", help="Discrepancy report (default: <results dir>/tau_table.diff)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bench", help="Tracking run-times over an (n, m) grid")
    p.add_argument("--n-list", type=benchmark_tracking.parse_int_list,
                   default=list(benchmark_tracking.DEFAULT_N_LIST))
    p.add_argument("--m-list", type=benchmark_tracking.parse_int_list,
                   default=list(benchmark_tracking.DEFAULT_M_LIST))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--save", action="store_true", help="Write JSON and Markdown results")
    p.add_argument("--results-dir", help="Results directory (default: PAULI_RESULTS_DIR)")
    p.set_defaults(handler=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else load_settings().log_level)
    try:
        return args.handler(args)
    except CapacityError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except (PauliTrackingError, OSError, ValueError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
