#!/usr/bin/env python3
"""
Benchmark harness for Pauli tracking run-times
"""

import os
import json
import time
import argparse
import statistics
from datetime import datetime
from typing import Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass, asdict, field

from pauli_tracking import random_circuit, random_record, track
from pauli_tracking.circuit import GateKind
from pauli_tracking.config import configure_logging, load_settings
from pauli_tracking.tracker import expected_correction_count

DEFAULT_N_LIST = (100, 1100, 5100)
DEFAULT_M_LIST = (1000, 5000, 10000, 20000, 50000)

# Run-times in seconds published for the same grid on 2013-era hardware
REFERENCE_RT: Dict[Tuple[int, int], float] = {
    (100, 1000): 0.000, (100, 5000): 0.002, (100, 10000): 0.004, (100, 20000): 0.011, (100, 50000): 0.030,
    (1100, 1000): 0.011, (1100, 5000): 0.069, (1100, 10000): 0.128, (1100, 20000): 0.300, (1100, 50000): 0.680,
    (5100, 1000): 0.052, (5100, 5000): 0.309, (5100, 10000): 0.709, (5100, 20000): 1.930, (5100, 50000): 5.435,
}


@dataclass
class BenchRow:
    """Timing and correction counts for one (n, m) grid point"""
    n: int
    m: int
    tracking_time: float
    corrections_with_tracking: int
    expected_corrections_without: float
    m4: int
    m8: int
    reference_time: Optional[float] = None


@dataclass
class BenchReport:
    """All grid points of one benchmark run"""
    seed: int
    repeats: int
    timestamp: str
    rows: List[BenchRow] = field(default_factory=list)

    def growth(self, n: int) -> Optional[float]:
        """RT(largest m) / RT(smallest m) at fixed n"""
        points = sorted((r.m, r.tracking_time) for r in self.rows if r.n == n)
        if len(points) < 2 or points[0][1] <= 0:
            return None
        return points[-1][1] / points[0][1]


class TrackingBenchmark:
    """Times track() over seeded random circuits and synthetic records"""

    def __init__(self, results_dir: Optional[str] = None):
        self.results_dir = results_dir or load_settings().results_dir

    def run_point(
        self, n: int, m: int, seed: int, repeats: int = 3, weights: Optional[Dict[GateKind, float]] = None
    ) -> BenchRow:
        circuit = random_circuit(n, m, seed, weights)
        record = random_record(circuit, seed + 1)

        timings = []
        frame = None
        for _ in range(max(repeats, 1)):
            start = time.perf_counter()
            frame = track(circuit, record)
            timings.append(time.perf_counter() - start)

        return BenchRow(
            n=n,
            m=m,
            tracking_time=statistics.median(timings),
            corrections_with_tracking=frame.nontrivial_count,
            expected_corrections_without=expected_correction_count(circuit),
            m4=circuit.count(GateKind.RX4, GateKind.RZ4),
            m8=circuit.count(GateKind.RZ8),
            reference_time=REFERENCE_RT.get((n, m)),
        )

    def run(
        self,
        n_list: Sequence[int] = DEFAULT_N_LIST,
        m_list: Sequence[int] = DEFAULT_M_LIST,
        seed: int = 7,
        repeats: int = 3,
        verbose: bool = True,
    ) -> BenchReport:
        report = BenchReport(seed=seed, repeats=repeats, timestamp=datetime.now().isoformat())
        for n in n_list:
            for m in m_list:
                if verbose:
                    print(f"🧪 Tracking n={n} m={m}")
                report.rows.append(self.run_point(n, m, seed, repeats))
        return report

    def save_results(self, report: BenchReport) -> str:
        """Save raw rows to bench_results.json"""
        os.makedirs(self.results_dir, exist_ok=True)
        filename = os.path.join(self.results_dir, "bench_results.json")
        with open(filename, 'w') as f:
            json.dump(asdict(report), f, indent=2)
        print(f"💾 Results saved to {filename}")
        return filename

    def generate_report(self, report: BenchReport) -> str:
        """Write bench_report.md"""
        lines = [
            "# Pauli Tracking Benchmark",
            "",
            f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}",
            f"Seed: {report.seed}, repeats: {report.repeats} (median reported)",
            "",
            "## 📊 **Run-times**",
            "",
            "| n | m | RT (s) | Reference RT (s) | Corrections with tracking | Expected without |",
            "|---|---|--------|------------------|---------------------------|------------------|",
        ]
        for r in report.rows:
            ref = f"{r.reference_time:.3f}" if r.reference_time is not None else "-"
            lines.append(
                f"| {r.n} | {r.m} | {r.tracking_time:.4f} | {ref} | "
                f"{r.corrections_with_tracking} | {r.expected_corrections_without:.2f} |"
            )
        lines += ["", "## **Scaling in m**", ""]
        for n in sorted({r.n for r in report.rows}):
            growth = report.growth(n)
            lines.append(f"- n = {n}: RT(max m) / RT(min m) = {growth:.1f}" if growth else f"- n = {n}: -")
        lines += [
            "",
            "## 🔧 **Notes**",
            "- Only track() is timed; circuit generation and record synthesis are excluded",
            "- Records are fair random bits with R⁸_z branch flags set by the live frame",
            "- Reference run-times come from older hardware and are shown for shape only",
        ]
        text = "\n".join(lines) + "\n"

        os.makedirs(self.results_dir, exist_ok=True)
        filename = os.path.join(self.results_dir, "bench_report.md")
        with open(filename, 'w') as f:
            f.write(text)
        print(f"📊 Benchmark report saved to {filename}")
        return text


def format_table(report: BenchReport) -> str:
    header = f"{'n':>6} {'m':>7} {'RT [s]':>10} {'ref RT [s]':>11} {'with':>6} {'without':>10}"
    lines = [header, "-" * len(header)]
    for r in report.rows:
        ref = f"{r.reference_time:.3f}" if r.reference_time is not None else "-"
        lines.append(
            f"{r.n:>6} {r.m:>7} {r.tracking_time:>10.4f} {ref:>11} "
            f"{r.corrections_with_tracking:>6} {r.expected_corrections_without:>10.2f}"
        )
    return "\n".join(lines)


def parse_int_list(text: str) -> List[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main benchmark function"""
    parser = argparse.ArgumentParser(description="Benchmark Pauli tracking run-times")
    parser.add_argument("--n-list", type=parse_int_list, default=list(DEFAULT_N_LIST),
                        help="Comma-separated qubit counts")
    parser.add_argument("--m-list", type=parse_int_list, default=list(DEFAULT_M_LIST),
                        help="Comma-separated gate counts")
    parser.add_argument("--seed", type=int, default=7, help="Seed for circuits and records")
    parser.add_argument("--repeats", type=int, default=3, help="Timing repeats per point")
    parser.add_argument("--no-save", action="store_true", help="Do not write results files")
    args = parser.parse_args(argv)

    configure_logging(load_settings().log_level)

    print("🚀 Pauli Tracking Benchmark")
    print("=" * 60)

    bench = TrackingBenchmark()
    report = bench.run(args.n_list, args.m_list, args.seed, args.repeats)

    print("\n" + "=" * 60)
    print(format_table(report))

    if not args.no_save:
        bench.save_results(report)
        bench.generate_report(report)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
