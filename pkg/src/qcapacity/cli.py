"""Command-line interface: ``trace``, ``sweep``, ``verify`` and ``threshold``.

Exit codes: 0 success, 1 numerical failure or property violation, 2 usage
error. Every output file starts with a ``# manifest:`` comment line holding
the resolved configuration; numeric output is deterministic for a given
manifest.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields
from pathlib import Path

from . import __version__, _backend
from .bounds import BOUND_SLACK, bound_report
from .errors import InvalidArgumentError, NumericalFailureError
from .grover import SAMPLING, GroverConfig, TraceRecord, run_trace

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

CSV_COLUMNS = (
    ("k", "k"),
    ("I_bits", "mutual_information"),
    ("S_avg_bits", "s_average"),
    ("S_branch_bits", "s_branch"),
    ("delta_S_oracle_bits", "delta_s_oracle"),
    ("fidelity_oracle", "fidelity_oracle"),
    ("bures_oracle", "bures_oracle"),
    ("fannes_bound_bits", "fannes_bound"),
    ("step_bound_bits", "step_bound"),
    ("fannes_ok", "fannes_ok"),
    ("step_ok", "step_ok"),
    ("fidelity_bound_ok", "fidelity_bound_ok"),
)
CSV_HEADER = ",".join(name for name, _ in CSV_COLUMNS)


class UsageError(Exception):
    pass


def fmt_number(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def round_number(x):
    if isinstance(x, (bool, int)):
        return x
    return float(f"{x:.12g}")


def manifest(command: str, **config) -> dict:
    return {
        "command": command,
        "config": config,
        "tool": "qcapacity",
        "version": __version__,
        "backend": _backend.name(),
        "sampling": SAMPLING,
    }


def manifest_line(m: dict) -> str:
    return "# manifest: " + json.dumps(m, sort_keys=True, separators=(",", ":")) + "\n"


def trace_csv(records: list[TraceRecord], m: dict) -> str:
    out = io.StringIO()
    out.write(manifest_line(m))
    out.write(CSV_HEADER + "\n")
    for r in records:
        out.write(",".join(fmt_number(getattr(r, attr)) for _, attr in CSV_COLUMNS) + "\n")
    return out.getvalue()


def trace_json(records: list[TraceRecord], m: dict) -> str:
    rows = [{name: round_number(getattr(r, attr)) for name, attr in CSV_COLUMNS} for r in records]
    return json.dumps({"manifest": m, "records": rows}, indent=2, sort_keys=False) + "\n"


def write_atomic(path: Path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out):
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        write_atomic(Path(out), text)


# --- argument parsing -------------------------------------------------------------------


def _purity(text: str) -> float:
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"purity must lie in [0, 1], got {text}")
    return p


def _purity_list(text: str) -> list[float]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("purity list is empty")
    values = [_purity(t) for t in items]
    if len(set(values)) != len(values):
        raise argparse.ArgumentTypeError("purity list has duplicates")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcapacity",
        description="Mutual information between memory and computational registers during Grover search.",
    )
    parser.add_argument("--version", action="version", version=f"qcapacity {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trace", help="mutual information after each Grover block")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--purity", type=_purity, default=1.0)
    p.add_argument("--blocks", type=int, default=25)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--audit", action="store_true", help="recompute branch entropies every block")

    p = sub.add_parser("sweep", help="one trace per purity plus a combined long-format file")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--purity", type=_purity_list, default=[1.0, 0.95, 0.7])
    p.add_argument("--blocks", type=int, default=25)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--qubits-min", type=int, default=2)
    p.add_argument("--qubits-max", type=int, default=6)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--blocks", type=int, default=25)
    p.add_argument("--report", default=None, help="write the full JSON report here")

    p = sub.add_parser("threshold", help="entropy threshold and query bounds for a register")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--purity", type=_purity, default=1.0)
    p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


# --- commands -----------------------------------------------------------------------------


def cmd_trace(args) -> int:
    cfg = GroverConfig(args.qubits, args.purity, args.blocks)
    records = run_trace(cfg, audit=args.audit)
    m = manifest(
        "trace",
        n_qubits=cfg.n_qubits,
        purity=cfg.purity_p,
        n_blocks=cfg.n_blocks,
        audit=bool(args.audit),
        tolerance=BOUND_SLACK,
    )
    emit(trace_csv(records, m) if args.format == "csv" else trace_json(records, m), args.out)
    return EXIT_OK


def _sweep_one(job):
    n_qubits, purity, n_blocks = job
    return run_trace(GroverConfig(n_qubits, purity, n_blocks))


def trace_filename(purity: float) -> str:
    return f"trace_p{fmt_number(purity)}.csv"


def cmd_sweep(args) -> int:
    configs = [GroverConfig(args.qubits, p, args.blocks) for p in args.purity]
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    m = manifest(
        "sweep",
        n_qubits=args.qubits,
        purities=list(args.purity),
        n_blocks=args.blocks,
        tolerance=BOUND_SLACK,
    )
    jobs = [(c.n_qubits, c.purity_p, c.n_blocks) for c in configs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            traces = list(pool.map(_sweep_one, jobs))
    else:
        traces = [_sweep_one(j) for j in jobs]

    long = io.StringIO()
    long.write(manifest_line(m))
    long.write("purity,k,I_bits\n")
    for purity, records in zip(args.purity, traces):
        write_atomic(out_dir / trace_filename(purity), trace_csv(records, m))
        for r in records:
            long.write(f"{fmt_number(purity)},{r.k},{fmt_number(r.mutual_information)}\n")
    write_atomic(out_dir / "sweep.csv", long.getvalue())
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    if args.qubits_min < 2 or args.qubits_max < 2:
        raise UsageError("the oracle properties need N >= 4: use --qubits-min/--qubits-max >= 2")
    if args.qubits_min > args.qubits_max:
        raise UsageError("--qubits-min exceeds --qubits-max")
    if args.qubits_max > 10:
        raise UsageError("--qubits-max is limited to 10")
    if not args.tolerance > 0:
        raise UsageError("--tolerance must be positive")
    start = time.perf_counter()
    results = run_suite(args.qubits_min, args.qubits_max, args.tolerance, args.seed, n_blocks=args.blocks)
    elapsed = time.perf_counter() - start

    width = max(len(r.name) for r in results)
    print(f"{'property':<{width}}  {'cases':>6}  {'worst':>11}  status")
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {r.cases:>6}  {r.worst:>11.3e}  {status}")
        for note in r.notes:
            print(f"{'':<{width}}  note: {note}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties passed in {elapsed:.1f} s")
    for r in failed:
        replay = dict(r.violation, property=r.name, seed=args.seed)
        print("violation: " + json.dumps(replay, sort_keys=True), file=sys.stderr)
    if args.report:
        m = manifest(
            "verify",
            qubits_min=args.qubits_min,
            qubits_max=args.qubits_max,
            tolerance=args.tolerance,
            seed=args.seed,
            n_blocks=args.blocks,
        )
        report = {
            "manifest": m,
            "properties": [
                {"name": r.name, "passed": r.passed, "cases": r.cases, "worst": r.worst, "violation": r.violation, "notes": r.notes}
                for r in results
            ],
        }
        write_atomic(Path(args.report), json.dumps(report, indent=2) + "\n")
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_threshold(args) -> int:
    report = bound_report(args.qubits, args.purity)
    if args.format == "json":
        m = manifest("threshold", n_qubits=args.qubits, purity=args.purity)
        body = {f.name: round_number(getattr(report, f.name)) for f in fields(report)}
        print(json.dumps({"manifest": m, "report": body}, indent=2))
        return EXIT_OK
    rows = [
        ("n_qubits", report.n_qubits),
        ("N", report.N),
        ("initial_entropy_bits", report.initial_entropy),
        ("threshold_entropy_bits", report.threshold_entropy),
        ("min_queries", report.min_queries),
        ("step_bound_bits", report.step_bound),
        ("no_speedup_sufficient", "true" if report.no_speedup_sufficient else "false"),
    ]
    for key, value in rows:
        print(f"{key:<24}{value if isinstance(value, str) else fmt_number(value)}")
    return EXIT_OK


COMMANDS = {
    "trace": cmd_trace,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "threshold": cmd_threshold,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (InvalidArgumentError, UsageError) as exc:
        print(f"qcapacity {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailureError as exc:
        print(f"qcapacity {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
