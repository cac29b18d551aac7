"""cluster-entropy command line.

Exit codes: 0 success, 1 I/O error, 2 parse/validation error, 3 domain error
(for instance a manufacturer missing from the compatibility matrix).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import (
    ConsistencyReport,
    CorrelationReport,
    consistency_check,
    correlate_all,
    efficiency_ranking,
    sensitivity_sweep,
)
from .core import PenaltyParams, cluster_entropy, machine_entropy
from .dataset import (
    BENCHMARKS,
    UNITS,
    BenchmarkTable,
    bundled_compatibility_matrix,
    bundled_top10,
    canonical_benchmark,
    load_benchmarks,
    load_cluster_spec,
    load_machines,
    load_matrix,
)
from .errors import EntropyError
from .stats import pearson_r
from .svgplot import Panel, render_svg

MATRIX_ENV = "CLUSTER_ENTROPY_MATRIX"


def _num(v: float | None) -> str:
    return "-" if v is None else f"{v:.4f}"


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _matrix(args):
    path = args.matrix or os.environ.get(MATRIX_ENV)
    if path:
        return load_matrix(path), str(path)
    return bundled_compatibility_matrix(), "bundled:table1"


def _benchmarks(args) -> BenchmarkTable:
    return load_benchmarks(args.benchmarks) if args.benchmarks else bundled_top10()


def _params(args) -> PenaltyParams:
    return PenaltyParams(args.coefficient, args.log_base)


def _emit(args, text: str, payload: dict, name: str) -> None:
    out = _dumps(payload) if args.json else text + "\n"
    sys.stdout.write(out)
    if args.out:
        directory = Path(args.out)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / f"{name}.{'json' if args.json else 'txt'}").write_text(out, encoding="utf-8")


# -- text renderers -------------------------------------------------------------

def format_machine(result) -> str:
    first, second = result.argmax_edge
    rows = [
        [e.first.label, e.second.label, f"{e.compatibility:.4f}", f"{e.value:.4f}"]
        for e in result.edge_values
    ]
    return "\n".join([
        f"machine: {result.machine}",
        f"S_computer: {result.value:.4f}",
        f"argmax edge: {first.label} -- {second.label}",
        _table(["component", "component", "C", "I(u,v)"], rows),
    ])


def format_cluster(result, params: PenaltyParams) -> str:
    rows = [
        [m.machine, str(m.count), f"{m.entropy:.4f}", f"{m.penalty:.4f}", f"{m.total:.4f}"]
        for m in result.per_machine
    ]
    base = "ln" if params.log_base == "natural" else "log10"
    return "\n".join([
        f"cluster: {result.cluster}",
        f"penalty: {params.coefficient:g} * {base}(1 + S)",
        f"S_parallel: {result.value:.4f}",
        _table(["machine", "count", "S_computer", "P(S)", "contribution"], rows),
    ])


def format_correlations(report: CorrelationReport) -> str:
    rows = [
        [r.benchmark, str(r.n), _num(r.r), _num(r.t_statistic), _num(r.p_value), r.label]
        for r in report.results
    ]
    lines = [
        f"source: {report.source}  alpha: {report.alpha:g}",
        _table(["Benchmark", "n", "r", "t", "p", "Interpretation"], rows),
    ]
    for s in report.skipped:
        lines.append(f"skipped {s.benchmark}: {s.reason}")
    return "\n".join(lines)


def format_consistency(report: ConsistencyReport) -> str:
    rows = [
        [
            r.benchmark, _num(r.published_r), _num(r.computed_r), _num(r.delta_r),
            _num(r.published_p), _num(r.computed_p), _num(r.delta_p), ",".join(r.flags) or "-",
        ]
        for r in report.rows
    ]
    return _table(
        ["Benchmark", "pub r", "calc r", "|dr|", "pub p", "calc p", "|dp|", "flags"], rows
    )


def format_ranking(ranking) -> str:
    rows = [
        [str(i + 1), r.system, f"{r.entropy:.4f}", f"{r.value:.4f}", f"{r.ratio:.4f}"]
        for i, r in enumerate(ranking.rows)
    ]
    lines = [
        f"efficiency ranking for {ranking.benchmark} (entropy / value, lower is better)",
        _table(["#", "system", "entropy", ranking.benchmark, "ratio"], rows),
    ]
    for system, reason in ranking.excluded:
        lines.append(f"excluded {system}: {reason}")
    return "\n".join(lines)


def format_sensitivity(rows, delta: float) -> str:
    body = [
        [
            f"{r.cell[0]}/{r.cell[1]}", f"{r.delta:+g}", f"{r.original:.4f}", f"{r.perturbed:.4f}",
            "yes" if r.clamped else "no", f"{r.cluster_delta:+.4f}",
        ]
        for r in rows
    ]
    return "\n".join([
        f"sensitivity sweep, delta = {delta:g}",
        _table(["cell", "shift", "C", "C'", "clamped", "dS_parallel"], body),
    ])


# -- plots ----------------------------------------------------------------------

def benchmark_panel(table: BenchmarkTable, benchmark: str) -> Panel:
    bench = canonical_benchmark(benchmark)
    rows = table.paired(bench)
    if not rows:
        raise EntropyError(f"no {bench} values in {table.source}")
    title = f"Entropy vs {bench}"
    if len(rows) >= 3:
        try:
            r = pearson_r([e for _, e, _ in rows], [v for _, _, v in rows])
            title += f" (r = {r:.4f})"
        except EntropyError:
            pass
    return Panel(title, "Entropy (dimensionless)", f"{bench} ({UNITS[bench]})", tuple(rows))


def plot_csv(table: BenchmarkTable, benchmarks: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if len(benchmarks) == 1:
        writer.writerow(["system", "entropy", "value"])
        writer.writerows((s, repr(e), repr(v)) for s, e, v in table.paired(benchmarks[0]))
    else:
        writer.writerow(["benchmark", "system", "entropy", "value"])
        for b in benchmarks:
            writer.writerows((b, s, repr(e), repr(v)) for s, e, v in table.paired(b))
    return buf.getvalue()


# -- commands -------------------------------------------------------------------

def cmd_machine(args) -> int:
    matrix, source = _matrix(args)
    results = [machine_entropy(m, matrix) for m in load_machines(args.spec)]
    text = "\n\n".join(format_machine(r) for r in results)
    _emit(args, text, {"matrix": source, "machines": [r.to_dict() for r in results]}, "machine")
    return 0


def cmd_cluster(args) -> int:
    matrix, source = _matrix(args)
    params = _params(args)
    result = cluster_entropy(load_cluster_spec(args.spec), matrix, params)
    payload = {
        "matrix": source,
        "penalty": {"coefficient": params.coefficient, "log_base": params.log_base},
        **result.to_dict(),
    }
    _emit(args, format_cluster(result, params), payload, "cluster")
    return 0


def cmd_correlate(args) -> int:
    report = correlate_all(_benchmarks(args), args.alpha)
    _emit(args, format_correlations(report), report.to_dict(), "correlate")
    return 0


def cmd_sensitivity(args) -> int:
    matrix, source = _matrix(args)
    rows = sensitivity_sweep(load_cluster_spec(args.spec), matrix, args.delta, _params(args))
    payload = {"matrix": source, "delta": args.delta, "rows": [r.to_dict() for r in rows]}
    _emit(args, format_sensitivity(rows, args.delta), payload, "sensitivity")
    return 0


def cmd_plot(args) -> int:
    table = _benchmarks(args)
    if args.all:
        benchmarks = [b for b in BENCHMARKS if table.paired(b)]
    elif args.benchmark:
        benchmarks = [canonical_benchmark(args.benchmark)]
    else:
        raise EntropyError("choose a benchmark with --benchmark NAME or use --all")
    if args.format == "csv":
        content = plot_csv(table, benchmarks)
    else:
        content = render_svg([benchmark_panel(table, b) for b in benchmarks], columns=4 if args.all else 1)
    if not args.out:
        sys.stdout.write(content)
        return 0
    out = Path(args.out)
    if out.suffix.lower() not in (".svg", ".csv"):
        out.mkdir(parents=True, exist_ok=True)
        stem = "entropy_vs_all" if args.all else f"entropy_vs_{benchmarks[0]}"
        out = out / f"{stem}.{args.format}"
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(content, encoding="utf-8")
    print(out)
    return 0


def reproduce(out_dir, table: BenchmarkTable | None = None, alpha: float = 0.05) -> list[Path]:
    """Write the full correlation/audit bundle; returns the written paths."""
    table = table or bundled_top10()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    correlation = correlate_all(table, alpha)
    consistency = consistency_check(table, alpha=alpha)
    rankings = [efficiency_ranking(table, b) for b in BENCHMARKS if any(v > 0 for *_, v in table.paired(b))]
    header = {"version": __version__, "source": table.source}

    written = []

    def write(name: str, content: str):
        path = out / name
        path.write_text(content, encoding="utf-8")
        written.append(path)

    write("correlation.json", _dumps({**header, **correlation.to_dict()}))
    write("consistency.json", _dumps({**header, **consistency.to_dict()}))
    write("efficiency.json", _dumps({**header, "rankings": [r.to_dict() for r in rankings]}))
    for b in BENCHMARKS:
        if table.paired(b):
            write(f"entropy_vs_{b}.svg", render_svg([benchmark_panel(table, b)]))

    summary = [
        f"cluster-entropy {__version__} reproduction bundle",
        f"data source: {table.source}",
        "",
        "Correlations (entropy vs benchmark)",
        format_correlations(correlation),
        "",
        "Consistency against published statistics",
        format_consistency(consistency),
        "",
    ]
    for row in consistency.rows:
        if row.flags:
            summary.append(f"{row.benchmark}: {', '.join(row.flags)}")
    summary.append("")
    for ranking in rankings:
        summary.append(format_ranking(ranking))
        summary.append("")
    write("summary.txt", "\n".join(summary).rstrip() + "\n")
    return written


def cmd_reproduce(args) -> int:
    out = args.out or "reproduction"
    paths = reproduce(out, _benchmarks(args), args.alpha)
    if args.json:
        sys.stdout.write(_dumps({"out": str(out), "files": [p.name for p in paths]}))
    else:
        for p in paths:
            print(p)
    return 0


def _common(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--matrix", metavar="PATH", default=default,
                        help=f"compatibility matrix (CSV/JSON); defaults to ${MATRIX_ENV} or the bundled table")
    parser.add_argument("--json", action="store_true", default=default, help="machine-readable output")
    parser.add_argument("--out", metavar="DIR", default=default, help="output directory (or file for plot)")


def _penalty_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--log-base", choices=["natural", "e", "10"], default="natural")
    parser.add_argument("--coefficient", type=float, default=3.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cluster-entropy",
        description="Component-incompatibility entropy of machines and clusters, and its "
                    "correlation with HPC benchmark results.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(parser, None)
    parser.set_defaults(json=False)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("machine", parents=[common], help="entropy of individual machines")
    p.add_argument("spec", help="machine or cluster spec (JSON)")
    p.set_defaults(func=cmd_machine)

    p = sub.add_parser("cluster", parents=[common], help="entropy of a cluster")
    p.add_argument("spec", help="cluster spec (JSON)")
    _penalty_flags(p)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("correlate", parents=[common], help="entropy vs benchmark correlations")
    p.add_argument("benchmarks", nargs="?", help="benchmark table (CSV/JSON); bundled Top-10 if omitted")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("reproduce", parents=[common], help="write the full correlation and audit bundle")
    p.add_argument("benchmarks", nargs="?", help="benchmark table (CSV/JSON); bundled Top-10 if omitted")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("plot", parents=[common], help="entropy vs benchmark scatter plot")
    p.add_argument("benchmarks", nargs="?", help="benchmark table (CSV/JSON); bundled Top-10 if omitted")
    p.add_argument("--benchmark", help="benchmark column to plot")
    p.add_argument("--all", action="store_true", help="grid of every available benchmark")
    p.add_argument("--format", choices=["svg", "csv"], default="svg")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("sensitivity", parents=[common], help="matrix perturbation sweep for a cluster")
    p.add_argument("spec", help="cluster spec (JSON)")
    p.add_argument("--delta", type=float, default=0.05)
    _penalty_flags(p)
    p.set_defaults(func=cmd_sensitivity)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EntropyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
