"""Correlation runs, audits against published values, rankings and sensitivity sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    ClusterSpec,
    CompatibilityMatrix,
    PenaltyParams,
    cluster_entropy,
    machine_entropy,
    matrix_cells_used,
)
from .dataset import (
    BENCHMARKS,
    PUBLISHED_CORRELATIONS,
    PUBLISHED_SAMPLE_SIZE,
    BenchmarkTable,
    PublishedCorrelation,
    canonical_benchmark,
)
from .errors import UnknownBenchmark, ValidationError
from .stats import CorrelationResult, SampleSeries, correlate, interpret, p_value_two_sided

# Consistency flags
INVALID_PAPER_P = "INVALID_PAPER_P"
P_INCONSISTENT_WITH_R = "P_INCONSISTENT_WITH_R"
LABEL_NORMALIZED = "LABEL_NORMALIZED"
NOT_COMPUTED = "NOT_COMPUTED"

# Published r values carry four decimals; p recomputed from them may drift by
# a few 1e-4, so anything beyond this is a real disagreement.
P_AGREEMENT_TOLERANCE = 1e-3


@dataclass(frozen=True)
class SkippedBenchmark:
    benchmark: str
    n: int
    reason: str


@dataclass(frozen=True)
class CorrelationReport:
    results: tuple[CorrelationResult, ...]
    skipped: tuple[SkippedBenchmark, ...]
    n_per_benchmark: dict
    source: str
    alpha: float

    def result(self, benchmark: str) -> CorrelationResult | None:
        benchmark = canonical_benchmark(benchmark)
        for r in self.results:
            if r.benchmark == benchmark:
                return r
        return None

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "alpha": self.alpha,
            "results": [r.to_dict() for r in self.results],
            "skipped": [{"benchmark": s.benchmark, "n": s.n, "reason": s.reason} for s in self.skipped],
            "n_per_benchmark": dict(self.n_per_benchmark),
        }


def correlate_all(table: BenchmarkTable, alpha: float = 0.05) -> CorrelationReport:
    """Entropy vs. every benchmark, pairwise deletion, canonical benchmark order."""
    results, skipped, counts = [], [], {}
    for bench in BENCHMARKS:
        rows = table.paired(bench)
        counts[bench] = len(rows)
        if len(rows) < 3:
            skipped.append(SkippedBenchmark(bench, len(rows), f"InsufficientData: {len(rows)} paired observations (need 3)"))
            continue
        x = SampleSeries("Entropy", [e for _, e, _ in rows])
        y = SampleSeries(bench, [v for _, _, v in rows])
        try:
            results.append(correlate(x, y, alpha))
        except ValidationError as exc:
            skipped.append(SkippedBenchmark(bench, len(rows), f"{type(exc).__name__}: {exc}"))
    return CorrelationReport(tuple(results), tuple(skipped), counts, table.source, alpha)


@dataclass(frozen=True)
class ConsistencyRow:
    benchmark: str
    published_r: float
    published_p: float
    published_label: str
    computed_r: float | None
    computed_p: float | None
    computed_label: str | None
    delta_r: float | None
    delta_p: float | None
    p_from_published_r: float | None
    normalized_label: str
    flags: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "benchmark": self.benchmark,
            "published_r": self.published_r,
            "published_p": self.published_p,
            "published_label": self.published_label,
            "computed_r": self.computed_r,
            "computed_p": self.computed_p,
            "computed_label": self.computed_label,
            "delta_r": self.delta_r,
            "delta_p": self.delta_p,
            "p_from_published_r": self.p_from_published_r,
            "normalized_label": self.normalized_label,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class ConsistencyReport:
    rows: tuple[ConsistencyRow, ...]
    source: str
    published_n: int

    def row(self, benchmark: str) -> ConsistencyRow:
        benchmark = canonical_benchmark(benchmark)
        for r in self.rows:
            if r.benchmark == benchmark:
                return r
        raise KeyError(benchmark)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "published_n": self.published_n,
            "rows": [r.to_dict() for r in self.rows],
        }


def consistency_check(
    table: BenchmarkTable,
    published: Sequence[PublishedCorrelation] = PUBLISHED_CORRELATIONS,
    alpha: float = 0.05,
    published_n: int = PUBLISHED_SAMPLE_SIZE,
) -> ConsistencyReport:
    """Recompute correlations from ``table`` and set them beside the published ones.

    Both sides are reported as-is. Flags:

    * INVALID_PAPER_P: published p-value outside [0, 1]
    * P_INCONSISTENT_WITH_R: published p disagrees with the t-test on the published r
    * LABEL_NORMALIZED: published label differs from the strict alpha rule
    * NOT_COMPUTED: the table has too few usable pairs for this benchmark
    """
    report = correlate_all(table, alpha)
    rows = []
    for claim in published:
        flags = []
        p_valid = 0.0 <= claim.p <= 1.0
        if not p_valid:
            flags.append(INVALID_PAPER_P)
        p_from_r = p_value_two_sided(claim.r, published_n) if published_n >= 3 else None
        if p_from_r is not None and abs(p_from_r - claim.p) > P_AGREEMENT_TOLERANCE:
            flags.append(P_INCONSISTENT_WITH_R)
        # out-of-range p is still >= alpha, which is what the label rule needs
        normalized = interpret(claim.r, claim.p, alpha)
        if normalized != claim.label:
            flags.append(LABEL_NORMALIZED)

        computed = report.result(claim.benchmark)
        if computed is None:
            flags.append(NOT_COMPUTED)
            rows.append(ConsistencyRow(
                claim.benchmark, claim.r, claim.p, claim.label,
                None, None, None, None, None, p_from_r, normalized, tuple(flags),
            ))
            continue
        rows.append(ConsistencyRow(
            claim.benchmark, claim.r, claim.p, claim.label,
            computed.r, computed.p_value, computed.label,
            abs(computed.r - claim.r),
            abs(computed.p_value - claim.p),
            p_from_r, normalized, tuple(flags),
        ))
    return ConsistencyReport(tuple(rows), table.source, published_n)


@dataclass(frozen=True)
class EfficiencyRow:
    system: str
    entropy: float
    value: float
    ratio: float

    def to_dict(self) -> dict:
        return {"system": self.system, "entropy": self.entropy, "value": self.value, "ratio": self.ratio}


@dataclass(frozen=True)
class EfficiencyRanking:
    benchmark: str
    rows: tuple[EfficiencyRow, ...]
    excluded: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "benchmark": self.benchmark,
            "rows": [r.to_dict() for r in self.rows],
            "excluded": [{"system": s, "reason": why} for s, why in self.excluded],
        }


def efficiency_ranking(table: BenchmarkTable, benchmark: str) -> EfficiencyRanking:
    """Systems ordered by entropy / benchmark value, most efficient (lowest) first."""
    bench = canonical_benchmark(benchmark)
    rows, excluded = [], []
    for rec in table.records:
        value = rec.benchmarks.get(bench)
        if value is None:
            excluded.append((rec.name, f"no {bench} value"))
        elif value <= 0:
            excluded.append((rec.name, f"{bench} value is {value!r}; ratio undefined"))
        else:
            rows.append(EfficiencyRow(rec.name, rec.entropy, value, rec.entropy / value))
    if not rows:
        raise UnknownBenchmark(f"benchmark {bench} has no usable values in {table.source}")
    rows.sort(key=lambda r: r.ratio)  # stable: ties keep table order
    return EfficiencyRanking(bench, tuple(rows), tuple(excluded))


@dataclass(frozen=True)
class SensitivityRow:
    cell: tuple[str, str]
    delta: float
    original: float
    perturbed: float
    clamped: bool
    machine_deltas: tuple[tuple[str, float], ...]
    cluster_delta: float

    def to_dict(self) -> dict:
        return {
            "cell": list(self.cell),
            "delta": self.delta,
            "original": self.original,
            "perturbed": self.perturbed,
            "clamped": self.clamped,
            "machine_deltas": [{"machine": m, "delta": d} for m, d in self.machine_deltas],
            "cluster_delta": self.cluster_delta,
        }


def sensitivity_sweep(
    cluster: ClusterSpec,
    matrix: CompatibilityMatrix,
    delta: float,
    params: PenaltyParams = PenaltyParams(),
    cells: Iterable[tuple[str, str]] | None = None,
) -> list[SensitivityRow]:
    """Shift each compatibility cell by +delta and -delta and record the entropy changes.

    By default every cell touched by some machine edge is swept; ``cells``
    restricts or extends that set.  Rows are ordered by |cluster_delta|,
    largest first.
    """
    if not (0 < delta < 1):
        raise ValidationError(f"delta must lie in (0, 1), got {delta!r}")
    machines = [g.machine for g in cluster.groups]
    if cells is None:
        cells = matrix_cells_used(machines, matrix)
    base_cluster = cluster_entropy(cluster, matrix, params)
    base_machine = [machine_entropy(m, matrix).value for m in machines]

    rows = []
    for first, second in cells:
        first, second = matrix.canonical(first), matrix.canonical(second)
        original = matrix.score(first, second)
        for signed in (+delta, -delta):
            target = original + signed
            value = min(1.0, max(0.0, target))
            perturbed = matrix.with_score(first, second, value)
            new_cluster = cluster_entropy(cluster, perturbed, params)
            mdeltas = tuple(
                (m.name, machine_entropy(m, perturbed).value - before)
                for m, before in zip(machines, base_machine)
            )
            rows.append(SensitivityRow(
                (first, second), signed, original, value, value != target,
                mdeltas, new_cluster.value - base_cluster.value,
            ))
    rows.sort(key=lambda r: -abs(r.cluster_delta))
    return rows
