"""Bundled reference data and file ingestion.

File formats
------------
Cluster spec (JSON)::

    {"name": "demo",
     "groups": [{"count": 4,
                 "machine": {"name": "node",
                             "components": [{"kind": "CPU", "manufacturer": "AMD"},
                                            {"kind": "GPU", "manufacturer": "AMD",
                                             "base_value": 10}]}}]}

``count`` defaults to 1 and ``base_value`` to 10.  Unknown keys are rejected.

Compatibility matrix: CSV whose first row and first column hold manufacturer
names, or JSON ``{"manufacturers": [...], "scores": [[...]], "epsilon": 1e-9}``.
Names go through the normal CSV quoting rules, so "HPE/Cray" needs no
escaping; "HPE-Cray" is accepted as an alias.

Benchmarks: CSV with header ``System,Entropy,LINPACK,STREAM,MLPerf,HPCG,HPCC,Graph500,HPCAI``
(benchmark columns optional, blank cell = missing) or JSON
``{"source": ..., "records": [{"name": ..., "entropy": ..., "benchmarks": {...}}]}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

from .core import (
    ClusterSpec,
    CompatibilityMatrix,
    ComponentSpec,
    DEFAULT_BASE_VALUE,
    DEFAULT_EPSILON,
    MachineGroup,
    MachineSpec,
    manufacturer_key,
)
from .errors import ParseError, SchemaError, ValidationError, UnknownBenchmark

BENCHMARKS = ("LINPACK", "STREAM", "MLPerf", "HPCG", "HPCC", "Graph500", "HPCAI")

UNITS = {
    "LINPACK": "EFlop/s",
    "STREAM": "TB/s",
    "MLPerf": "EFlop/s",
    "HPCG": "PFlop/s",
    "HPCC": "GFlop/s",
    "Graph500": "GTEPS",
    "HPCAI": "score",
}

_BENCHMARK_ALIASES = {
    "mlperf hpc": "MLPerf",
    "mlperf-hpc": "MLPerf",
    "graph 500": "Graph500",
    "graph-500": "Graph500",
    "hpc-ai": "HPCAI",
    "hpc ai": "HPCAI",
    "hpl": "LINPACK",
}


def canonical_benchmark(name: str) -> str:
    key = " ".join(str(name).split()).casefold()
    for canonical in BENCHMARKS:
        if canonical.casefold() == key:
            return canonical
    if key in _BENCHMARK_ALIASES:
        return _BENCHMARK_ALIASES[key]
    raise UnknownBenchmark(f"unknown benchmark {name!r} (expected one of {', '.join(BENCHMARKS)})")


# -- bundled tables -----------------------------------------------------------

_MATRIX_NAMES = ("AMD", "Intel", "NVIDIA", "IBM", "Fujitsu", "HPE/Cray")
_MATRIX_SCORES = (
    (0.95, 0.82, 0.81, 0.79, 0.75, 0.90),
    (0.82, 0.88, 0.82, 0.78, 0.74, 0.85),
    (0.81, 0.82, 0.92, 0.79, 0.73, 0.87),
    (0.79, 0.78, 0.79, 0.85, 0.72, 0.80),
    (0.75, 0.74, 0.73, 0.72, 0.98, 0.76),
    (0.90, 0.85, 0.87, 0.80, 0.76, 0.95),
)

# name, entropy, then BENCHMARKS in order
_TOP10 = (
    ("El Capitan", 4.2, 1.742, 45.2, 11.8, 2.79, 3.21, 8.9, 15.2),
    ("Frontier", 4.6, 1.206, 41.8, 9.95, 14.05, 3.86, 15.9, 12.8),
    ("Aurora", 5.1, 1.012, 38.5, 11.6, 5.60, 2.97, 12.1, 18.9),
    ("Jupiter", 4.8, 0.424, 28.3, 5.2, 3.2, 2.45, 6.8, 8.1),
    ("Eagle", 3.9, 0.561, 32.1, 7.8, 2.1, 2.89, 9.2, 11.7),
    ("HPC6", 4.7, 0.380, 26.8, 4.9, 2.8, 2.12, 5.9, 7.4),
    ("Fugaku", 8.9, 0.442, 44.2, 6.7, 16.0, 2.93, 4.8, 9.3),
    ("Alps", 5.2, 0.270, 22.4, 3.8, 2.4, 1.87, 4.2, 6.8),
    ("LUMI", 4.3, 0.380, 35.6, 5.1, 4.2, 2.56, 7.1, 8.9),
    ("Leonardo", 4.9, 0.304, 29.7, 4.3, 3.8, 2.31, 6.3, 7.6),
)


@dataclass(frozen=True)
class PublishedCorrelation:
    benchmark: str
    r: float
    p: float
    label: str


# Published entropy-vs-benchmark statistics, kept verbatim (including the
# out-of-range STREAM p-value) so the consistency audit can flag them.
PUBLISHED_CORRELATIONS = (
    PublishedCorrelation("LINPACK", -0.7832, 0.0077, "Strong negative correlation"),
    PublishedCorrelation("STREAM", -0.4521, 10.1890, "Moderate negative, not significant"),
    PublishedCorrelation("MLPerf", -0.6234, 0.0540, "Moderate negative correlation"),
    PublishedCorrelation("HPCG", +0.2145, 0.5520, "Weak positive, not significant"),
    PublishedCorrelation("HPCC", -0.5890, 0.0730, "Moderate negative correlation"),
    PublishedCorrelation("Graph500", -0.3410, 0.3350, "Weak negative, not significant"),
    PublishedCorrelation("HPCAI", -0.4890, 0.1510, "Moderate negative, not significant"),
)
PUBLISHED_SAMPLE_SIZE = 10


@dataclass(frozen=True)
class SystemRecord:
    name: str
    entropy: float
    benchmarks: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.name, str) or not self.name.strip():
            raise ValidationError("system name must be a non-empty string")
        if not (math.isfinite(self.entropy) and self.entropy >= 0):
            raise ValidationError(f"{self.name}: entropy must be finite and >= 0, got {self.entropy!r}")
        values = {}
        for key, value in dict(self.benchmarks).items():
            name = canonical_benchmark(key)
            if name in values:
                raise ValidationError(f"{self.name}: benchmark {name} given twice")
            value = float(value)
            if not (math.isfinite(value) and value >= 0):
                raise ValidationError(f"{self.name}: {name} must be finite and >= 0, got {value!r}")
            values[name] = value
        ordered = {b: values[b] for b in BENCHMARKS if b in values}
        object.__setattr__(self, "benchmarks", MappingProxyType(ordered))

    def to_dict(self) -> dict:
        return {"name": self.name, "entropy": self.entropy, "benchmarks": dict(self.benchmarks)}


@dataclass(frozen=True)
class BenchmarkTable:
    records: tuple[SystemRecord, ...]
    source: str = "memory"

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        seen = set()
        for rec in records:
            if rec.name in seen:
                raise ValidationError(f"duplicate system name {rec.name!r}")
            seen.add(rec.name)

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, name: str) -> SystemRecord:
        for rec in self.records:
            if rec.name == name:
                return rec
        raise KeyError(name)

    @property
    def benchmarks_present(self) -> tuple[str, ...]:
        return tuple(b for b in BENCHMARKS if any(b in r.benchmarks for r in self.records))

    def paired(self, benchmark: str) -> list[tuple[str, float, float]]:
        """(system, entropy, value) rows where the benchmark is present."""
        benchmark = canonical_benchmark(benchmark)
        return [
            (r.name, r.entropy, r.benchmarks[benchmark])
            for r in self.records
            if benchmark in r.benchmarks
        ]

    def to_dict(self) -> dict:
        return {"source": self.source, "records": [r.to_dict() for r in self.records]}


def bundled_compatibility_matrix() -> CompatibilityMatrix:
    return CompatibilityMatrix(_MATRIX_NAMES, _MATRIX_SCORES, DEFAULT_EPSILON)


def bundled_top10() -> BenchmarkTable:
    records = tuple(
        SystemRecord(row[0], row[1], dict(zip(BENCHMARKS, row[2:]))) for row in _TOP10
    )
    return BenchmarkTable(records, "bundled:table2")


# -- helpers ------------------------------------------------------------------

def _read_text(path) -> str:
    # OSError propagates untouched; the CLI maps it to the I/O exit code
    return Path(path).read_text(encoding="utf-8")


def _is_json(path, text: str) -> bool:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return True
    if suffix in (".csv", ".tsv", ".txt"):
        return False
    return text.lstrip().startswith(("{", "["))


def _load_json(path, text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (column {exc.colno})", path=str(path), line=exc.lineno) from None


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {value!r}", field=where)
    if not math.isfinite(value):
        raise SchemaError(f"expected a finite number, got {value!r}", field=where)
    return float(value)


def _string(value: Any, where: str) -> str:
    if not isinstance(value, str) or not value.strip():
        raise SchemaError(f"expected a non-empty string, got {value!r}", field=where)
    return value


def _object(value: Any, where: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"expected an object, got {type(value).__name__}", field=where)
    missing = sorted(required - value.keys())
    if missing:
        raise SchemaError(f"missing field(s) {', '.join(missing)}", field=where)
    unknown = sorted(value.keys() - required - optional)
    if unknown:
        raise SchemaError(f"unknown field(s) {', '.join(unknown)}", field=where)
    return value


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"expected a list, got {type(value).__name__}", field=where)
    return value


def _with_context(where: str, fn, *args):
    # domain constructors raise plain-message ValidationErrors; prefix the field path
    try:
        return fn(*args)
    except ValidationError as exc:
        raise type(exc)(f"{where}: {exc}") from None


# -- cluster specs --------------------------------------------------------------

def _parse_component(obj: Any, where: str) -> ComponentSpec:
    obj = _object(obj, where, {"kind", "manufacturer"}, {"base_value"})
    kind = _string(obj["kind"], f"{where}.kind")
    manufacturer = _string(obj["manufacturer"], f"{where}.manufacturer")
    base = _number(obj["base_value"], f"{where}.base_value") if "base_value" in obj else DEFAULT_BASE_VALUE
    return _with_context(where, ComponentSpec, kind, manufacturer, base)


def parse_machine(obj: Any, where: str = "machine") -> MachineSpec:
    obj = _object(obj, where, {"name", "components"})
    name = _string(obj["name"], f"{where}.name")
    comps = _list(obj["components"], f"{where}.components")
    parsed = tuple(_parse_component(c, f"{where}.components[{i}]") for i, c in enumerate(comps))
    return _with_context(where, MachineSpec, name, parsed)


def parse_cluster(obj: Any, where: str = "cluster") -> ClusterSpec:
    obj = _object(obj, where, {"name", "groups"})
    name = _string(obj["name"], f"{where}.name")
    groups = []
    for i, g in enumerate(_list(obj["groups"], f"{where}.groups")):
        gw = f"{where}.groups[{i}]"
        g = _object(g, gw, {"machine"}, {"count"})
        count = g.get("count", 1)
        if isinstance(count, bool) or not isinstance(count, int):
            raise SchemaError(f"expected an integer, got {count!r}", field=f"{gw}.count")
        machine = parse_machine(g["machine"], f"{gw}.machine")
        groups.append(_with_context(gw, MachineGroup, machine, count))
    return _with_context(where, ClusterSpec, name, tuple(groups))


def load_cluster_spec(path) -> ClusterSpec:
    text = _read_text(path)
    return parse_cluster(_load_json(path, text))


def load_machines(path) -> list[MachineSpec]:
    """Machines from a file holding either one machine object or a whole cluster spec."""
    text = _read_text(path)
    obj = _load_json(path, text)
    if isinstance(obj, dict) and "groups" in obj:
        return [g.machine for g in parse_cluster(obj).groups]
    return [parse_machine(obj)]


def cluster_to_dict(cluster: ClusterSpec) -> dict:
    return {
        "name": cluster.name,
        "groups": [
            {
                "count": g.count,
                "machine": machine_to_dict(g.machine),
            }
            for g in cluster.groups
        ],
    }


def machine_to_dict(machine: MachineSpec) -> dict:
    return {
        "name": machine.name,
        "components": [
            {"kind": c.kind.value, "manufacturer": c.manufacturer, "base_value": c.base_value}
            for c in machine.components
        ],
    }


def save_cluster_spec(cluster: ClusterSpec, path) -> None:
    Path(path).write_text(json.dumps(cluster_to_dict(cluster), indent=2) + "\n", encoding="utf-8")


# -- compatibility matrices -----------------------------------------------------

def _float_cell(text: str, path, line: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"{what}: {text!r} is not a number", path=str(path), line=line) from None
    if not math.isfinite(value):
        raise ParseError(f"{what}: {text!r} is not finite", path=str(path), line=line)
    return value


def _csv_rows(text: str) -> list[tuple[int, list[str]]]:
    reader = csv.reader(io.StringIO(text))
    rows = []
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        rows.append((reader.line_num, [cell.strip() for cell in row]))
    return rows


def _parse_matrix_csv(path, text: str) -> CompatibilityMatrix:
    rows = _csv_rows(text)
    if not rows:
        raise ParseError("empty matrix file", path=str(path))
    _, header = rows[0]
    names = header[1:]
    if not names:
        raise ParseError("header row lists no manufacturers", path=str(path), line=rows[0][0])
    col_index = {manufacturer_key(n): i for i, n in enumerate(names)}
    scores: list[list[float] | None] = [None] * len(names)
    for line, row in rows[1:]:
        if len(row) != len(names) + 1:
            raise ParseError(
                f"expected {len(names) + 1} cells, found {len(row)}", path=str(path), line=line
            )
        key = manufacturer_key(row[0])
        if key not in col_index:
            raise SchemaError(f"row manufacturer {row[0]!r} (line {line}) is not in the header", field="matrix")
        i = col_index[key]
        if scores[i] is not None:
            raise SchemaError(f"manufacturer {row[0]!r} has two rows (line {line})", field="matrix")
        scores[i] = [_float_cell(c, path, line, f"C({row[0]},{names[j]})") for j, c in enumerate(row[1:])]
    missing = [names[i] for i, s in enumerate(scores) if s is None]
    if missing:
        raise SchemaError(f"no row for {', '.join(missing)}", field="matrix")
    return CompatibilityMatrix(tuple(names), tuple(tuple(s) for s in scores))


def parse_matrix(obj: Any) -> CompatibilityMatrix:
    obj = _object(obj, "matrix", {"manufacturers", "scores"}, {"epsilon"})
    names = [_string(n, f"matrix.manufacturers[{i}]") for i, n in enumerate(_list(obj["manufacturers"], "matrix.manufacturers"))]
    rows = []
    for i, row in enumerate(_list(obj["scores"], "matrix.scores")):
        row = _list(row, f"matrix.scores[{i}]")
        rows.append(tuple(_number(v, f"matrix.scores[{i}][{j}]") for j, v in enumerate(row)))
    eps = _number(obj["epsilon"], "matrix.epsilon") if "epsilon" in obj else DEFAULT_EPSILON
    return CompatibilityMatrix(tuple(names), tuple(rows), eps)


def load_matrix(path) -> CompatibilityMatrix:
    text = _read_text(path)
    if _is_json(path, text):
        return parse_matrix(_load_json(path, text))
    return _parse_matrix_csv(path, text)


def save_matrix(matrix: CompatibilityMatrix, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(matrix.to_dict(), indent=2) + "\n", encoding="utf-8")
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["Manufacturer", *matrix.manufacturers])
    for name, row in zip(matrix.manufacturers, matrix.scores):
        writer.writerow([name, *(repr(v) for v in row)])
    path.write_text(buf.getvalue(), encoding="utf-8")


# -- benchmark tables -----------------------------------------------------------

def _parse_benchmarks_csv(path, text: str) -> BenchmarkTable:
    rows = _csv_rows(text)
    if not rows:
        raise ParseError("empty benchmark file", path=str(path))
    header_line, header = rows[0]
    lowered = [h.casefold() for h in header]
    if len(header) < 2 or lowered[0] != "system" or lowered[1] != "entropy":
        raise SchemaError("header must start with System,Entropy", field="header")
    columns = []
    for h in header[2:]:
        try:
            columns.append(canonical_benchmark(h))
        except UnknownBenchmark as exc:
            raise SchemaError(str(exc), field="header") from None
    if len(set(columns)) != len(columns):
        raise SchemaError("duplicate benchmark column", field="header")

    records = []
    for line, row in rows[1:]:
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(row)}", path=str(path), line=line)
        name = row[0]
        if not name:
            raise ParseError("empty system name", path=str(path), line=line)
        entropy = _float_cell(row[1], path, line, "Entropy")
        values = {
            col: _float_cell(cell, path, line, col)
            for col, cell in zip(columns, row[2:])
            if cell != ""
        }
        try:
            records.append(SystemRecord(name, entropy, values))
        except ValidationError as exc:
            raise ValidationError(f"{path}:{line}: {exc}") from None
    return BenchmarkTable(tuple(records), str(path))


def parse_benchmarks(obj: Any, source: str = "memory") -> BenchmarkTable:
    obj = _object(obj, "benchmarks", {"records"}, {"source"})
    records = []
    for i, rec in enumerate(_list(obj["records"], "benchmarks.records")):
        where = f"benchmarks.records[{i}]"
        rec = _object(rec, where, {"name", "entropy"}, {"benchmarks"})
        values = rec.get("benchmarks", {})
        if not isinstance(values, dict):
            raise SchemaError("expected an object", field=f"{where}.benchmarks")
        clean = {}
        for k, v in values.items():
            if v is None:
                continue
            try:
                key = canonical_benchmark(k)
            except UnknownBenchmark as exc:
                raise SchemaError(str(exc), field=f"{where}.benchmarks") from None
            clean[key] = _number(v, f"{where}.benchmarks.{k}")
        records.append(
            SystemRecord(_string(rec["name"], f"{where}.name"), _number(rec["entropy"], f"{where}.entropy"), clean)
        )
    return BenchmarkTable(tuple(records), source)


def load_benchmarks(path) -> BenchmarkTable:
    text = _read_text(path)
    if _is_json(path, text):
        return parse_benchmarks(_load_json(path, text), str(path))
    return _parse_benchmarks_csv(path, text)


def save_benchmarks(table: BenchmarkTable, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(table.to_dict(), indent=2) + "\n", encoding="utf-8")
        return
    columns = table.benchmarks_present
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["System", "Entropy", *columns])
    for rec in table.records:
        writer.writerow(
            [rec.name, repr(rec.entropy), *(repr(rec.benchmarks[c]) if c in rec.benchmarks else "" for c in columns)]
        )
    path.write_text(buf.getvalue(), encoding="utf-8")
