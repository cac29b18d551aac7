"""Machine and cluster entropy.

A machine is the complete graph over its hardware components.  Each edge
gets an interaction value ``B(u) * B(v) / (C(M(u), M(v)) + eps)`` and the
machine entropy is the largest of those.  A cluster sums a logarithmic
penalty ``coefficient * log(1 + S_i)`` over all of its machines.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    EmptyCluster,
    InvalidMachine,
    NegativeInput,
    RangeError,
    AsymmetricMatrix,
    UnknownManufacturer,
    ValidationError,
)

DEFAULT_BASE_VALUE = 10.0
DEFAULT_EPSILON = 1e-9

# Alternate spellings accepted wherever a manufacturer name is looked up.
MANUFACTURER_ALIASES = {
    "hpe-cray": "hpe/cray",
    "hpe cray": "hpe/cray",
    "cray": "hpe/cray",
}


class ComponentKind(str, enum.Enum):
    CPU = "CPU"
    GPU = "GPU"
    CACHE = "Cache"
    MEMORY = "Memory"

    @classmethod
    def parse(cls, name: str) -> "ComponentKind":
        if isinstance(name, ComponentKind):
            return name
        if isinstance(name, str):
            key = name.strip().casefold()
            for kind in cls:
                if kind.value.casefold() == key:
                    return kind
        allowed = "|".join(k.value for k in cls)
        raise ValidationError(f"unknown component kind {name!r} (expected one of {allowed})")


def manufacturer_key(name: str) -> str:
    """Case-insensitive lookup key for a manufacturer name, aliases folded in."""
    key = " ".join(name.split()).casefold()
    return MANUFACTURER_ALIASES.get(key, key)


@dataclass(frozen=True)
class ComponentSpec:
    kind: ComponentKind
    manufacturer: str
    base_value: float = DEFAULT_BASE_VALUE

    def __post_init__(self):
        object.__setattr__(self, "kind", ComponentKind.parse(self.kind))
        if not isinstance(self.manufacturer, str) or not self.manufacturer.strip():
            raise ValidationError("manufacturer must be a non-empty string")
        object.__setattr__(self, "manufacturer", self.manufacturer.strip())
        if not (isinstance(self.base_value, (int, float)) and math.isfinite(self.base_value)
                and self.base_value > 0):
            raise ValidationError(f"base_value must be a positive finite number, got {self.base_value!r}")

    @property
    def label(self) -> str:
        return f"{self.kind.value}:{self.manufacturer}"

    def sort_key(self) -> tuple[str, str]:
        return (self.kind.value, manufacturer_key(self.manufacturer))


@dataclass(frozen=True)
class CompatibilityMatrix:
    """Symmetric manufacturer-pair compatibility scores in [0, 1]."""

    manufacturers: tuple[str, ...]
    scores: tuple[tuple[float, ...], ...]
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        names = tuple(str(m).strip() for m in self.manufacturers)
        rows = tuple(tuple(float(v) for v in row) for row in self.scores)
        object.__setattr__(self, "manufacturers", names)
        object.__setattr__(self, "scores", rows)

        if not names:
            raise ValidationError("compatibility matrix has no manufacturers")
        seen: dict[str, str] = {}
        for name in names:
            if not name:
                raise ValidationError("manufacturer names must be non-empty")
            key = manufacturer_key(name)
            if key in seen:
                raise ValidationError(f"duplicate manufacturer {name!r} (same as {seen[key]!r})")
            seen[key] = name
        n = len(names)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValidationError(f"scores must be a {n}x{n} table")
        for i in range(n):
            for j in range(n):
                value = rows[i][j]
                if not (0.0 <= value <= 1.0):
                    raise RangeError(
                        f"score C({names[i]},{names[j]})={value!r} outside [0, 1]"
                    )
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise AsymmetricMatrix(names[i], names[j], rows[i][j], rows[j][i])
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValidationError(f"epsilon must be positive, got {self.epsilon!r}")
        object.__setattr__(self, "_index", {manufacturer_key(m): i for i, m in enumerate(names)})

    def __contains__(self, name: str) -> bool:
        return manufacturer_key(name) in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[manufacturer_key(name)]
        except KeyError:
            raise UnknownManufacturer(name) from None

    def canonical(self, name: str) -> str:
        return self.manufacturers[self.index(name)]

    def score(self, first: str, second: str) -> float:
        return self.scores[self.index(first)][self.index(second)]

    def with_score(self, first: str, second: str, value: float) -> "CompatibilityMatrix":
        """Copy with C(first, second) and C(second, first) replaced by ``value``."""
        i, j = self.index(first), self.index(second)
        rows = [list(row) for row in self.scores]
        rows[i][j] = value
        rows[j][i] = value
        return CompatibilityMatrix(self.manufacturers, tuple(map(tuple, rows)), self.epsilon)

    def to_dict(self) -> dict:
        return {
            "manufacturers": list(self.manufacturers),
            "scores": [list(row) for row in self.scores],
            "epsilon": self.epsilon,
        }


@dataclass(frozen=True)
class MachineSpec:
    name: str
    components: tuple[ComponentSpec, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 2:
            raise InvalidMachine(
                f"machine {self.name!r} needs at least two components, got {len(comps)}"
            )
        kinds = [c.kind for c in comps]
        for kind in ComponentKind:
            if kinds.count(kind) > 1:
                raise InvalidMachine(
                    f"machine {self.name!r} has more than one {kind.value} component"
                )


Edge = tuple[ComponentSpec, ComponentSpec]


@dataclass(frozen=True)
class EdgeValue:
    first: ComponentSpec
    second: ComponentSpec
    compatibility: float
    value: float

    @property
    def label(self) -> str:
        return f"{self.first.label} -- {self.second.label}"


@dataclass(frozen=True)
class MachineEntropy:
    machine: str
    value: float
    argmax_edge: Edge
    edge_values: tuple[EdgeValue, ...]

    def to_dict(self) -> dict:
        first, second = self.argmax_edge
        return {
            "machine": self.machine,
            "value": self.value,
            "argmax_edge": [first.label, second.label],
            "edges": [
                {
                    "first": e.first.label,
                    "second": e.second.label,
                    "compatibility": e.compatibility,
                    "interaction": e.value,
                }
                for e in self.edge_values
            ],
        }


@dataclass(frozen=True)
class MachineGroup:
    machine: MachineSpec
    count: int = 1

    def __post_init__(self):
        if isinstance(self.count, bool) or not isinstance(self.count, int) or self.count < 1:
            raise ValidationError(
                f"count for machine {self.machine.name!r} must be an integer >= 1, got {self.count!r}"
            )


@dataclass(frozen=True)
class ClusterSpec:
    name: str
    groups: tuple[MachineGroup, ...]

    def __post_init__(self):
        groups = tuple(
            g if isinstance(g, MachineGroup) else MachineGroup(*g) for g in self.groups
        )
        object.__setattr__(self, "groups", groups)
        if not groups:
            raise EmptyCluster(f"cluster {self.name!r} has no machines")

    @property
    def machine_count(self) -> int:
        return sum(g.count for g in self.groups)


@dataclass(frozen=True)
class PenaltyParams:
    coefficient: float = 3.0
    log_base: str = "natural"

    _BASES = {"natural": "natural", "e": "natural", "ln": "natural", "10": "10", "log10": "10"}

    def __post_init__(self):
        base = self._BASES.get(str(self.log_base).strip().lower())
        if base is None:
            raise ValidationError(f"log_base must be 'natural' or '10', got {self.log_base!r}")
        object.__setattr__(self, "log_base", base)
        if not (math.isfinite(self.coefficient) and self.coefficient > 0):
            raise ValidationError(f"penalty coefficient must be positive, got {self.coefficient!r}")


@dataclass(frozen=True)
class MachineContribution:
    machine: str
    count: int
    entropy: float
    penalty: float

    @property
    def total(self) -> float:
        return self.count * self.penalty


@dataclass(frozen=True)
class ClusterEntropy:
    cluster: str
    value: float
    per_machine: tuple[MachineContribution, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "cluster": self.cluster,
            "value": self.value,
            "machines": [
                {
                    "machine": m.machine,
                    "count": m.count,
                    "entropy": m.entropy,
                    "penalty": m.penalty,
                    "contribution": m.total,
                }
                for m in self.per_machine
            ],
        }


def interaction_value(u: ComponentSpec, v: ComponentSpec, matrix: CompatibilityMatrix) -> float:
    c = matrix.score(u.manufacturer, v.manufacturer)
    return u.base_value * v.base_value / (c + matrix.epsilon)


def build_component_graph(machine: MachineSpec) -> list[Edge]:
    """All unordered component pairs, in canonical order.

    Components are sorted by kind name and then manufacturer; edges follow
    lexicographically from that ordering.
    """
    if len(machine.components) < 2:
        raise InvalidMachine(f"machine {machine.name!r} needs at least two components")
    ordered = sorted(machine.components, key=ComponentSpec.sort_key)
    return list(combinations(ordered, 2))


def machine_entropy(machine: MachineSpec, matrix: CompatibilityMatrix) -> MachineEntropy:
    edges = []
    for u, v in build_component_graph(machine):
        c = matrix.score(u.manufacturer, v.manufacturer)
        edges.append(EdgeValue(u, v, c, interaction_value(u, v, matrix)))
    # first maximal edge in canonical order wins ties
    best = edges[0]
    for e in edges[1:]:
        if e.value > best.value:
            best = e
    return MachineEntropy(machine.name, best.value, (best.first, best.second), tuple(edges))


def penalty(x: float, params: PenaltyParams = PenaltyParams()) -> float:
    if x < 0 or math.isnan(x):
        raise NegativeInput(f"penalty is defined for x >= 0, got {x!r}")
    value = math.log1p(x)
    if params.log_base == "10":
        value /= math.log(10.0)
    return params.coefficient * value


def cluster_entropy(
    cluster: ClusterSpec,
    matrix: CompatibilityMatrix,
    params: PenaltyParams = PenaltyParams(),
) -> ClusterEntropy:
    if not cluster.groups:
        raise EmptyCluster(f"cluster {cluster.name!r} has no machines")
    parts = []
    for group in cluster.groups:
        s = machine_entropy(group.machine, matrix).value
        parts.append(MachineContribution(group.machine.name, group.count, s, penalty(s, params)))
    # fsum is correctly rounded, so the total does not depend on group order
    total = math.fsum(p.total for p in parts)
    return ClusterEntropy(cluster.name, total, tuple(parts))


def matrix_cells_used(machines: Iterable[MachineSpec], matrix: CompatibilityMatrix) -> list[tuple[str, str]]:
    """Distinct unordered manufacturer pairs touched by any machine edge, in matrix order."""
    used = set()
    for machine in machines:
        for u, v in build_component_graph(machine):
            i, j = sorted((matrix.index(u.manufacturer), matrix.index(v.manufacturer)))
            used.add((i, j))
    names = matrix.manufacturers
    return [(names[i], names[j]) for i, j in sorted(used)]


def homogeneous_machine(
    name: str,
    manufacturer: str,
    kinds: Sequence[ComponentKind] = tuple(ComponentKind),
    base_value: float = DEFAULT_BASE_VALUE,
) -> MachineSpec:
    return MachineSpec(name, tuple(ComponentSpec(k, manufacturer, base_value) for k in kinds))
