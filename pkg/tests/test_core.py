import math

import pytest

from cluster_entropy.core import (
    ClusterSpec,
    CompatibilityMatrix,
    ComponentKind,
    ComponentSpec,
    MachineGroup,
    MachineSpec,
    PenaltyParams,
    build_component_graph,
    cluster_entropy,
    homogeneous_machine,
    interaction_value,
    machine_entropy,
    matrix_cells_used,
    penalty,
)
from cluster_entropy.dataset import bundled_compatibility_matrix
from cluster_entropy.errors import (
    AsymmetricMatrix,
    EmptyCluster,
    InvalidMachine,
    NegativeInput,
    RangeError,
    UnknownManufacturer,
    ValidationError,
)

CPU, GPU, CACHE, MEM = ComponentKind.CPU, ComponentKind.GPU, ComponentKind.CACHE, ComponentKind.MEMORY


def two_vendor_matrix(c):
    return CompatibilityMatrix(("A", "B"), ((1.0, c), (c, 1.0)))


@pytest.fixture
def table1():
    return bundled_compatibility_matrix()


# eps shifts the result by eps / C relative, so tolerances follow C
@pytest.mark.parametrize(
    "c, expected, rel",
    [(1.0, 100.0, 1e-8), (0.9, 100 / 0.9, 1e-8), (0.01, 10000.0, 1e-6), (0.0, 1e11, 1e-12)],
)
def test_interaction_worked_values(c, expected, rel):
    m = two_vendor_matrix(c)
    value = interaction_value(ComponentSpec(CPU, "A"), ComponentSpec(GPU, "B"), m)
    assert value == pytest.approx(expected, rel=rel)
    assert math.isfinite(value)


def test_interaction_unknown_manufacturer(table1):
    with pytest.raises(UnknownManufacturer, match="Cerebras"):
        interaction_value(ComponentSpec(CPU, "Cerebras"), ComponentSpec(GPU, "AMD"), table1)


def test_manufacturer_lookup_is_case_and_alias_insensitive(table1):
    assert table1.score("amd", "hpe-cray") == 0.90
    assert table1.score("HPE/Cray", "AMD") == 0.90
    assert table1.canonical("nvidia") == "NVIDIA"


@pytest.mark.parametrize("k, edges", [(2, 1), (3, 3), (4, 6)])
def test_graph_edge_counts(k, edges):
    kinds = list(ComponentKind)[:k]
    machine = MachineSpec("m", tuple(ComponentSpec(kind, "AMD") for kind in kinds))
    assert len(build_component_graph(machine)) == edges


def test_graph_canonical_order_is_by_kind_name():
    machine = MachineSpec("m", (
        ComponentSpec(MEM, "Intel"), ComponentSpec(GPU, "NVIDIA"),
        ComponentSpec(CACHE, "Intel"), ComponentSpec(CPU, "Intel"),
    ))
    pairs = [(u.kind.value, v.kind.value) for u, v in build_component_graph(machine)]
    assert pairs == [
        ("CPU", "Cache"), ("CPU", "GPU"), ("CPU", "Memory"),
        ("Cache", "GPU"), ("Cache", "Memory"), ("GPU", "Memory"),
    ]


def test_machine_requires_two_components():
    with pytest.raises(InvalidMachine):
        MachineSpec("lonely", (ComponentSpec(CPU, "AMD"),))


def test_machine_rejects_duplicate_kind():
    with pytest.raises(InvalidMachine, match="CPU"):
        MachineSpec("dual", (ComponentSpec(CPU, "AMD"), ComponentSpec(CPU, "Intel")))


def test_component_validation():
    with pytest.raises(ValidationError):
        ComponentSpec("TPU", "Google")
    with pytest.raises(ValidationError):
        ComponentSpec(CPU, "  ")
    with pytest.raises(ValidationError):
        ComponentSpec(CPU, "AMD", base_value=0)
    assert ComponentSpec("memory", "AMD").kind is MEM
    assert ComponentSpec(CPU, "AMD").base_value == 10


def test_all_fujitsu_machine(table1):
    # brute force: every edge is Fujitsu-Fujitsu, 100 / (0.98 + 1e-9)
    result = machine_entropy(homogeneous_machine("a64fx", "Fujitsu"), table1)
    assert result.value == pytest.approx(102.0408, abs=1e-4)
    assert result.value == pytest.approx(100 / (0.98 + 1e-9), rel=1e-15)
    assert len(result.edge_values) == 6
    first, second = result.argmax_edge
    assert (first.kind, second.kind) == (CPU, CACHE)  # first canonical edge on ties


def test_intel_nvidia_machine(table1):
    machine = MachineSpec("xeon-h100", (
        ComponentSpec(CPU, "Intel"), ComponentSpec(GPU, "NVIDIA"),
        ComponentSpec(CACHE, "Intel"), ComponentSpec(MEM, "Intel"),
    ))
    result = machine_entropy(machine, table1)
    assert result.value == pytest.approx(121.951, abs=1e-3)
    first, second = result.argmax_edge
    assert (first.label, second.label) == ("CPU:Intel", "GPU:NVIDIA")
    intel_pairs = [e.value for e in result.edge_values if e.first.manufacturer == e.second.manufacturer]
    assert intel_pairs == pytest.approx([113.636] * 3, abs=1e-3)


def test_machine_entropy_value_is_max_of_edges(table1):
    machine = MachineSpec("mix", (ComponentSpec(CPU, "IBM"), ComponentSpec(GPU, "Fujitsu"), ComponentSpec(MEM, "AMD")))
    result = machine_entropy(machine, table1)
    assert result.value == max(e.value for e in result.edge_values)
    assert result.value == pytest.approx(100 / (0.72 + 1e-9))


@pytest.mark.parametrize(
    "x, params, expected",
    [
        (0.0, PenaltyParams(), 0.0),
        (99.0, PenaltyParams(), 3 * math.log(100)),
        (99.0, PenaltyParams(log_base="10"), 6.0),
        (99.0, PenaltyParams(coefficient=1.0, log_base=10), 2.0),
    ],
)
def test_penalty_values(x, params, expected):
    assert penalty(x, params) == pytest.approx(expected, rel=1e-15, abs=0)


def test_penalty_reference_digits():
    assert penalty(99.0) == pytest.approx(13.8155, abs=5e-5)


def test_penalty_rejects_negative():
    with pytest.raises(NegativeInput):
        penalty(-1e-12)


def test_penalty_params_validation():
    with pytest.raises(ValidationError):
        PenaltyParams(coefficient=0)
    with pytest.raises(ValidationError):
        PenaltyParams(log_base="2")
    assert PenaltyParams(log_base="e").log_base == "natural"


def _s99_machine():
    # 9 * 11 / (1 + eps) sits just below 99
    return MachineSpec("s99", (ComponentSpec(CPU, "A", 9.0), ComponentSpec(GPU, "A", 11.0)))


def test_cluster_single_machine():
    m = two_vendor_matrix(0.5)
    result = cluster_entropy(ClusterSpec("one", (MachineGroup(_s99_machine()),)), m)
    assert result.value == pytest.approx(13.8155, abs=5e-5)
    assert result.per_machine[0].count == 1


def test_cluster_multiplicity_is_linear():
    m = two_vendor_matrix(0.5)
    single = cluster_entropy(ClusterSpec("one", ((_s99_machine(), 1),)), m).value
    many = cluster_entropy(ClusterSpec("many", ((_s99_machine(), 158976),)), m).value
    assert many == pytest.approx(158976 * single, rel=1e-12)


def test_cluster_two_groups_add(table1):
    a = homogeneous_machine("amd", "AMD")
    b = homogeneous_machine("fj", "Fujitsu")
    both = cluster_entropy(ClusterSpec("ab", ((a, 3), (b, 2))), table1).value
    sa = cluster_entropy(ClusterSpec("a", ((a, 3),)), table1).value
    sb = cluster_entropy(ClusterSpec("b", ((b, 2),)), table1).value
    assert both == pytest.approx(sa + sb, rel=1e-14)


def test_cluster_validation():
    with pytest.raises(EmptyCluster):
        ClusterSpec("empty", ())
    with pytest.raises(ValidationError):
        MachineGroup(homogeneous_machine("x", "AMD"), 0)
    with pytest.raises(ValidationError):
        MachineGroup(homogeneous_machine("x", "AMD"), True)


def test_matrix_validation():
    with pytest.raises(AsymmetricMatrix) as info:
        CompatibilityMatrix(("A", "B"), ((1.0, 0.8), (0.7, 1.0)))
    assert info.value.pair == ("A", "B")
    with pytest.raises(RangeError):
        CompatibilityMatrix(("A", "B"), ((1.0, 1.2), (1.2, 1.0)))
    with pytest.raises(ValidationError):
        CompatibilityMatrix(("A", "a"), ((1.0, 1.0), (1.0, 1.0)))
    with pytest.raises(ValidationError):
        CompatibilityMatrix(("A",), ((1.0,),), epsilon=0)


def test_with_score_keeps_symmetry(table1):
    m = table1.with_score("Intel", "AMD", 0.5)
    assert m.score("AMD", "Intel") == m.score("Intel", "AMD") == 0.5
    assert table1.score("AMD", "Intel") == 0.82


def test_cells_used(table1):
    machine = MachineSpec("m", (ComponentSpec(CPU, "Intel"), ComponentSpec(GPU, "NVIDIA"), ComponentSpec(MEM, "Intel")))
    assert matrix_cells_used([machine], table1) == [("Intel", "Intel"), ("Intel", "NVIDIA")]
