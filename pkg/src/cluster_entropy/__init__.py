"""Component-incompatibility entropy for parallel machines and clusters."""

__version__ = "0.1.0"

from .core import (
    ClusterEntropy,
    ClusterSpec,
    CompatibilityMatrix,
    ComponentKind,
    ComponentSpec,
    MachineEntropy,
    MachineGroup,
    MachineSpec,
    PenaltyParams,
    build_component_graph,
    cluster_entropy,
    interaction_value,
    machine_entropy,
    penalty,
)
from .dataset import (
    BenchmarkTable,
    SystemRecord,
    bundled_compatibility_matrix,
    bundled_top10,
    load_benchmarks,
    load_cluster_spec,
    load_matrix,
)
from .stats import (
    CorrelationResult,
    SampleSeries,
    interpret,
    p_value_two_sided,
    pearson_r,
    student_t_cdf,
)
from .analysis import (
    consistency_check,
    correlate_all,
    efficiency_ranking,
    sensitivity_sweep,
)
