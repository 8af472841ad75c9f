"""Evidence-pattern fusion over set-, permutation- and graph-valued focal
elements, plus a multi-sensor aircraft velocity-ranking experiment.

The hot fusion kernels run from a compiled extension when it is available
and fall back to pure Python otherwise; ``KERNEL_BACKEND`` reports which
one is active.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .core import (
    MassAssignment,
    Multiset,
    SampleSpace,
    TOLERANCE,
    TotalConflictError,
    combine_many,
    dcr_combine,
    dempster_combine,
    event_from_json,
    event_to_json,
    is_empty_event,
    mass_from_json,
    mass_to_json,
    multiset_plus,
    pignistic,
    validate,
)
from .rps import left_intersect, pes_size, right_intersect, rps_right_combine
from .rgs import (
    GraphEvent,
    classify,
    enumerate_paths,
    from_perm,
    from_set,
    graph_from_json,
    graph_to_json,
    longest_path_reduce,
    merge_overlay,
    remove_cycles,
    to_perm,
    to_set,
)
from .model import (
    BpaAlgorithm,
    DecisionOperator,
    PatternOperator,
    decide,
    decision_operator,
    fuse_sequence,
    fuse_two,
    pattern_operator,
    register_decision_operator,
    register_pattern_operator,
)
from .simulate import (
    AircraftConfig,
    Case,
    GenerationConfig,
    SensorConfig,
    Trajectory,
    case_seed,
    generate_case,
    place_sensors,
    sense,
    simulate_trajectory,
    write_corpus,
)
from .decision import (
    DecisionOutcome,
    InvalidCaseError,
    ResultState,
    classify_result,
    counts_to_source,
    crd,
    edge_vote,
    interval_count,
    mean_ranking,
    mvd,
    sensor_source,
    speed_graph_po,
)
from .harness import (
    CrossTab,
    SummaryStats,
    compute_stats,
    decide_case,
    run_all,
    run_experiment,
    trace_records,
    write_trace,
)

__version__ = "0.1.0"
