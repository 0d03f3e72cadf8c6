"""Stationary states of discrete-time quantum walk search on graphs."""

from .graph import (
    Bipartition,
    Graph,
    GraphError,
    MarkedSet,
    OddCycle,
    bipartition,
    build_graph,
    complete,
    cycle,
    eccentric_vertex_from_cycle,
    find_odd_cycle,
    marked_structure,
    path,
    read_edge_list,
    simplex,
    torus,
    write_edge_list,
)
from .spectral import materialize, one_eigenspace, project_initial
from .stationary import (
    ExistenceError,
    NotStationaryError,
    StationaryReport,
    ZeroStateError,
    assign_bipartite,
    assign_non_bipartite,
    balance_unmarked_assignment,
    check_stationary,
    compute_shortages,
    construct_optimal,
    decompose,
    optimize_stationary,
    skw_orthogonality_check,
)
from .walk import (
    StepOperator,
    Variant,
    WalkState,
    apply_coin,
    apply_oracle,
    apply_shift,
    apply_step,
    initial_state,
    inner_product,
    simulate,
)

__version__ = "0.1.0"
