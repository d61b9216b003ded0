"""Greedy and exact link addition minimizing effective graph resistance."""
from .errors import (
    BudgetExceededError,
    GraphFormatError,
    InfeasibleError,
    KgripError,
    NumericalError,
)
from .graph import (
    Graph,
    NodePair,
    add_links,
    complement_links,
    encode_graph6,
    is_connected,
    laplacian,
    parse_edge_list,
    parse_graph6,
)
from .enumerate import canonical_key, enumerate_connected_graphs
from .resistance import (
    ResistanceState,
    apply_link,
    eigen_kirchhoff,
    kirchhoff_index,
    link_gain,
    link_gains,
    normalized_resistance,
    resistance_state,
)
from .solver import GreedyTrace, OptimalResult, brute_force_optimal, efficiency, eta_from, greedy
from .submodularity import (
    curvature,
    enumerate_triples,
    find_witness,
    guarantee_factor,
    submodularity_ratio,
)
from .family import build_family_graph, gamma_upper_bound, verify_family
from .sweep import sample_sweep, sweep, write_report

__version__ = "0.1.0"
