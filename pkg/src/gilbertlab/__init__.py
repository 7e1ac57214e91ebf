"""Continuum percolation on random geometric graphs.

Poisson points in the plane, edges between pairs at distance at most one,
site and bond occupation driven by independent uniform marks, and a bow-tie
enhancement that turns special closed vertices green. The package provides
exact small-fixture oracles, coupled site/bond explorations, threshold
based crossing-curve estimation, pivotality integrals and a critical
intensity estimator, all behind reproducible seed-derived streams.
"""

from ._kernels import BACKEND
from .coupling import (
    CoupledEnhancement,
    CouplingState,
    DominationReport,
    apply_coupled_enhancement,
    replay_provenance,
    run_coupling,
    verify_domination,
)
from .enhancement import (
    BowTieWitness,
    EnhancedColoring,
    bowtie_pattern,
    coloured_from_marks,
    configured_centers,
    correctly_configured,
    crossing_event,
    crossing_event_marks,
    enhance,
    read_coloring_csv,
    write_coloring_csv,
)
from .errors import (
    CouplingInvariantError,
    FixtureCapError,
    GilbertLabError,
    InvalidParameterError,
    WidenGridError,
)
from .estimation import (
    MODELS,
    GapReport,
    GapRow,
    HalfPointEstimate,
    LambdaCEstimate,
    SweepConfig,
    bond_crossing_threshold,
    enhanced_crossing_threshold,
    enhanced_vertex_thresholds,
    estimate_half_point,
    estimate_lambda_c,
    gap_experiment,
    replicate_thresholds,
    site_crossing_threshold,
    sweep,
    write_sweep_csv,
)
from .geom_graph import (
    GilbertGraph,
    build_graph,
    components,
    largest_component_fraction,
    write_edges_csv,
)
from .oracle import (
    ENUMERATION_CAP,
    ExactWindow,
    bridge_fixture,
    exact_crossing_probability,
    exact_derivative,
    exact_pivotal,
    read_fixture_csv,
)
from .percolation import (
    BondState,
    CrossingSpec,
    SiteState,
    bond_crossing_occurs,
    color_sites,
    crossing_occurs,
    crossing_prime_occurs,
    edge_marks,
    open_bonds,
)
from .pivotality import (
    DerivativeCheck,
    InsertionTrial,
    PivotalEstimate,
    estimate_pivotal_integral,
    finite_difference_theta,
    insert_point,
    is_pivotal_1,
    is_pivotal_2,
    pivotal_ratio_profile,
    russo_check,
)
from .point_process import (
    Annulus,
    Box,
    Disk,
    MarkedPointSet,
    StreamSpec,
    canonical_order,
    read_points_csv,
    region_contains,
    sample_in_difference,
    sample_poisson,
    write_points_csv,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BACKEND",
    # errors
    "GilbertLabError",
    "InvalidParameterError",
    "FixtureCapError",
    "CouplingInvariantError",
    "WidenGridError",
    # point process
    "Disk",
    "Annulus",
    "Box",
    "StreamSpec",
    "MarkedPointSet",
    "canonical_order",
    "region_contains",
    "sample_poisson",
    "sample_in_difference",
    "write_points_csv",
    "read_points_csv",
    # graph
    "GilbertGraph",
    "build_graph",
    "components",
    "largest_component_fraction",
    "write_edges_csv",
    # site/bond states and crossings
    "SiteState",
    "BondState",
    "CrossingSpec",
    "color_sites",
    "edge_marks",
    "open_bonds",
    "crossing_occurs",
    "crossing_prime_occurs",
    "bond_crossing_occurs",
    # enhancement
    "BowTieWitness",
    "EnhancedColoring",
    "bowtie_pattern",
    "configured_centers",
    "correctly_configured",
    "coloured_from_marks",
    "enhance",
    "crossing_event",
    "crossing_event_marks",
    "write_coloring_csv",
    "read_coloring_csv",
    # oracle
    "ENUMERATION_CAP",
    "ExactWindow",
    "exact_crossing_probability",
    "exact_pivotal",
    "exact_derivative",
    "bridge_fixture",
    "read_fixture_csv",
    # pivotality
    "InsertionTrial",
    "PivotalEstimate",
    "DerivativeCheck",
    "insert_point",
    "is_pivotal_1",
    "is_pivotal_2",
    "estimate_pivotal_integral",
    "finite_difference_theta",
    "russo_check",
    "pivotal_ratio_profile",
    # coupling
    "CouplingState",
    "CoupledEnhancement",
    "DominationReport",
    "run_coupling",
    "apply_coupled_enhancement",
    "replay_provenance",
    "verify_domination",
    # estimation
    "MODELS",
    "SweepConfig",
    "sweep",
    "write_sweep_csv",
    "HalfPointEstimate",
    "estimate_half_point",
    "LambdaCEstimate",
    "estimate_lambda_c",
    "GapReport",
    "GapRow",
    "gap_experiment",
    "site_crossing_threshold",
    "bond_crossing_threshold",
    "enhanced_crossing_threshold",
    "enhanced_vertex_thresholds",
    "replicate_thresholds",
]
