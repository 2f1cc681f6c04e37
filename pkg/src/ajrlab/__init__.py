"""Approval-based committee elections under random ballots: exact axiom
checkers, phase-transition analytics, boundary polyhedra, and a Monte Carlo
existence harness."""

from .axioms import (
    AxiomReport,
    Witness,
    ajr_committee_count,
    evaluate_committee,
    find_ajr_witness,
    min_average_satisfaction,
    pav_committee,
    pav_score,
    proportionality_profile,
    satisfies_ajr,
    satisfies_core,
    satisfies_ejr,
    satisfies_jr,
    satisfies_pjr,
)
from .core import (
    ApprovalProfile,
    BallotHistogram,
    ElectionSpec,
    ProfileFormatError,
    bits_from_mask,
    enumerate_committees,
    enumerate_subsets,
    histogram,
    mask_from_bits,
    mask_of,
    members_of,
    parse_profile,
    quota,
    serialize_profile,
    utility,
    utility_multiset,
)
from .kernels import AjrScanner, backend_name
from .montecarlo import (
    EstimateResult,
    SampleConfig,
    estimate_existence,
    sample_histogram,
    sample_profile,
    sweep,
    wilson_interval,
)
from .polyhedron import (
    PolyhedronCase,
    PolyhedronSpec,
    build_polyhedron,
    expectation_vector,
    inner_point,
    membership,
)
from .theory import (
    PhaseReport,
    Regime,
    RegimeReport,
    TheoryPoint,
    classify_by_group_averages,
    classify_by_transition,
    dip_point,
    dip_product,
    lower_transition,
    overlap_group_average,
    phase_curve,
    stopped_average,
    stopped_average2_deriv,
    stopped_average_deriv,
    theory_point,
    transition_report,
    truncation_point,
    upper_transition,
    utility_mass,
    verify_dip_product,
    verify_product_bound,
    verify_transition_bracket,
    worst_group_average,
    worst_group_average_by_max,
)

__version__ = "0.1.0"
