"""mmskit: exact maximin-share allocation for XOS valuations.

All arithmetic is exact rational arithmetic.  The package provides a
brute-force maximin-share oracle with certificates, a deterministic
allocation pipeline guaranteeing 3/13 of each agent's maximin share, a
randomized pipeline guaranteeing 1/4 ex ante and 1/8 ex post with at most
two outcomes, and a verification harness that checks any of it exactly.
"""

from .errors import CapacityError, ParseError
from .values import (
    AdditiveFunction,
    FractionalSet,
    Instance,
    Rational,
    TruncatedValuation,
    XosValuation,
    contribution,
    instance_from_lists,
    restrict_instance,
)
from .allocations import (
    Allocation,
    FractionalAllocation,
    RandomizedAllocation,
    allocation_contribution,
    ex_post_min,
    expected_value,
    independent_rounding,
    uniform_fractional,
    witness_mass,
)
from .mms import (
    MmsCertificate,
    halving_split,
    mms,
    normalize,
    proportional_share,
    reduce_instance,
)
from .rounding import (
    DummyItem,
    RoundingGraph,
    Slot,
    build_rounding_graph,
    decompose_two_regular,
    round_half_integral,
)
from .algorithms import (
    DET_CAP,
    DET_GUARANTEE,
    DET_THRESHOLD,
    RAND_CAP,
    RAND_EX_ANTE,
    RAND_EX_POST,
    RAND_THRESHOLD,
    DeterministicResult,
    PartialInstance,
    PhaseTrace,
    RandomizedResult,
    RemovalEvent,
    WelfareSummary,
    initial_state,
    large_item_phase,
    max_welfare_half_integral,
    max_welfare_integral,
    solve_deterministic,
    solve_randomized,
    tuple_phase,
)
from .engine import DEFAULT_MAX_ENUM, backend_name, has_compiled_backend
from .generators import (
    FAMILIES,
    gen_instance,
    grid_instance,
    lemma1_instance,
    random_additive_instance,
    random_xos_instance,
)
from .instancefile import (
    InstanceDocument,
    ResultDocument,
    parse_instance,
    parse_instance_document,
    parse_result,
    serialize_instance,
    serialize_result,
)
from .verify import AgentReport, VerificationReport, best_two_agent_split, verify

__version__ = "0.1.0"

__all__ = [
    "AdditiveFunction",
    "AgentReport",
    "Allocation",
    "CapacityError",
    "DET_CAP",
    "DET_GUARANTEE",
    "DET_THRESHOLD",
    "DEFAULT_MAX_ENUM",
    "DeterministicResult",
    "DummyItem",
    "FAMILIES",
    "FractionalAllocation",
    "FractionalSet",
    "Instance",
    "InstanceDocument",
    "MmsCertificate",
    "ParseError",
    "PartialInstance",
    "PhaseTrace",
    "RAND_CAP",
    "RAND_EX_ANTE",
    "RAND_EX_POST",
    "RAND_THRESHOLD",
    "RandomizedAllocation",
    "RandomizedResult",
    "Rational",
    "RemovalEvent",
    "ResultDocument",
    "RoundingGraph",
    "Slot",
    "TruncatedValuation",
    "VerificationReport",
    "WelfareSummary",
    "XosValuation",
    "allocation_contribution",
    "backend_name",
    "best_two_agent_split",
    "build_rounding_graph",
    "contribution",
    "decompose_two_regular",
    "ex_post_min",
    "expected_value",
    "gen_instance",
    "grid_instance",
    "halving_split",
    "has_compiled_backend",
    "independent_rounding",
    "initial_state",
    "instance_from_lists",
    "large_item_phase",
    "lemma1_instance",
    "max_welfare_half_integral",
    "max_welfare_integral",
    "mms",
    "normalize",
    "parse_instance",
    "parse_instance_document",
    "parse_result",
    "proportional_share",
    "random_additive_instance",
    "random_xos_instance",
    "reduce_instance",
    "restrict_instance",
    "round_half_integral",
    "serialize_instance",
    "serialize_result",
    "solve_deterministic",
    "solve_randomized",
    "tuple_phase",
    "uniform_fractional",
    "verify",
    "witness_mass",
]
