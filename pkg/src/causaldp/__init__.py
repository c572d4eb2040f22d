"""Exact, finite-domain checkers for causal and associative privacy notions.

Privacy guarantees are statements about a release mechanism, but the popular
definitions quantify them in different ways: over kernel rows, over
conditional distributions under a population, or over interventions in a
structural model.  This package makes each reading executable over finite
extensional models with exact rational arithmetic, so the definitions can be
compared, separated by counterexamples, and audited with replayable
witnesses.
"""

from .adversary import posterior, posterior_under_intervention, semantic_gap
from .brp import (
    SEQUENTIAL_COMPOSITION,
    SequentialComposition,
    brp_bound,
    check_composition,
    compose_sequential,
    max_relative_probability,
    relative_probability,
)
from .checkers import (
    FalsificationOutcome,
    check_associative,
    check_causal,
    check_classic,
    check_strong_adversary_universal,
    check_universal_causal,
    data_point_names,
    falsify_bayesian0,
    induced_data_population,
    input_names,
    replay_witness,
    run_check,
)
from .dist import Dist
from .errors import (
    BiasOutOfRange,
    CausalDpError,
    CyclicModel,
    DomainMismatch,
    ExogenousTarget,
    InvalidDistribution,
    InvalidEffectQuery,
    MissingEquation,
    MissingPopulation,
    ModelError,
    NotAProductDistribution,
    NotInSequence,
    ParseError,
    PremiseViolated,
    RatioOutOfRange,
    UnexpectedPopulation,
    UnknownVariable,
    ValidationError,
    ValueOutOfDomain,
    ZeroEvidence,
    ZeroProbabilityEvent,
)
from .exact import (
    INF,
    Ratio,
    Value,
    epsilon_of,
    format_ratio,
    is_infinite,
    parse_rational,
    ratio_divide,
    ratio_le,
    ratio_mul,
)
from .mechanisms import (
    DB_VAR,
    NEG,
    NULL,
    OUTPUT_VAR,
    POS,
    CanonicalEngine,
    CanonicalModel,
    MechanismKernel,
    as_sem,
    classic_epsilon,
    constant_kernel,
    d_name,
    geometric_count_kernel,
    hidden_pair_kernel,
    hidden_value_kernel,
    r_name,
    randomized_response_kernel,
)
from .modelfile import (
    ENUMERATION_ORDER_VERSION,
    TOOL_VERSION,
    CompositionSpec,
    canonical_json,
    falsification_to_json,
    input_digest,
    parse_text,
    parse_value,
    report_to_json,
    serialize_input,
    witness_from_json,
    witness_to_json,
)
from .reports import (
    NEEDS_POPULATION,
    POPULATION_FREE,
    CheckReport,
    DefinitionId,
    RatioBound,
)
from .scenarios import SCENARIOS, run_all, run_scenario
from .sem import (
    ProbabilisticSem,
    Sem,
    StochasticEquation,
    constant_equation,
    copy_equation,
    deterministic_equation,
)

__version__ = TOOL_VERSION

__all__ = [
    "BiasOutOfRange",
    "CanonicalEngine",
    "CanonicalModel",
    "CausalDpError",
    "CheckReport",
    "CompositionSpec",
    "CyclicModel",
    "DB_VAR",
    "DefinitionId",
    "Dist",
    "DomainMismatch",
    "ENUMERATION_ORDER_VERSION",
    "ExogenousTarget",
    "FalsificationOutcome",
    "INF",
    "InvalidDistribution",
    "InvalidEffectQuery",
    "MechanismKernel",
    "MissingEquation",
    "MissingPopulation",
    "ModelError",
    "NEEDS_POPULATION",
    "NEG",
    "NULL",
    "NotAProductDistribution",
    "NotInSequence",
    "OUTPUT_VAR",
    "POPULATION_FREE",
    "POS",
    "ParseError",
    "PremiseViolated",
    "ProbabilisticSem",
    "Ratio",
    "RatioBound",
    "RatioOutOfRange",
    "SCENARIOS",
    "SEQUENTIAL_COMPOSITION",
    "Sem",
    "SequentialComposition",
    "StochasticEquation",
    "TOOL_VERSION",
    "UnexpectedPopulation",
    "UnknownVariable",
    "ValidationError",
    "Value",
    "ValueOutOfDomain",
    "ZeroEvidence",
    "ZeroProbabilityEvent",
    "as_sem",
    "brp_bound",
    "canonical_json",
    "check_associative",
    "check_causal",
    "check_classic",
    "check_composition",
    "check_strong_adversary_universal",
    "check_universal_causal",
    "classic_epsilon",
    "compose_sequential",
    "constant_equation",
    "constant_kernel",
    "copy_equation",
    "d_name",
    "data_point_names",
    "deterministic_equation",
    "epsilon_of",
    "falsification_to_json",
    "falsify_bayesian0",
    "format_ratio",
    "geometric_count_kernel",
    "hidden_pair_kernel",
    "hidden_value_kernel",
    "induced_data_population",
    "input_digest",
    "input_names",
    "is_infinite",
    "max_relative_probability",
    "parse_rational",
    "parse_text",
    "parse_value",
    "posterior",
    "posterior_under_intervention",
    "r_name",
    "randomized_response_kernel",
    "ratio_divide",
    "ratio_le",
    "ratio_mul",
    "relative_probability",
    "replay_witness",
    "report_to_json",
    "run_all",
    "run_check",
    "run_scenario",
    "semantic_gap",
    "serialize_input",
    "witness_from_json",
    "witness_to_json",
    "__version__",
]
