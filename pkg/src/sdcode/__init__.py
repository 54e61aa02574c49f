"""Binary doubly even self-dual codes: construction and classification.

The package builds catalogs of doubly even self-dual codes up to
coordinate permutation and certifies them complete against the exact
count given by the mass formula.  Construction routes are two
coordinate lifts, gluing along isometries of weight tracking quotients,
and the self-dual neighbor graph; every completed catalog carries a
certificate that the orbit sizes sum to the full mass.
"""

from .classify import (
    CoveringRadiusResult,
    MassAccount,
    census,
    classify_doubly_even,
    covering_radius,
    design_check,
    extremal38_pipeline,
    mass,
    weight8_subcode_dim,
)
from .codes import (
    LinearCode,
    ShadowDecomposition,
    direct_sum,
    dual,
    extended_golay_code,
    extended_hamming_code,
    extended_hamming_power,
    extremal_bound,
    min_weight,
    repetition_blocks,
    repetition_pair,
    shadow_decomposition,
    subtract,
    weight_distribution,
)
from .construct import (
    Decomposition,
    bp_lift,
    decompose_at,
    glue,
    glue_family,
    glue_map_of,
    neighbor,
    neighbor_functional_orbits,
    neighbor_step,
    small_self_orthogonal_classes,
    subtraction_candidates,
)
from .equiv import (
    CanonicalForm,
    EquivalenceWitness,
    Fingerprint,
    aut_order,
    automorphism_group,
    canonical_form,
    dedup,
    design_invariant,
    fingerprint,
    is_equivalent,
)
from .errors import (
    BudgetExceededError,
    IncompleteCatalogError,
    ParseError,
    SdcodeError,
    ValidationError,
)
from .perms import PermGroup, Permutation, prime_order_types
from .quadspace import (
    DoubleCosets,
    QuotientSpace,
    double_coset_reps,
    find_isometry,
    induced_group_gens,
    isometry_group_gens,
    isometry_group_order,
    orthogonal_group_order,
    quotient_space,
    standardize,
)
from .records import CatalogRecord, make_record, parse_record_line
from .store import CatalogStore, IngestResult, ingest, load_gm_codes

__version__ = "1.0.0"

__all__ = [
    "BudgetExceededError",
    "CanonicalForm",
    "CatalogRecord",
    "CatalogStore",
    "CoveringRadiusResult",
    "Decomposition",
    "DoubleCosets",
    "EquivalenceWitness",
    "Fingerprint",
    "IncompleteCatalogError",
    "IngestResult",
    "LinearCode",
    "MassAccount",
    "ParseError",
    "PermGroup",
    "Permutation",
    "QuotientSpace",
    "SdcodeError",
    "ShadowDecomposition",
    "ValidationError",
    "aut_order",
    "automorphism_group",
    "bp_lift",
    "canonical_form",
    "census",
    "classify_doubly_even",
    "covering_radius",
    "decompose_at",
    "dedup",
    "design_check",
    "design_invariant",
    "direct_sum",
    "double_coset_reps",
    "dual",
    "extended_golay_code",
    "extended_hamming_code",
    "extended_hamming_power",
    "extremal38_pipeline",
    "extremal_bound",
    "find_isometry",
    "fingerprint",
    "glue",
    "glue_family",
    "glue_map_of",
    "induced_group_gens",
    "ingest",
    "is_equivalent",
    "isometry_group_gens",
    "isometry_group_order",
    "load_gm_codes",
    "make_record",
    "mass",
    "min_weight",
    "neighbor",
    "neighbor_functional_orbits",
    "neighbor_step",
    "orthogonal_group_order",
    "parse_record_line",
    "prime_order_types",
    "quotient_space",
    "repetition_blocks",
    "repetition_pair",
    "shadow_decomposition",
    "small_self_orthogonal_classes",
    "standardize",
    "subtract",
    "subtraction_candidates",
    "weight8_subcode_dim",
    "weight_distribution",
]
