"""Bogomolov multipliers of finite groups, isoclinism, and exact checks of
birational reduction scripts over cyclotomic fields."""

from .cohomology import (
    B0Result,
    CocycleVector,
    H2Presentation,
    ResourceLimitError,
    bogomolov_multiplier,
    connecting_image,
    h2_modn,
    h2_qz_invariants,
    restrict_class,
)
from .cyclofield import CycloField, CycloNum, cyclo_arith, cyclo_embed
from .funcfield import (
    FieldMap,
    PolyRing,
    RatFunc,
    apply_map,
    compose_maps,
    exponent_det,
    is_monomial_map,
    parse_expr,
    rf_equal,
)
from .isoclinism import (
    CommutatorPairing,
    IsoclinismCertificate,
    IsoclinismResult,
    are_isoclinic,
    commutator_pairing,
    fingerprint,
    verify_certificate,
)
from .pcgroup import (
    GroupTable,
    PcPresentation,
    Subgroup,
    bicyclic_subgroups,
    build_table,
    direct_product,
    load_pcg,
    parse_presentation,
    quotient,
    structure,
)
from .verifier import (
    ActionScript,
    StepReport,
    check_faithful,
    check_relations,
    load_script,
    parse_script,
    run_script,
)
from .zlinalg import AbelianInvariants, HowellBasis, SparseMatModN, howell_form, smith_invariants

__all__ = [name for name in dir() if not name.startswith("_")]
