"""Finite generalized heaps and the equivalence bimodules they correspond to."""
from __future__ import annotations

__version__ = "0.1.0"

from ._accel import BACKEND, available_backends
from .finsemi import (
    CompositionError,
    FiniteSemigroup,
    InverseSemigroup,
    IsoWitness,
    NotInverseError,
    PartialBijection,
    SizeLimitError,
    brandt_b2,
    check_associative,
    check_inverse_laws,
    compose_pb,
    cyclic_group,
    identity_pb,
    idempotents,
    inverse_semigroup,
    invert_pb,
    iso_search,
    natural_order_leq,
    partial_injections,
    recognize_inverse,
    semilattice_chain,
    symmetric_inverse_monoid,
)
from .heap import (
    ConfigurationError,
    GeneralizedHeap,
    atlas_closure,
    derive_bands,
    gh_of,
    l_triviality_check,
    p_quotient,
    q_quotient,
    validate_heap,
)
from .groupoid import build_left, build_right, check_groupoid, check_pregroupoid, pregroupoid_view
from .morita import (
    EquivalenceBimodule,
    assemble_bimodule,
    check_bracket_identities,
    check_bracket_orders,
    construct,
    eb_of,
    heap_of_bimodule,
    roundtrip_bimodule,
    roundtrip_heap,
    validate_bimodule,
)
from .report import CheckResult, InternalInconsistencyError, MalformedTableError, ValidationReport
