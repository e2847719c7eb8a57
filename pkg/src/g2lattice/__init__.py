"""Exact computations with lattices in the split para-octonions over k((t)) and the group G2."""

from .building import (
    GradedChain,
    VertexCertificate,
    VertexType,
    classify_vertex,
    graded_chain,
    stabilizes,
    standard_lattice,
)
from .errors import (
    InconsistencyError,
    NeedsEtaleExtension,
    PrecisionExhausted,
    PreconditionError,
    ScalarSyntaxError,
)
from .groups import AlgebraMap, RelatedTriple, is_automorphism, is_related_triple, random_automorphism, rho, theta
from .lattice import Lattice, dual, intersect, is_order, length, product_span
from .octonion import OctonionElement, bilinear, check_identities, norm, para_mul
from .reduction import Refutation, ReductionResult, certificate_verify, random_lattice, reduce_lattice
from .scalars import BaseField, LaurentJet, RationalScalar, parse_scalar

__all__ = [
    "AlgebraMap",
    "BaseField",
    "GradedChain",
    "InconsistencyError",
    "Lattice",
    "LaurentJet",
    "NeedsEtaleExtension",
    "OctonionElement",
    "PrecisionExhausted",
    "PreconditionError",
    "RationalScalar",
    "ReductionResult",
    "Refutation",
    "RelatedTriple",
    "ScalarSyntaxError",
    "VertexCertificate",
    "VertexType",
    "bilinear",
    "certificate_verify",
    "check_identities",
    "classify_vertex",
    "dual",
    "graded_chain",
    "intersect",
    "is_automorphism",
    "is_order",
    "is_related_triple",
    "length",
    "norm",
    "para_mul",
    "parse_scalar",
    "product_span",
    "random_automorphism",
    "random_lattice",
    "reduce_lattice",
    "rho",
    "stabilizes",
    "standard_lattice",
    "theta",
]
