"""Decide whether a 2-group of monomial matrices containing a maximal cycle is
permutation-like and, when it is, construct a basis in which every element is
a permutation matrix."""

from .cyclotomic import CycloNum, CycloPoly, RootOfUnity, primitive_product_identity
from .engine import (
    GroupAnalysis,
    GroupSpec,
    commuting_adjust,
    enumerate_elements,
    normalize_torsion,
    permutation_like,
    validate,
)
from .errors import (
    ContradictionError,
    NotNormalizingError,
    OutsideScopeError,
    PermlikeError,
    PresentationError,
    SynthesisError,
    VerificationError,
)
from .monomial import CharPolyFactors, MonomialMatrix, char_factors, perm_similarity, relation_of
from .oracle import brute_char_poly, dense_expand, vandermonde_conjugate, verify_certificate
from .pipeline import check
from .residue import SubgroupDescriptor, UnitElement, geom_sum_valuation, orbit_pairing, orbits, unit_decompose
from .synth import PermBasisCertificate, cyclic_driver, noncyclic_driver, synthesize

__all__ = [
    "CharPolyFactors",
    "ContradictionError",
    "CycloNum",
    "CycloPoly",
    "GroupAnalysis",
    "GroupSpec",
    "MonomialMatrix",
    "NotNormalizingError",
    "OutsideScopeError",
    "PermBasisCertificate",
    "PermlikeError",
    "PresentationError",
    "RootOfUnity",
    "SubgroupDescriptor",
    "SynthesisError",
    "UnitElement",
    "VerificationError",
    "brute_char_poly",
    "char_factors",
    "check",
    "commuting_adjust",
    "cyclic_driver",
    "dense_expand",
    "enumerate_elements",
    "geom_sum_valuation",
    "noncyclic_driver",
    "normalize_torsion",
    "orbit_pairing",
    "orbits",
    "perm_similarity",
    "permutation_like",
    "primitive_product_identity",
    "relation_of",
    "synthesize",
    "unit_decompose",
    "validate",
    "vandermonde_conjugate",
    "verify_certificate",
]
