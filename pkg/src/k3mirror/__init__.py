"""Exact lattice arithmetic for mirror symmetry of lattice-polarized K3 surfaces."""

from .errors import (
    CapacityError,
    ConsistencyError,
    DegenerateLatticeError,
    DomainError,
    K3MirrorError,
    ParameterError,
)
from .zlattice import (
    Lattice,
    Signature,
    determinant,
    direct_sum,
    div,
    inner,
    is_even,
    k3_lattice,
    make_standard,
    rescale,
    root_count,
    signature,
)
from .discform import FiniteQuadraticForm, are_isomorphic, discriminant_form, fqf_direct_sum, fqf_negate
from .embed import Embedding, genus_equal, is_m_admissible, orthogonal_complement
from .mirror import k3_dual, mirror_lattice, mirror_of_polarization

__all__ = [
    "CapacityError",
    "ConsistencyError",
    "DegenerateLatticeError",
    "DomainError",
    "Embedding",
    "FiniteQuadraticForm",
    "K3MirrorError",
    "Lattice",
    "ParameterError",
    "Signature",
    "are_isomorphic",
    "determinant",
    "direct_sum",
    "discriminant_form",
    "div",
    "fqf_direct_sum",
    "fqf_negate",
    "genus_equal",
    "inner",
    "is_even",
    "is_m_admissible",
    "k3_dual",
    "k3_lattice",
    "make_standard",
    "mirror_lattice",
    "mirror_of_polarization",
    "orthogonal_complement",
    "rescale",
    "root_count",
    "signature",
]
