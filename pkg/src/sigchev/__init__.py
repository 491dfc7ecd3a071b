"""Exact computations with difference rings, pseudo fields and their prime ideals."""

__version__ = "0.1.0"

from .errors import *  # noqa: F403
from . import errors as _errors
from .fieldtower import (
    GF,
    QQ,
    FieldElement,
    FieldMorphism,
    FieldTower,
    UPoly,
    extend_algebraic,
    extend_transcendental,
    factor_univariate,
    make_morphism,
    tensor_decompose,
)
from .pseudofield import (
    PseudoField,
    apply_sigma,
    compat_test,
    idempotents,
    make_pseudofield,
    sigma_field,
    trivial_extension,
)
from .polyring import Ideal, Poly, PolyRing
from .diffpoly import (
    DiffPolyRing,
    benign_quadratic,
    limit_degree,
    reinterpret_power,
    ritt_reduce,
)
from .sigmaideal import (
    Inclusion,
    SigmaAlgebra,
    SigmaIdeal,
    chevalley_witness,
    lift_search,
    notin_sigma,
    pseudo_prime_assemble,
    sigma_stability,
)
from .kernels import inversive_closure, make_kernel, prolong, realize, spec_transport
from .galois import (
    constraint_search,
    delta_constants,
    dmatrix,
    make_deltasigma_field,
    pseudo_simple_probe,
    pv_construct,
    sigma_l_isomorphism_search,
    sigma_separability_witness,
)

__all__ = ["__version__"] + [n for n in dir(_errors) if n[0].isupper()] + [
    "GF",
    "QQ",
    "FieldElement",
    "FieldMorphism",
    "FieldTower",
    "UPoly",
    "extend_algebraic",
    "extend_transcendental",
    "factor_univariate",
    "make_morphism",
    "tensor_decompose",
    "PseudoField",
    "apply_sigma",
    "compat_test",
    "idempotents",
    "make_pseudofield",
    "sigma_field",
    "trivial_extension",
    "DiffPolyRing",
    "benign_quadratic",
    "limit_degree",
    "reinterpret_power",
    "ritt_reduce",
    "Inclusion",
    "SigmaAlgebra",
    "SigmaIdeal",
    "chevalley_witness",
    "lift_search",
    "notin_sigma",
    "pseudo_prime_assemble",
    "sigma_stability",
    "constraint_search",
    "delta_constants",
    "dmatrix",
    "make_deltasigma_field",
    "pseudo_simple_probe",
    "pv_construct",
    "sigma_l_isomorphism_search",
    "sigma_separability_witness",
    "Ideal",
    "Poly",
    "PolyRing",
    "inversive_closure",
    "make_kernel",
    "prolong",
    "realize",
    "spec_transport",
]
