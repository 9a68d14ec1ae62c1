"""Burnside rings of monoid functors over small finite groups.

Exact-arithmetic construction of Ω(G, M): basis enumeration, products,
mark and ghost homomorphisms, fundamental exact sequences at every prime,
primitive idempotents, unit groups, and partial Burnside rings.
"""

from .arith import INF, parse_p
from .errors import BurnsideError
from .groups import FiniteGroup, builtin_group, group_from_cayley, group_from_permutations
from .functors import (
    MonoidFunctor,
    conormal_functor,
    crossed_functor,
    lattice_functor,
    monomial_functor,
    slice_functor,
    trivial_functor,
)
from .rings import (
    BasisSystem,
    RingElement,
    axiom_report,
    basis_element,
    basis_system,
    conjugate,
    element_from_json,
    induce,
    one,
    restrict,
    zero,
)
from .ghost import (
    FundamentalReport,
    GhostVector,
    ObsVector,
    alpha,
    alpha_phi,
    beta,
    beta_tilde,
    phi,
    phi_matrix,
    psi,
    psi_matrix,
    psi_tilde,
    sigma_inverse,
    verify_fundamental,
)
from .spectra import (
    connectivity_tests,
    equivalence_classes,
    idempotents_local,
    idempotents_rational,
)
from .units import abelian_conormal_generators, lifts, theta, unit_group
from .partial import (
    PartialSystem,
    build_partial,
    partial_idempotents,
    partial_marks,
    partial_multiply,
    section_system,
    verify_partial,
)

__all__ = [
    "INF",
    "parse_p",
    "BurnsideError",
    "FiniteGroup",
    "builtin_group",
    "group_from_cayley",
    "group_from_permutations",
    "MonoidFunctor",
    "conormal_functor",
    "crossed_functor",
    "lattice_functor",
    "monomial_functor",
    "slice_functor",
    "trivial_functor",
    "BasisSystem",
    "RingElement",
    "axiom_report",
    "basis_element",
    "basis_system",
    "conjugate",
    "element_from_json",
    "induce",
    "one",
    "restrict",
    "zero",
    "FundamentalReport",
    "GhostVector",
    "ObsVector",
    "alpha",
    "alpha_phi",
    "beta",
    "beta_tilde",
    "phi",
    "phi_matrix",
    "psi",
    "psi_matrix",
    "psi_tilde",
    "sigma_inverse",
    "verify_fundamental",
    "connectivity_tests",
    "equivalence_classes",
    "idempotents_local",
    "idempotents_rational",
    "abelian_conormal_generators",
    "lifts",
    "theta",
    "unit_group",
    "PartialSystem",
    "build_partial",
    "partial_idempotents",
    "partial_marks",
    "partial_multiply",
    "section_system",
    "verify_partial",
]

__version__ = "0.1.0"
