"""Exact invariants of abelian Galois covers of projective space: building
data, Jacobi modules, Macaulay duality, eigenspace Hodge numbers and the
first piece of the infinitesimal variation of Hodge structure."""

__version__ = "0.1.0"

from .cover import (  # noqa: E402
    BranchComponent,
    CoverData,
    bott_dim,
    derive_eigensheaf_degrees,
    validate,
)
from .groups import AbelianGroup, Character, GroupElement, enumerate_characters  # noqa: E402
from .ivhs import (  # noqa: E402
    CoverInvariants,
    hodge_eigentable,
    invariant_tangent_dim,
    kernel_analysis,
    rho_map,
    torelli_certificate,
)
from .jacobi import JacobiContext, duality_pairing, jacobi_dim, top_piece_check  # noqa: E402
from .poly import HomogPoly, random_section  # noqa: E402

__all__ = [
    "AbelianGroup",
    "BranchComponent",
    "Character",
    "CoverData",
    "CoverInvariants",
    "GroupElement",
    "HomogPoly",
    "JacobiContext",
    "bott_dim",
    "derive_eigensheaf_degrees",
    "duality_pairing",
    "enumerate_characters",
    "hodge_eigentable",
    "invariant_tangent_dim",
    "jacobi_dim",
    "kernel_analysis",
    "random_section",
    "rho_map",
    "top_piece_check",
    "torelli_certificate",
    "validate",
]
