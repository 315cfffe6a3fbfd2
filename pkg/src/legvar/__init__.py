"""Exact computations for Legendrian varieties of pairs of matrices.

The ambient space is V = M_m x M_m with the symplectic form
``omega((A, B), (A', B')) = tr(A B'^T - A' B^T)``.  The package builds the
equations of the varieties Y, X_deg(m, k), X_inv(m) and their symmetric and
skew variants, classifies points into orbits of SL_m x SL_m, and produces
exact certificates (Lagrangian tangent spaces, smoothness, singularity).
"""

from __future__ import annotations

from .errors import (
    ArgumentError,
    InconclusiveError,
    LegvarError,
    MembershipError,
)
from .exact import Matrix
from .geometry import Certificate, singularity_certificate, tangent_space_codim
from .group import GroupElement, act, canonical_form, classify
from .poly import Polynomial
from .symplectic import PhaseVector, p1, p2
from .varieties import (
    EquationSet,
    equations_Xdeg,
    equations_Xinv,
    equations_Y,
    sample_deg,
    sample_inv,
)
from .variants import equations_Xinv_skew, equations_Xinv_sym

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "Certificate",
    "EquationSet",
    "GroupElement",
    "InconclusiveError",
    "LegvarError",
    "Matrix",
    "MembershipError",
    "PhaseVector",
    "Polynomial",
    "act",
    "canonical_form",
    "classify",
    "equations_Xdeg",
    "equations_Xinv",
    "equations_Xinv_skew",
    "equations_Xinv_sym",
    "equations_Y",
    "p1",
    "p2",
    "sample_deg",
    "sample_inv",
    "singularity_certificate",
    "tangent_space_codim",
]
