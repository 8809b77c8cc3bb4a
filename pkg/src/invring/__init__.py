"""Invariant rings of finite matrix groups over Z, cyclotomic orders and F_p[t].

Exact computation of invariants, graded group cohomology, and degree-bounded
Cohen-Macaulay certificates for two-variable actions.
"""

from .coeff_rings import CoeffRing
from .group_action import FiniteMatrixGroup, GroupElement, generate_closure
from .polynomial import Poly

__all__ = ["CoeffRing", "FiniteMatrixGroup", "GroupElement", "Poly", "generate_closure"]
__version__ = "0.1.0"
