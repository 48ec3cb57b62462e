"""
qduflo: exact computations around the Duflo isomorphism.

Modules
    exactla     sparse rational linear algebra
    superpoly   supercommutative polynomials, vector fields, polyvectors
    liealg      Lie superalgebras, traces, invariants, CE cohomology
    uea         universal enveloping algebras and PBW symmetrization
    duflo       the strange automorphism and the multiplicativity check
    qmanifold   Q-structures, T_poly, Atiyah tensor, trace operators
    hochschild  Hochschild cochains, cup product, HKR, truncated HH
"""

from .exactla import DimensionCap, SparseMatrix, rank
from .liealg import LieSuperAlgebraSpec, validate, trace_power, invariants, chevalley_q
from .uea import EnvelopingAlgebra, phi_pbw
from .duflo import alpha_coefficients, phi_strange, duflo_verify
from .qmanifold import QStructure, q_validate, atiyah_tensor, ck_operator, chain_map_check
from .hochschild import hh_dimensions, theorem7_check, hkr_cochain, cup_product

__version__ = "0.1.0"
