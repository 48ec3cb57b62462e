"""
From a Lie algebra to a Q-manifold and back.

g gives an odd vector field Q on g[1] with [Q,Q] = 0. Polyvector fields
with D = [Q, -] reproduce the Chevalley-Eilenberg complex with
coefficients in S(g). The second derivatives of Q form the Atiyah tensor,
whose traces c_k commute with D. On constant polyvectors they are the
Lie-side traces again.
"""

import random

from qduflo.cli.parse import load
from qduflo.duflo import apply_trace_operator
from qduflo.liealg import ce_complex, chevalley_q, invariants, trace_power
from qduflo.qmanifold import (atiyah_tensor, chain_map_check, ck_operator, de_rham_structure,
                              from_symmetric, function_cohomology, phi_strange_tpoly,
                              q_validate, tpoly_slice_matrix)

sl2 = load("sl2.alg")
Q = chevalley_q(sl2)
print("Q =", Q)
print("[Q,Q] = 0:", q_validate(Q).passed)

_, _, M = tpoly_slice_matrix(Q, 2, 1)
print("T_poly slice (multiplicity 2, degree 1) equals CE(sl2; S^2) d_1:",
      M == ce_complex(sl2, ("symmetric", 2)).d[1])

T = atiyah_tensor(Q)
print("c_T(d/dxi_h) as a matrix:", T.constant_matrix(2).to_dense())

cas = invariants(sl2, 2)[0]
P = from_symmetric(Q, cas)
print("\nCasimir as a bivector:", P)
print("c_2 on it:", ck_operator(Q, 2)(P), "| Lie side:",
      apply_trace_operator(trace_power(sl2, 2), cas))
print("strange on T_poly:", phi_strange_tpoly(Q, P, 1))

print("\nD commutes with c_1..c_4 on 50 random polyvectors:",
      chain_map_check(Q, samples=50).passed)

dgla = chevalley_q(load("dgla2.alg"))
print("DG example has a linear part:", bool(dgla.part(1)),
      "| Atiyah tensor ignores it:", atiyah_tensor(dgla) == atiyah_tensor(dgla.without_linear()))

dr = de_rham_structure(2, 4)
print("\nde Rham complex of R^2, polynomials of total degree <= 4:", function_cohomology(dr))
