"""
Why the PBW symmetrization needs a correction on invariants.

On sl(2) the Casimir generates the invariants of S(g). Its square is
sent by plain symmetrization to something other than the square of the
image of the Casimir in U(g). Composing with the strange automorphism
fixes this.
"""

from qduflo.cli.parse import load
from qduflo.duflo import alpha_coefficients, duflo_verify, phi_strange
from qduflo.liealg import invariants, trace_power
from qduflo.uea import EnvelopingAlgebra, phi_pbw, is_central

sl2 = load("sl2.alg")
U = EnvelopingAlgebra(sl2)

cas = invariants(sl2, 2)[0]
print("Casimir in S(g):", cas)
print("its image in U(g):", phi_pbw(U, cas), "| central:", is_central(phi_pbw(U, cas)))

naive = phi_pbw(U, cas * cas) - U.star(phi_pbw(U, cas), phi_pbw(U, cas))
print("\nsymmetrization is not multiplicative:")
print("  phi(Cas^2) - phi(Cas)*phi(Cas) =", naive)

print("\nthe correction uses c_k(x) = tr(ad_x^k) and the series")
print("  sum a_2k x^2k = log sqrt(sinh(x/2)/(x/2)):", alpha_coefficients(3).coefficients)
print("  c_2 =", trace_power(sl2, 2).poly)
print("  strange(Cas) =", phi_strange(sl2, cas))

rep = duflo_verify(sl2, 6, 3)
print(f"\nall {len(rep.pairs)} invariant pairs up to degree 6 multiply exactly:", rep.passed)
