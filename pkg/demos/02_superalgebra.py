"""
The same statement for the Lie superalgebra osp(1|2).

Odd generators x, y anticommute in S(g), traces become supertraces, and
symmetrization carries Koszul signs. The invariants now start with a
quadratic Casimir that mixes even and odd parts.
"""

from qduflo.cli.parse import load
from qduflo.duflo import duflo_verify
from qduflo.liealg import invariants, trace_power, validate

osp = load("osp12.alg")
print("basis:", [f"{n}:{d}" for n, d in osp.basis.pairs()])
print("graded Jacobi etc.:", validate(osp).passed)
print("str(ad_x^2) =", trace_power(osp, 2).poly)
print("invariants by degree:", [len(invariants(osp, n)) for n in range(5)])

rep = duflo_verify(osp, 4)
print("Duflo map multiplicative up to degree 4:", rep.passed)
print("naive symmetrization witness:", rep.naive_witness)
