"""
Hochschild cohomology of the Chevalley-Eilenberg algebra, and the
comparison map HKR∘strange.

For a Lie algebra g the functions on g[1] form the DG algebra (⋀g*, d).
Its Hochschild cohomology is computed in the largest subcomplex of
cochains of arity <= K, and matches the Lie cohomology with coefficients in
S^{<=K}(g). HKR∘strange then turns products of polyvector classes into
cup products, up to explicit coboundaries.
"""

from qduflo.cli.parse import load
from qduflo.hochschild import ce_algebra, hh_dimensions, theorem7_check
from qduflo.liealg import ce_cohomology

for name in ("solv2.alg", "abelian1.alg"):
    spec = load(name)
    A = ce_algebra(spec)
    print(name)
    for n in range(3):
        r = hh_dimensions(A, n, 3)
        lie = sum(ce_cohomology(spec, ("symmetric", b)).get(n, 0) for b in range(4))
        print(f"  HH^{n} at arity <= 3: {r.dimension}   sum_b H^{n}(g, S^b g): {lie}"
              f"   stable from cap 2: {r.stabilized}")

print("\nabelian algebras never stabilize: each S^b g contributes new classes.")

for name in ("solv2.alg", "abelian2.alg"):
    rep = theorem7_check(load(name), [0, 1, 2], 3)
    print(f"\n{name}: HKR∘strange multiplicative up to coboundaries: {rep.passed}")
    print(f"  {rep.pairs_checked} products checked, {rep.defects_nonzero} nonzero defects,"
          " each solved as an explicit coboundary")
