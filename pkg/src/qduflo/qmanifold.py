"""
Polynomial Q-manifolds: an odd vector field Q of degree +1 with [Q, Q] = 0
on a graded coordinate system.  Polyvectors carry the differential
D = [Q, -]; the flat Atiyah tensor of Q gives trace operators c_k on
polyvectors, and the HKR map sends polyvectors to Hochschild cochains.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .exactla import SparseMatrix, cohomology_dim, check_cap
from .superpoly import (CoordinateSystem, SuperPolynomial, VectorField, PolyvectorSpace,
                        lie_bracket, monomials, operator_matrix, schouten_bracket)


class QStructure:
    """An odd degree +1 vector field on ``coords``.  Squaring to zero is checked by q_validate."""

    def __init__(self, coords, components=None, max_poly_degree=None):
        self.field = VectorField(coords, components or {})
        self.coords = coords
        self.max_poly_degree = max_poly_degree

    @classmethod
    def from_field(cls, v, max_poly_degree=None):
        return cls(v.coords, v.components, max_poly_degree)

    @property
    def components(self):
        return self.field.components

    def __getitem__(self, name):
        return self.field[name]

    def __eq__(self, other):
        return isinstance(other, QStructure) and self.field == other.field

    def __call__(self, f):
        return self.field(f)

    def __str__(self):
        return str(self.field)

    def square(self):
        """[Q, Q] as a vector field (equal to 2 Q∘Q for odd Q)."""
        return lie_bracket(self.field, self.field)

    def parts(self):
        """{i: Q^(i)}: the components of polynomial degree i."""
        out = {}
        for name, p in self.field.components.items():
            for d in p.poly_degrees():
                out.setdefault(d, {})[name] = p.homogeneous_part(d)
        return {d: VectorField(self.coords, comps) for d, comps in sorted(out.items())}

    def part(self, i):
        return self.parts().get(i, VectorField(self.coords))

    def without_linear(self):
        return QStructure.from_field(self.field - self.part(1), self.max_poly_degree)

    @property
    def space(self):
        return PolyvectorSpace(self.coords)

    def polyvector(self):
        """Q as a polyvector of multiplicity 1."""
        return self.space.from_field(self.field)


@dataclass
class QCheck:
    name: str
    passed: bool
    witness: object = None

    def to_dict(self):
        return {"name": self.name, "passed": self.passed,
                "witness": None if self.witness is None else str(self.witness)}


@dataclass
class QReport:
    checks: list
    parts: dict

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks],
                "nonzero_parts": sorted(self.parts)}


def q_validate(Q):
    checks = []
    try:
        degs = Q.field.degrees()
        ok = degs <= {1}
        checks.append(QCheck("degree_plus_one", ok, None if ok else sorted(degs)))
    except ValueError as exc:
        checks.append(QCheck("degree_plus_one", False, exc))
    parts = Q.parts()
    checks.append(QCheck("no_constant_part", 0 not in parts,
                         parts.get(0)))
    if not checks[0].passed:
        checks.append(QCheck("square_zero", False, "not checked: Q is not of degree +1"))
        return QReport(checks, parts)
    sq = Q.square()
    checks.append(QCheck("square_zero", sq.is_zero(), None if sq.is_zero() else sq))
    return QReport(checks, parts)


# ---------------------------------------------------------------------------
# polyvectors and D = [Q, -]

def tpoly_differential(Q, P):
    """D(P) = [Q, P] with the Schouten bracket on the doubled coordinates."""
    space = Q.space
    return schouten_bracket(Q.polyvector(), P, space)


def tpoly_basis(Q, multiplicity, base_poly_degree):
    return Q.space.basis(multiplicity, base_poly_degree)


def tpoly_slice_matrix(Q, multiplicity, base_poly_degree, shift=1):
    """
    Matrix of D from the polyvectors of given multiplicity and base polynomial
    degree d to those of degree d + shift (homogeneous Q of polynomial degree
    shift + 1).  Used for the Lie-algebra case, where D raises the ξ-degree by one.
    """
    space = Q.space
    src = space.basis(multiplicity, base_poly_degree)
    tgt = space.basis(multiplicity, base_poly_degree + shift)
    check_cap(max(len(src), len(tgt)), "polyvector slice")
    qp = Q.polyvector()
    return src, tgt, operator_matrix(lambda P: schouten_bracket(qp, P, space),
                                     src, tgt, space.coords)


@dataclass
class TruncatedComplex:
    """Graded pieces {degree: basis} and differentials {degree: matrix}."""
    bases: dict
    d: dict
    label: str = ""

    def dim(self, n):
        return len(self.bases.get(n, ()))

    def cohomology(self, n):
        m = self.dim(n)
        d_in = self.d.get(n - 1, SparseMatrix(m, self.dim(n - 1)))
        d_out = self.d.get(n, SparseMatrix(self.dim(n + 1), m))
        return cohomology_dim(d_in, d_out)

    def square_zero(self):
        return all((self.d[n + 1] @ self.d[n]).is_zero() for n in self.d if n + 1 in self.d)


def tpoly_complex(Q, degrees, max_multiplicity, max_base_degree):
    """
    The quotient of (T_poly, D) by polyvectors of multiplicity above
    ``max_multiplicity`` or base polynomial degree above ``max_base_degree``,
    graded by total degree.  Both discarded pieces are subcomplexes when Q has
    no constant part, so this is a quotient complex.
    """
    space = Q.space
    coords = space.coords
    wanted = set(degrees) | {n + 1 for n in degrees} | {n - 1 for n in degrees}
    bases = {n: [] for n in wanted}
    for m in range(max_multiplicity + 1):
        for b in range(max_base_degree + 1):
            for e in space.basis(m, b):
                t = space.total_degree(e)
                if t in bases:
                    bases[t].append(e)
    for n, b in bases.items():
        check_cap(len(b), f"T_poly degree {n}")
    qp = Q.polyvector()

    def op(P):
        return schouten_bracket(qp, P, space)
    d = {}
    for n in sorted(wanted):
        if n + 1 in bases:
            d[n] = operator_matrix(op, bases[n], bases[n + 1], coords, strict=False)
    return TruncatedComplex(bases, d, "tpoly")


def tpoly_cohomology(Q, degrees, max_multiplicity, max_base_degree):
    cx = tpoly_complex(Q, degrees, max_multiplicity, max_base_degree)
    return {n: cx.cohomology(n) for n in degrees}


def random_polyvector(Q, rng, max_multiplicity=3, max_base_degree=3, terms=4, homogeneous=True):
    """A random polyvector with small integer coefficients; total-degree homogeneous by default."""
    space = Q.space
    pool = [e for m in range(max_multiplicity + 1) for b in range(max_base_degree + 1)
            for e in space.basis(m, b)]
    if not pool:
        return space.coords.zero()
    first = rng.choice(pool)
    if homogeneous:
        t = space.total_degree(first)
        pool = [e for e in pool if space.total_degree(e) == t]
    picks = [first] + [rng.choice(pool) for _ in range(terms - 1)]
    return SuperPolynomial(space.coords, {e: rng.randint(-3, 3) or 1 for e in picks})


# ---------------------------------------------------------------------------
# the Atiyah tensor and trace operators

@dataclass
class AtiyahTensor:
    """
    Components A[i][j][k] = ±∂_i ∂_j Q^k (left derivatives, ∂_i outermost),
    with sign (-1)^{|x_i|(|x_j|+1)}.
    """
    coords: CoordinateSystem
    components: dict   # (i, j, k) -> SuperPolynomial, zeros omitted

    def __eq__(self, other):
        return (isinstance(other, AtiyahTensor) and self.coords == other.coords
                and self.components == other.components)

    def is_zero(self):
        return not self.components

    def get(self, i, j, k):
        return self.components.get((i, j, k), self.coords.zero())

    def matrix(self, i):
        """The endomorphism c_T(∂_i): ∂_j -> Σ_k A_ij^k ∂_k, as {(k, j): poly}."""
        return {(k, j): p for (a, j, k), p in self.components.items() if a == i}

    def constant_matrix(self, i):
        """c_T(∂_i) when it has constant entries; raises otherwise."""
        n = len(self.coords)
        ent = {}
        for (k, j), p in self.matrix(i).items():
            if p.poly_degrees() != {0}:
                raise ValueError("Atiyah tensor is not constant")
            ent[k, j] = p.constant_term()
        return SparseMatrix(n, n, ent)


def atiyah_tensor(Q):
    coords = Q.coords
    comps = {}
    for kname, qk in Q.components.items():
        k = coords.index(kname)
        for j, jname in enumerate(coords.names):
            dj = qk.partial(jname)
            if not dj:
                continue
            for i, iname in enumerate(coords.names):
                dij = dj.partial(iname)
                if dij:
                    # sign normalizing c_T(∂_l) = -ad(g_l) for odd and even l alike
                    odd_i, odd_j = coords.odd[i], coords.odd[j]
                    comps[i, j, k] = dij.scale(-1) if odd_i and not odd_j else dij
    return AtiyahTensor(coords, comps)


def _mat_mul(a, b, zero):
    """Product of sparse polynomial matrices {(row, col): poly}."""
    by_row = {}
    for (r, c), v in b.items():
        by_row.setdefault(r, []).append((c, v))
    out = {}
    for (r, m), u in a.items():
        for c, v in by_row.get(m, ()):
            out[r, c] = out.get((r, c), zero) + u * v
    return {key: v for key, v in out.items() if v}


def _trace(mat, coords, zero):
    """Tr = -str over the coordinates: the supertrace with the parity of X[-1].

    On g[1] this is the supertrace on g, so c_k agrees with the Lie-side
    trace polynomials."""
    out = zero
    for (r, c), v in mat.items():
        if r == c:
            out = out + v if coords.odd[r] else out - v
    return out


class TraceOperator:
    """
    c_k on polyvectors: P -> Σ_{i_1..i_k} Tr(A_{i_1}⋯A_{i_k}) ∂_{θ_{i_1}}⋯∂_{θ_{i_k}} P,
    the sum running over all ordered index sequences.
    """

    def __init__(self, Q, k, tensor=None):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.Q = Q
        self.k = k
        self.space = Q.space
        tensor = tensor or atiyah_tensor(Q)
        coords = Q.coords
        zero = coords.zero()
        mats = [tensor.matrix(i) for i in range(len(coords))]
        coeffs = {}

        def walk(seq, prod):
            if len(seq) == k:
                tr = _trace(prod, coords, zero)
                if tr:
                    coeffs[tuple(seq)] = tr
                return
            for i, m in enumerate(mats):
                if not m:
                    continue
                nxt = m if prod is None else _mat_mul(prod, m, zero)
                if nxt:
                    walk(seq + [i], nxt)
        walk([], None)
        self.coefficients = coeffs

    def is_zero(self):
        return not self.coefficients

    def __call__(self, P):
        space = self.space
        out = space.coords.zero()
        for seq, tr in self.coefficients.items():
            R = P
            for i in reversed(seq):
                R = R.partial(space.theta_names[i])
                if not R:
                    break
            if R:
                out = out + space.lift(tr) * R
        return out


def ck_operator(Q, k, tensor=None):
    return TraceOperator(Q, k, tensor)


def from_symmetric(Q, p):
    """
    S(g) -> constant polyvectors on g[1] for Q = chevalley_q(spec):
    g_{i1}⋯g_{in} -> θ_{in}⋯θ_{i1}. The order reversal costs the sign
    (-1)^{o(o-1)/2}, o the number of odd factors; it is what makes c_k here
    agree with the Lie-side trace operators for superalgebras.
    """
    space = Q.space
    n = space.n
    if len(p.coords) != n:
        raise ValueError("polynomial and Q-structure have different dimensions")
    odd = [not o for o in Q.coords.odd]
    out = {}
    for e, c in p.terms.items():
        o = sum(m for m, od in zip(e, odd) if od)
        out[(0,) * n + tuple(e)] = -c if (o * (o - 1) // 2) % 2 else c
    return SuperPolynomial(space.coords, out)


def to_symmetric(Q, P, coords):
    """Inverse of from_symmetric on constant polyvectors; coords are the S(g) coordinates."""
    n = Q.space.n
    odd = [not o for o in Q.coords.odd]
    out = {}
    for e, c in P.terms.items():
        if any(e[:n]):
            raise ValueError("polyvector is not constant")
        t = e[n:]
        o = sum(m for m, od in zip(t, odd) if od)
        out[tuple(t)] = -c if (o * (o - 1) // 2) % 2 else c
    return SuperPolynomial(coords, out)


def phi_strange_tpoly(Q, P, K):
    """exp(Σ_{k=1..K} α_{2k} c_{2k}) applied to P; exact once 2K >= top multiplicity."""
    from .duflo import alpha_coefficients
    space = Q.space
    top = max(space.multiplicities(P), default=0)
    if 2 * K < top:
        raise ValueError(f"K={K} too small for multiplicity {top}")
    alphas = alpha_coefficients(K).coefficients
    tensor = atiyah_tensor(Q)
    ops = [(a, ck_operator(Q, 2 * (k + 1), tensor)) for k, a in enumerate(alphas)]
    ops = [(a, op) for a, op in ops if not op.is_zero()]

    def X(R):
        out = space.coords.zero()
        for a, op in ops:
            out = out + op(R).scale(a)
        return out
    out = P
    term = P
    m = 0
    while term:
        m += 1
        term = X(term).scale(Fraction(1, m))
        out = out + term
    return out


# ---------------------------------------------------------------------------
# the Hessian cocycle: H_v(a, b) = ∇_a ∇_b v - ∇_{∇_a b} v for the flat connection

def _nabla(a, b):
    """Flat connection ∇_a b = Σ_k a(b^k) ∂_k."""
    return VectorField(a.coords, {n: a(p) for n, p in b.components.items()})


def hessian(v, a, b):
    return _nabla(a, _nabla(b, v)) - _nabla(_nabla(a, b), v)


def _parity(v):
    return v.parity() if v else 0


def lie_derivative_hessian(q, v, a, b):
    """
    (L_q H_v)(a, b). The slots a, b sit to the left of v, so q is moved
    past them: [q, H(a,b)] = H([q,a], b) + ± H(a, [q,b]) + ± (L_q H)(a, b).
    """
    pq, pa, pb = _parity(q), _parity(a), _parity(b)
    out = lie_bracket(q, hessian(v, a, b)) - hessian(v, lie_bracket(q, a), b)
    s = -1 if pq * pa % 2 else 1
    out = out - hessian(v, a, lie_bracket(q, b)).scale(s)
    return out.scale(-1 if pq * (pa + pb) % 2 else 1)


def _coordinate_fields(coords):
    return [VectorField(coords, {n: coords.one()}) for n in coords.names]


@dataclass
class ChainMapReport:
    passed: bool
    checks: list

    def to_dict(self):
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def chain_map_check(Q, k=4, samples=50, seed=0, max_multiplicity=3, max_base_degree=3,
                    polyvectors=None):
    """
    D∘c_j = c_j∘D for j = 1..k on sample polyvectors, plus the cocycle
    identity of the Atiyah class evaluated at (Q, Q):
    H_{[Q,Q]} - 2 L_Q H_Q = 0 on all pairs of coordinate fields.
    """
    rng = random.Random(seed)
    tensor = atiyah_tensor(Q)
    ops = [ck_operator(Q, j, tensor) for j in range(1, k + 1)]
    if polyvectors is None:
        polyvectors = [random_polyvector(Q, rng, max_multiplicity, max_base_degree)
                       for _ in range(samples)]
    checks = []
    bad = None
    for P in polyvectors:
        DP = tpoly_differential(Q, P)
        for op in ops:
            if op.is_zero():
                continue
            diff = tpoly_differential(Q, op(P)) - op(DP)
            if diff:
                bad = (op.k, P, diff)
                break
        if bad:
            break
    checks.append(QCheck("D_commutes_with_c_k", bad is None, bad))
    fields = _coordinate_fields(Q.coords)
    q = Q.field
    sq = Q.square()
    bad = None
    for a in fields:
        for b in fields:
            lhs = hessian(sq, a, b) - lie_derivative_hessian(q, q, a, b).scale(2)
            if lhs:
                bad = (a, b, lhs)
                break
            if lie_derivative_hessian(q, q, a, b):
                bad = (a, b, "L_Q H_Q != 0")
                break
        if bad:
            break
    checks.append(QCheck("atiyah_cocycle_at_Q", bad is None, bad))
    return ChainMapReport(all(c.passed for c in checks), checks)


# ---------------------------------------------------------------------------
# de Rham structure and function cohomology

def de_rham_structure(n, max_poly_degree=4):
    """T[1]R^n with coordinates x_i (degree 0), dx_i (degree 1) and Q = Σ dx_i ∂/∂x_i."""
    if n < 1:
        raise ValueError("n must be >= 1")
    xs = [f"x{i}" for i in range(1, n + 1)] if n > 1 else ["x"]
    pairs = [(x, 0) for x in xs] + [("d" + x, 1) for x in xs]
    coords = CoordinateSystem(pairs)
    comps = {x: coords.var("d" + x) for x in xs}
    return QStructure(coords, comps, max_poly_degree)


def function_complex(Q, max_poly_degree=None):
    """
    Functions of total polynomial degree <= the truncation, graded by
    cohomological degree, with differential Q.  Each polynomial-degree piece
    is preserved when Q is linear; in general the high part is a subcomplex
    and this is the quotient.
    """
    B = Q.max_poly_degree if max_poly_degree is None else max_poly_degree
    if B is None:
        B = _finite_top(Q.coords)
    coords = Q.coords
    bases = {}
    for b in range(B + 1):
        for e in monomials(coords, b):
            bases.setdefault(coords.mono_degree(e), []).append(e)
    for n, b in bases.items():
        check_cap(len(b), f"functions of degree {n}")
    d = {}
    lo, hi = min(bases), max(bases)
    for n in range(lo - 1, hi + 1):
        src = bases.get(n, [])
        tgt = bases.get(n + 1, [])
        d[n] = operator_matrix(Q.field, src, tgt, coords, strict=False)
    return TruncatedComplex(bases, d, "functions")


def _finite_top(coords):
    if not all(coords.odd):
        raise ValueError("even coordinates present: a polynomial truncation degree is required")
    return len(coords)


def function_cohomology(Q, max_poly_degree=None):
    cx = function_complex(Q, max_poly_degree)
    return {n: cx.cohomology(n) for n in sorted(cx.bases)}


# ---------------------------------------------------------------------------
# HKR

def hkr(P, algebra, space=None):
    """
    The HKR cochain of a polyvector P on the function algebra ``algebra``
    (a FiniteDGAlgebra built by hochschild.function_algebra).  On the
    multiplicity-k part it is the symmetrized multiderivation

        (a_1, ..., a_k) -> (1/k!) Σ_{i_1..i_k} ± (∂_{θ_{i_1}}⋯∂_{θ_{i_k}} P) ∂_{i_1}a_1 ⋯ ∂_{i_k}a_k

    with Koszul signs for the suspended arguments.  Returns a dict
    {arity: HochschildCochain}; see hochschild.hkr_cochain for the sign rule.
    """
    from .hochschild import hkr_cochain
    if space is None:
        space = PolyvectorSpace(algebra.coords)
    out = {}
    for k in sorted(space.multiplicities(P)):
        part = space.multiplicity_part(P, k)
        out[k] = hkr_cochain(part, k, algebra, space)
    return out


def hkr_total(P, algebra, space=None):
    """hkr(P) as a single (possibly mixed-arity) cochain sum."""
    from .hochschild import CochainSum
    return CochainSum(list(hkr(P, algebra, space).values()), algebra)


__all__ = [
    "QStructure", "q_validate", "tpoly_differential", "tpoly_slice_matrix", "tpoly_complex",
    "tpoly_cohomology", "from_symmetric", "to_symmetric", "AtiyahTensor", "atiyah_tensor", "ck_operator", "TraceOperator",
    "chain_map_check", "phi_strange_tpoly", "hkr", "de_rham_structure", "function_complex",
    "function_cohomology", "hessian", "lie_derivative_hessian", "random_polyvector",
]
