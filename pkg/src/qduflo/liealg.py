"""
Finite-dimensional Lie superalgebras given by structure constants.

An algebra is a graded basis plus constants c_ij^k with
[g_i, g_j] = sum_k c_ij^k g_k, optionally with a degree +1 differential
(a DG Lie algebra).  Parity is degree mod 2.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exactla import (GradedBasis, SparseMatrix, CompositionNotZero, check_cap,
                      kernel_basis, cohomology_dim, perm_sign, rational)
from .superpoly import (CoordinateSystem, SuperPolynomial, VectorField, monomials,
                        operator_matrix, poly_of)


class JacobiFailure(ValueError):
    pass


@dataclass(frozen=True)
class LieSuperAlgebraSpec:
    basis: GradedBasis
    constants: dict = field(default_factory=dict)      # (i, j) -> {k: Fraction}
    differential: dict = field(default_factory=dict)   # i -> {k: Fraction}
    name: str = ""

    def __post_init__(self):
        n = len(self.basis)
        cons = {}
        for (i, j), out in self.constants.items():
            row = {k: rational(v) for k, v in out.items() if v}
            for k in row:
                if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                    raise IndexError(f"structure constant ({i},{j},{k}) out of range")
            if row:
                cons[i, j] = row
        diff = {}
        for i, out in self.differential.items():
            row = {k: rational(v) for k, v in out.items() if v}
            if row:
                diff[i] = row
        object.__setattr__(self, "constants", cons)
        object.__setattr__(self, "differential", diff)

    def __hash__(self):
        return hash((self.basis, frozenset((k, frozenset(v.items()))
                                           for k, v in self.constants.items()),
                     frozenset((k, frozenset(v.items()))
                               for k, v in self.differential.items())))

    def __eq__(self, other):
        return (isinstance(other, LieSuperAlgebraSpec) and self.basis == other.basis
                and self.constants == other.constants
                and self.differential == other.differential)

    @classmethod
    def from_brackets(cls, basis_pairs, brackets, differential=None, name="",
                      complete=True):
        """
        Build from named brackets, e.g. ``{("e", "f"): {"h": 1}}``.

        With ``complete`` the partner [b, a] = -(-1)^{|a||b|} [a, b] is
        filled in whenever it is not given explicitly.
        """
        basis = GradedBasis.from_pairs(basis_pairs)
        idx = {n: i for i, n in enumerate(basis.names)}
        cons = {}
        for (a, b), out in brackets.items():
            cons[idx[a], idx[b]] = {idx[k]: rational(v) for k, v in out.items()}
        if complete:
            for (i, j), out in list(cons.items()):
                if (j, i) not in cons:
                    s = -1 if basis.parity(i) * basis.parity(j) else 1
                    cons[j, i] = {k: -s * v for k, v in out.items()}
        diff = {}
        for a, out in (differential or {}).items():
            diff[idx[a]] = {idx[k]: rational(v) for k, v in out.items()}
        return cls(basis, cons, diff, name)

    # ------------------------------------------------------------------

    @property
    def dim(self):
        return len(self.basis)

    @property
    def names(self):
        return self.basis.names

    def parity(self, i):
        return self.basis.parity(i)

    def is_even(self):
        """Purely even and concentrated in degree 0 (an ordinary Lie algebra)."""
        return all(d == 0 for d in self.basis.degrees)

    def c(self, i, j, k):
        return self.constants.get((i, j), {}).get(k, Fraction(0))

    def bracket_basis(self, i, j):
        return dict(self.constants.get((i, j), {}))

    def bracket(self, u, v):
        """Bracket of vectors {index: coeff} with rational coefficients."""
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.constants.get((i, j), {}).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: x for k, x in out.items() if x}

    def d(self, u):
        out = {}
        for i, a in u.items():
            for k, c in self.differential.get(i, {}).items():
                out[k] = out.get(k, 0) + a * c
        return {k: x for k, x in out.items() if x}

    def vector(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.basis.index(name_or_index)
        return {i: Fraction(1)}

    def vector_parity(self, u):
        ps = {self.parity(i) for i in u}
        if len(ps) > 1:
            raise ValueError("inhomogeneous element")
        return ps.pop() if ps else 0

    def symmetric_coords(self):
        """Coordinates for S(g): one generator per basis element."""
        return CoordinateSystem(self.basis.pairs())

    def dual_coords(self):
        """Coordinates a_i on g, so that x = sum a_i g_i is even of degree 0."""
        return CoordinateSystem([(n + "'", -d) for n, d in self.basis.pairs()])


# ---------------------------------------------------------------------------
# validation

@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None

    def to_dict(self):
        return {"name": self.name, "passed": self.passed,
                "witness": None if self.witness is None else str(self.witness)}


@dataclass
class ValidationReport:
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _first_failure(spec, pred):
    n = spec.dim
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not pred(i, j, k):
                    names = spec.names
                    return (names[i], names[j], names[k])
    return None


def validate(spec):
    """Antisymmetry, degree compatibility, Jacobi (and DG axioms when present)."""
    n = spec.dim
    deg = spec.basis.degrees
    par = spec.basis.parities
    checks = []

    def antisym(i, j, k):
        s = -1 if par[i] * par[j] else 1
        return spec.c(i, j, k) == -s * spec.c(j, i, k)
    w = _first_failure(spec, antisym)
    checks.append(Check("antisymmetry", w is None, w))

    def degrees(i, j, k):
        return spec.c(i, j, k) == 0 or deg[k] == deg[i] + deg[j]
    w = _first_failure(spec, degrees)
    checks.append(Check("degree_compatibility", w is None, w))

    def jacobi(i, j, k):
        x, y, z = spec.vector(i), spec.vector(j), spec.vector(k)
        lhs = spec.bracket(x, spec.bracket(y, z))
        r1 = spec.bracket(spec.bracket(x, y), z)
        r2 = spec.bracket(y, spec.bracket(x, z))
        s = -1 if par[i] * par[j] else 1
        rhs = dict(r1)
        for t, v in r2.items():
            rhs[t] = rhs.get(t, 0) + s * v
        return {t: v for t, v in lhs.items() if v} == {t: v for t, v in rhs.items() if v}
    w = _first_failure(spec, jacobi)
    checks.append(Check("jacobi", w is None, w))

    if spec.differential:
        bad = None
        for i, out in spec.differential.items():
            for k in out:
                if deg[k] != deg[i] + 1:
                    bad = (spec.names[i], spec.names[k])
        checks.append(Check("differential_degree", bad is None, bad))
        bad = None
        for i in range(n):
            if spec.d(spec.d(spec.vector(i))):
                bad = spec.names[i]
                break
        checks.append(Check("differential_squares_to_zero", bad is None, bad))

        def leibniz(i, j, _k):
            x, y = spec.vector(i), spec.vector(j)
            lhs = spec.d(spec.bracket(x, y))
            r1 = spec.bracket(spec.d(x), y)
            r2 = spec.bracket(x, spec.d(y))
            s = -1 if par[i] else 1
            rhs = dict(r1)
            for t, v in r2.items():
                rhs[t] = rhs.get(t, 0) + s * v
            return lhs == {t: v for t, v in rhs.items() if v}
        w = _first_failure(spec, leibniz)
        checks.append(Check("differential_leibniz", w is None, w and w[:2]))

    # independent route: the Chevalley vector field squares to zero
    q = _chevalley_field(spec)
    from .qmanifold import QStructure
    sq = QStructure(q.coords, q.components).square()
    checks.append(Check("chevalley_square_zero", sq.is_zero(), None if sq.is_zero() else sq))
    return ValidationReport(checks)


# ---------------------------------------------------------------------------
# adjoint action and traces

def ad_matrix(spec, x):
    """Matrix of ad(x) = [x, -] in the fixed basis; x is a {index: coeff} vector."""
    ent = {}
    for i, a in x.items():
        for j in range(spec.dim):
            for k, c in spec.constants.get((i, j), {}).items():
                ent[k, j] = ent.get((k, j), 0) + a * c
    return SparseMatrix(spec.dim, spec.dim, ent)


def ad_field(spec, i, coords=None):
    """ad(g_i) extended as a derivation of S(g) (a vector field on S(g) coordinates)."""
    coords = coords or spec.symmetric_coords()
    comps = {}
    gens = coords.gens()
    for j in range(spec.dim):
        p = coords.zero()
        for k, c in spec.constants.get((i, j), {}).items():
            p = p + gens[k].scale(c)
        if p:
            comps[coords.names[j]] = p
    return VectorField(coords, comps)


def coad_field(spec, i, coords=None):
    """
    Coadjoint action of g_i on the dual coordinates a_k, as a derivation:
    (g_i . a_k) = -(-1)^{|g_i||a_k|} sum_j c_ij^k a_j.
    """
    coords = coords or spec.dual_coords()
    gens = coords.gens()
    comps = {}
    for k in range(spec.dim):
        p = coords.zero()
        s = -1 if spec.parity(i) * spec.parity(k) else 1
        for j in range(spec.dim):
            c = spec.c(i, j, k)
            if c:
                p = p + gens[j].scale(-s * c)
        if p:
            comps[coords.names[k]] = p
    return VectorField(coords, comps)


@dataclass(frozen=True)
class TraceElement:
    k: int
    poly: SuperPolynomial

    def __str__(self):
        return f"c_{self.k} = {self.poly}"


def _ad_generic(spec):
    """ad_x for x = sum a_i g_i: matrix entries M[k][j] in the dual coordinates."""
    coords = spec.dual_coords()
    a = coords.gens()
    M = {}
    for i in range(spec.dim):
        for j in range(spec.dim):
            for k, c in spec.constants.get((i, j), {}).items():
                M[k, j] = M.get((k, j), coords.zero()) + a[i].scale(c)
    return coords, M


def trace_power(spec, k):
    """c_k: the polynomial x -> str(ad_x^k) on g, an element of S^k(g*)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    coords, M = _ad_generic(spec)
    n = spec.dim
    # P = ad_x^m as coefficients P[l][j]: ad_x^m g_j = sum_l P[l, j] g_l
    P = {(j, j): coords.one() for j in range(n)}
    cols = {}
    for (l, k2), v in M.items():
        cols.setdefault(k2, []).append((l, v))
    for _ in range(k):
        nxt = {}
        for (r, j), alpha in P.items():
            for l, m in cols.get(r, ()):
                prod = alpha * m
                if prod:
                    nxt[l, j] = nxt.get((l, j), coords.zero()) + prod
        P = {key: v for key, v in nxt.items() if v}
    tr = coords.zero()
    for j in range(n):
        v = P.get((j, j))
        if v:
            tr = tr - v if spec.parity(j) else tr + v
    return TraceElement(k, tr)


# ---------------------------------------------------------------------------
# invariants in S^n(g)

def symmetric_action_matrices(spec, n):
    coords = spec.symmetric_coords()
    basis = monomials(coords, n)
    mats = []
    for i in range(spec.dim):
        v = ad_field(spec, i, coords)
        mats.append(operator_matrix(v, basis, basis, coords))
    return coords, basis, mats


def invariants(spec, n):
    """Basis of [S^n(g)]^g as SuperPolynomials in the S(g) coordinates."""
    if n < 0:
        raise ValueError("n must be >= 0")
    coords, basis, mats = symmetric_action_matrices(spec, n)
    check_cap(len(basis), f"S^{n}(g)")
    if not basis:
        return []
    stacked = None
    for m in mats:
        stacked = m if stacked is None else stacked.vstack(m)
    if stacked is None:
        stacked = SparseMatrix(0, len(basis))
    return [poly_of(v, basis, coords) for v in kernel_basis(stacked)]


def is_invariant(spec, p):
    coords = p.coords
    return all(ad_field(spec, i, coords)(p).is_zero() for i in range(spec.dim))


# ---------------------------------------------------------------------------
# Chevalley–Eilenberg complexes (ordinary Lie algebras)

@dataclass
class Module:
    """A finite-dimensional g-module: basis labels plus action matrices."""
    name: str
    labels: list
    action: list   # one SparseMatrix per basis element of g

    @property
    def dim(self):
        return len(self.labels)


def trivial_module(spec):
    one = SparseMatrix(1, 1)
    return Module("trivial", ["1"], [one] * spec.dim)


def symmetric_module(spec, n):
    coords, basis, mats = symmetric_action_matrices(spec, n)
    labels = [str(SuperPolynomial(coords, {e: 1})) for e in basis]
    return Module(f"S^{n}", labels, mats)


def adjoint_module(spec):
    return Module("adjoint", list(spec.names),
                  [ad_matrix(spec, spec.vector(i)) for i in range(spec.dim)])


def make_module(spec, coeff):
    if isinstance(coeff, Module):
        return coeff
    if coeff == "trivial":
        return trivial_module(spec)
    if coeff == "adjoint":
        return adjoint_module(spec)
    if isinstance(coeff, tuple) and coeff[0] == "symmetric":
        return symmetric_module(spec, coeff[1])
    raise ValueError(f"unknown coefficient module {coeff!r}")


@dataclass
class CEComplex:
    """
    C^p(g; M) = Λ^p g* ⊗ M for p in a range, with differentials d[p]: C^p -> C^{p+1}.

    Basis of C^p: pairs (I, m) with I an increasing index tuple, ordered
    I-major.  The cochain ξ^I ⊗ m is the alternating map taking
    (g_{i_1}, ..., g_{i_p}) to m.
    """
    spec: LieSuperAlgebraSpec
    module: Module
    bases: dict
    d: dict

    def dim(self, p):
        return len(self.bases.get(p, ()))

    def cohomology(self, p):
        n_prev = self.d.get(p - 1, SparseMatrix(self.dim(p), self.dim(p - 1)))
        n_next = self.d.get(p, SparseMatrix(self.dim(p + 1), self.dim(p)))
        return cohomology_dim(n_prev, n_next)

    def dims(self):
        """Cohomology dimensions for every p whose neighbours are both known."""
        top = self.spec.dim
        return {p: self.cohomology(p) for p in sorted(self.bases)
                if (p == 0 or p - 1 in self.bases) and (p == top or p + 1 in self.bases)}


def ce_basis(n, p, mdim):
    return [(I, m) for I in combinations(range(n), p) for m in range(mdim)]


def _ce_matrix(spec, module, p):
    """
    Matrix of the CE differential C^p -> C^{p+1}.

    Sign convention: the negative of the textbook formula

        (dω)(x_0..x_p) = Σ_i (-1)^i x_i·ω(..x̂_i..) + Σ_{a<b} (-1)^{a+b} ω([x_a,x_b], ..)

    which is the one induced by the Chevalley vector field ½Σ c_ij^k ξ_iξ_j ∂/∂ξ_k.
    """
    n = spec.dim
    mdim = module.dim
    src = ce_basis(n, p, mdim)
    tgt = ce_basis(n, p + 1, mdim)
    src_pos = {b: i for i, b in enumerate(src)}
    actions = [m.row_dicts() for m in module.action]
    # action[g][row][col]: g . e_col = sum_row action[row, col] e_row
    act_cols = []
    for m in module.action:
        cols = {}
        for (r, c), v in m.entries.items():
            cols.setdefault(c, []).append((r, v))
        act_cols.append(cols)
    del actions

    def omega_on(seq, I):
        """Value of ξ^I on the index sequence seq: a sign or 0."""
        if len(set(seq)) != len(seq) or tuple(sorted(seq)) != I:
            return 0
        perm = sorted(range(len(seq)), key=lambda t: seq[t])
        # seq[perm[r]] is increasing: ξ^I(g_seq) = sgn of that reordering
        return perm_sign(perm)

    ent = {}
    for row, (J, mrow) in enumerate(tgt):
        # evaluate dω on g_J for every source basis element ω = (I, m)
        acc = {}
        for i in range(p + 1):
            rest = J[:i] + J[i + 1:]
            s = -1 if i % 2 else 1
            # x_i . ω(rest): ω = (rest, m) contributes action[J_i][mrow, m]
            for m in range(mdim):
                pass
            col_src = act_cols[J[i]]
            for m, lst in col_src.items():
                for r, v in lst:
                    if r == mrow:
                        key = src_pos[(rest, m)]
                        acc[key] = acc.get(key, 0) + s * v
        for a in range(p + 1):
            for b in range(a + 1, p + 1):
                s = -1 if (a + b) % 2 else 1
                rest = J[:a] + J[a + 1:b] + J[b + 1:]
                for k, c in spec.constants.get((J[a], J[b]), {}).items():
                    seq = (k,) + rest
                    if k in rest:
                        continue
                    I = tuple(sorted(seq))
                    sg = omega_on(seq, I)
                    key = src_pos[(I, mrow)]
                    acc[key] = acc.get(key, 0) + s * sg * c
        for key, v in acc.items():
            if v:
                ent[row, key] = -v
    return SparseMatrix(len(tgt), len(src), ent)


def ce_complex(spec, coeff="trivial", p_range=None):
    """
    Chevalley–Eilenberg complex of an ordinary Lie algebra with coefficients
    "trivial", ("symmetric", n) or "adjoint".  Checks d² = 0 exactly.
    """
    if not spec.is_even():
        raise ValueError("ce_complex handles ordinary (degree-0) Lie algebras only")
    module = make_module(spec, coeff)
    n = spec.dim
    ps = list(range(0, n + 1)) if p_range is None else [p for p in p_range if 0 <= p <= n]
    bases = {}
    d = {}
    for p in ps:
        bases[p] = ce_basis(n, p, module.dim)
        check_cap(len(bases[p]), f"C^{p}")
    for p in ps:
        if p + 1 <= n:
            bases.setdefault(p + 1, ce_basis(n, p + 1, module.dim))
            d[p] = _ce_matrix(spec, module, p)
        if p - 1 >= 0 and p - 1 not in d:
            bases.setdefault(p - 1, ce_basis(n, p - 1, module.dim))
            d[p - 1] = _ce_matrix(spec, module, p - 1)
    for p in d:
        if p + 1 in d and not (d[p + 1] @ d[p]).is_zero():
            raise CompositionNotZero(f"d^2 != 0 at p={p}")
    return CEComplex(spec, module, bases, d)


def ce_cohomology(spec, coeff="trivial"):
    """{p: dim H^p(g; M)} for all p."""
    cx = ce_complex(spec, coeff)
    n = spec.dim
    out = {}
    for p in range(n + 1):
        m = cx.dim(p)
        d_in = cx.d.get(p - 1, SparseMatrix(m, 0))
        d_out = cx.d.get(p, SparseMatrix(0, m))
        out[p] = cohomology_dim(d_in, d_out)
    return out


# ---------------------------------------------------------------------------
# the Chevalley vector field on g[1]

XI_PREFIX = "xi_"


def shifted_coords(spec):
    """Coordinates ξ_i on g[1], of degree 1 - deg(g_i)."""
    return CoordinateSystem([(XI_PREFIX + n, 1 - d) for n, d in spec.basis.pairs()])


def _chevalley_field(spec):
    coords = shifted_coords(spec)
    xi = coords.gens()
    comps = {}
    for k in range(spec.dim):
        p = coords.zero()
        for (i, j), out in spec.constants.items():
            c = out.get(k)
            if c:
                # Koszul sign for the décalage g -> g[1]
                s = -1 if spec.parity(i) else 1
                p = p + (xi[i] * xi[j]).scale(Fraction(s, 2) * c)
        for i, out in spec.differential.items():
            c = out.get(k)
            if c:
                p = p + xi[i].scale(c)
        if p:
            comps[coords.names[k]] = p
    return VectorField(coords, comps)


def chevalley_q(spec):
    """
    γ = ½ Σ_{i,j,k} ± c_ij^k ξ_i ξ_j ∂/∂ξ_k (+ the linear part of a DG
    differential), an odd degree +1 vector field on g[1] with [γ, γ] = 0.
    """
    from .qmanifold import QStructure
    v = _chevalley_field(spec)
    q = QStructure(v.coords, v.components)
    sq = q.square()
    if not sq.is_zero():
        raise JacobiFailure(f"[γ,γ] != 0: {sq}")
    return q


def chevalley_matrix(spec, p):
    """Matrix of γ acting on Λ^p g* in the basis ξ^I (I increasing)."""
    q = chevalley_q(spec)
    coords = q.coords
    src = [tuple(1 if t in I else 0 for t in range(spec.dim))
           for I in combinations(range(spec.dim), p)]
    tgt = [tuple(1 if t in I else 0 for t in range(spec.dim))
           for I in combinations(range(spec.dim), p + 1)]
    return operator_matrix(q.field, src, tgt, coords)
