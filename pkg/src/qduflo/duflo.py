"""
The strange automorphism exp(Σ α_{2k} c_{2k}) of S(g) and a verifier for
multiplicativity of φ_PBW∘φ_strange on invariants.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .exactla import SparseMatrix, rank
from .liealg import trace_power, invariants, ad_field
from .superpoly import SuperPolynomial, monomials, operator_matrix
from .uea import EnvelopingAlgebra, phi_pbw


# ---------------------------------------------------------------------------
# formal power series in one variable, as coefficient lists

def series_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j, y in enumerate(b[:n + 1 - i]):
                out[i + j] += x * y
    return out


def series_log(a, n):
    """log(a) for a series with a[0] = 1, via log(1 + u) = Σ (-1)^{m+1} u^m / m."""
    if a[0] != 1:
        raise ValueError("log needs constant term 1")
    u = [Fraction(0)] + [Fraction(x) for x in a[1:n + 1]]
    u += [Fraction(0)] * (n + 1 - len(u))
    out = [Fraction(0)] * (n + 1)
    power = [Fraction(1)] + [Fraction(0)] * n
    for m in range(1, n + 1):
        power = series_mul(power, u, n)
        if not any(power):
            break
        s = Fraction((-1) ** (m + 1), m)
        for i, x in enumerate(power):
            out[i] += s * x
    return out


def sinh_ratio_series(n):
    """(e^{x/2} - e^{-x/2}) / x = Σ_m x^{2m} / (4^m (2m+1)!), through degree n."""
    out = [Fraction(0)] * (n + 1)
    for m in range(0, n // 2 + 1):
        out[2 * m] = Fraction(1, 4 ** m * factorial(2 * m + 1))
    return out


@dataclass(frozen=True)
class AlphaSeries:
    K: int
    coefficients: tuple          # α_2, α_4, ..., α_2K
    full: tuple = field(default=(), repr=False)   # all coefficients through degree 2K

    def alpha(self, two_k):
        if two_k % 2 or not 2 <= two_k <= 2 * self.K:
            raise IndexError(two_k)
        return self.coefficients[two_k // 2 - 1]


def alpha_coefficients(K):
    """α_{2k}, k = 1..K, with Σ α_{2k} x^{2k} = log √((e^{x/2} - e^{-x/2}) / x)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    n = 2 * K
    lg = series_log(sinh_ratio_series(n), n)
    half = tuple(x / 2 for x in lg)
    return AlphaSeries(K, tuple(half[2 * k] for k in range(1, K + 1)), half)


# ---------------------------------------------------------------------------
# constant-coefficient operators

def apply_trace_operator(c, p):
    """
    A dual-coordinate polynomial c (e.g. a TraceElement) acting on p ∈ S(g):
    the monomial a_{i1}⋯a_{ik} acts as ∂_{i1}⋯∂_{ik}, with no factorials.
    """
    poly = getattr(c, "poly", c)
    coords = p.coords
    if len(poly.coords) != len(coords):
        raise ValueError("operator and polynomial have different dimensions")
    out = coords.zero()
    for e, coeff in poly.terms.items():
        r = p
        # rightmost derivative first so that the monomial order matches composition order
        for i in reversed(range(len(e))):
            for _ in range(e[i]):
                r = r.partial(coords.names[i])
                if not r:
                    break
            if not r:
                break
        if r:
            out = out + r.scale(coeff)
    return out


class StrangeOperator:
    """φ_strange on S(g) for a fixed spec and series order K."""

    def __init__(self, spec, K):
        self.spec = spec
        self.K = K
        alphas = alpha_coefficients(K).coefficients
        self.terms = []
        for k, a in enumerate(alphas, start=1):
            c = trace_power(spec, 2 * k)
            if c.poly:
                self.terms.append((a, c))

    def is_identity(self):
        return not self.terms

    def generator(self, p):
        out = p.coords.zero()
        for a, c in self.terms:
            out = out + apply_trace_operator(c, p).scale(a)
        return out

    def __call__(self, p):
        top = max(p.poly_degrees(), default=0)
        if 2 * self.K < top and self.terms:
            raise ValueError(f"series order K={self.K} too small for degree {top}")
        out = p
        term = p
        m = 0
        while term:
            m += 1
            term = self.generator(term).scale(Fraction(1, m))
            out = out + term
        return out


def phi_strange(spec, p, K=None):
    if K is None:
        K = max(1, (max(p.poly_degrees(), default=0) + 1) // 2)
    return StrangeOperator(spec, K)(p)


def strange_matrix(spec, n, K=None):
    """Matrix of φ_strange on S^{<=n}(g), in the monomial basis by degree."""
    coords = spec.symmetric_coords()
    basis = [e for d in range(n + 1) for e in monomials(coords, d)]
    op = StrangeOperator(spec, K or max(1, (n + 1) // 2))
    return basis, operator_matrix(op, basis, basis, coords)


def is_equivariant(spec, p, K=None):
    """φ_strange commutes with every ad(g_i) on p."""
    op = StrangeOperator(spec, K or max(1, (max(p.poly_degrees(), default=0) + 1) // 2))
    for i in range(spec.dim):
        v = ad_field(spec, i, p.coords)
        if op(v(p)) != v(op(p)):
            return False
    return True


# ---------------------------------------------------------------------------
# the multiplicativity check

@dataclass
class PairResult:
    a: str
    b: str
    delta: str
    naive_delta: str

    @property
    def ok(self):
        return self.delta == "0"

    def to_dict(self):
        return {"a": self.a, "b": self.b, "delta": self.delta, "naive_delta": self.naive_delta}


@dataclass
class DufloReport:
    algebra: str
    max_degree: int
    K: int
    strange_is_identity: bool
    invariant_dims: dict
    pairs: list
    passed: bool
    naive_witness: object = None

    def to_dict(self):
        return {
            "algebra": self.algebra,
            "max_degree": self.max_degree,
            "series_order": self.K,
            "strange_is_identity": self.strange_is_identity,
            "invariant_dims": {str(k): v for k, v in sorted(self.invariant_dims.items())},
            "pairs": [p.to_dict() for p in self.pairs],
            "all_discrepancies_zero": self.passed,
            "naive_witness": self.naive_witness,
        }


def duflo_verify(spec, max_degree, K=None, algebra=None):
    """
    For invariants a, b with deg a + deg b <= max_degree:
    Δ(a, b) = Φ(ab) - Φ(a)*Φ(b) with Φ = φ_PBW∘φ_strange, and the naive
    Δ₀ with φ_strange replaced by the identity.
    """
    if K is None:
        K = max(1, (max_degree + 1) // 2)
    alg = algebra or EnvelopingAlgebra(spec)
    strange = StrangeOperator(spec, K)
    inv = {d: invariants(spec, d) for d in range(max_degree + 1)}
    pool = [(d, p) for d in range(1, max_degree + 1) for p in inv[d]]
    pairs = []
    passed = True
    witness = None
    images = {}

    def full(p):
        key = p
        if key not in images:
            images[key] = phi_pbw(alg, strange(p))
        return images[key]

    for x in range(len(pool)):
        for y in range(x, len(pool)):
            (da, a), (db, b) = pool[x], pool[y]
            if da + db > max_degree:
                continue
            delta = full(a * b) - alg.star(full(a), full(b))
            naive = phi_pbw(alg, a * b) - alg.star(phi_pbw(alg, a), phi_pbw(alg, b))
            if delta:
                passed = False
            if naive and witness is None:
                witness = {"a": str(a), "b": str(b), "naive_delta": str(naive)}
            pairs.append(PairResult(str(a), str(b), str(delta), str(naive)))
    return DufloReport(spec.name or "", max_degree, K, strange.is_identity(),
                       {d: len(v) for d, v in inv.items()}, pairs, passed, witness)


def strange_invertible(spec, n, K=None):
    basis, m = strange_matrix(spec, n, K)
    return rank(m) == len(basis)
