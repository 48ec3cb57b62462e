"""
Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  Matrices are sparse: a dict
``(row, col) -> Fraction`` with no stored zeros.  Elimination works on
integer rows (denominators cleared, rows divided by their content after
every step) so the coefficient growth stays under control.

Also holds the graded bookkeeping shared by the other modules: graded
bases and the Koszul sign of a permutation of graded symbols.
"""

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

DEFAULT_DIM_CAP = 20000
DIM_CAP_ENV = "QDUFLO_DIM_CAP"


class CompositionNotZero(ValueError):
    """d_out @ d_in is not exactly zero."""


class DimensionCap(RuntimeError):
    """A space exceeded the configured dimension cap."""

    def __init__(self, size, cap, what="space"):
        super().__init__(f"{what} of dimension {size} exceeds the cap {cap} "
                         f"(set {DIM_CAP_ENV} to override)")
        self.size = size
        self.cap = cap
        self.what = what


def dim_cap():
    value = os.environ.get(DIM_CAP_ENV)
    return int(value) if value else DEFAULT_DIM_CAP


def check_cap(size, what="space"):
    cap = dim_cap()
    if size > cap:
        raise DimensionCap(size, cap, what)


# ---------------------------------------------------------------------------
# rationals

def rational(value):
    """Coerce ints, Fractions and "p/q" strings to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def rational_str(q):
    # Fraction.__str__ already gives "p" or "p/q" in lowest terms
    return str(Fraction(q))


# ---------------------------------------------------------------------------
# graded bookkeeping

@dataclass(frozen=True)
class GradedBasis:
    names: tuple
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate basis names in {self.names}")

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        return cls(tuple(n for n, _ in pairs), tuple(d for _, d in pairs))

    def __len__(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def parity(self, i):
        return self.degrees[i] % 2

    @property
    def parities(self):
        return tuple(d % 2 for d in self.degrees)

    def pairs(self):
        return list(zip(self.names, self.degrees))


def koszul_sign(parities, perm):
    """
    Sign picked up by reordering graded symbols.

    ``parities[i]`` is the parity of the i-th symbol; the result is the
    sign s with  x_{perm[0]} ... x_{perm[k-1]} = s * x_0 ... x_{k-1}
    in a graded-commutative world.  For all-even symbols this is 1, for
    all-odd symbols it is sgn(perm).
    """
    sign = 1
    k = len(perm)
    for a in range(k):
        pa = parities[perm[a]]
        if not pa:
            continue
        for b in range(a + 1, k):
            if perm[b] < perm[a] and parities[perm[b]]:
                sign = -sign
    return sign


def perm_sign(perm):
    return koszul_sign([1] * len(perm), perm)


# ---------------------------------------------------------------------------
# sparse matrices

class SparseMatrix:
    """Immutable sparse matrix over Q."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            v = rational(v)
            if v:
                clean[r, c] = v
        self._entries = clean

    @classmethod
    def from_dense(cls, data, cols=None):
        data = [list(row) for row in data]
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        ent = {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row) if v}
        return cls(rows, cols, ent)

    @classmethod
    def from_columns(cls, rows, columns):
        """Build from a list of column vectors given as {row: value} dicts."""
        ent = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                ent[i, j] = v
        return cls(rows, len(columns), ent)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @property
    def entries(self):
        return dict(self._entries)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, key):
        return self._entries.get(key, Fraction(0))

    def nnz(self):
        return len(self._entries)

    def is_zero(self):
        return not self._entries

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            rows[r][c] = v
        return rows

    def column(self, j):
        return {r: v for (r, c), v in self._entries.items() if c == j}

    def transpose(self):
        return SparseMatrix(self.cols, self.rows,
                            {(c, r): v for (r, c), v in self._entries.items()})

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self):
        return hash((self.shape, frozenset(self._entries.items())))

    def __neg__(self):
        return SparseMatrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0) + v
        return SparseMatrix(self.rows, self.cols, out)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        q = rational(q)
        return SparseMatrix(self.rows, self.cols, {k: q * v for k, v in self._entries.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row = {}
        for (r, c), v in other._entries.items():
            by_row.setdefault(r, []).append((c, v))
        out = {}
        for (i, k), a in self._entries.items():
            for j, b in by_row.get(k, ()):
                out[i, j] = out.get((i, j), 0) + a * b
        return SparseMatrix(self.rows, other.cols, out)

    def apply(self, vec):
        """Multiply a {col: value} vector."""
        out = {}
        for (r, c), v in self._entries.items():
            x = vec.get(c)
            if x:
                out[r] = out.get(r, 0) + v * x
        return {r: v for r, v in out.items() if v}

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        ent = dict(self._entries)
        for (r, c), v in other._entries.items():
            ent[r, c + self.cols] = v
        return SparseMatrix(self.rows, self.cols + other.cols, ent)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        ent = dict(self._entries)
        for (r, c), v in other._entries.items():
            ent[r + self.rows, c] = v
        return SparseMatrix(self.rows + other.rows, self.cols, ent)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self._entries)})"

    def pretty(self):
        dense = self.to_dense()
        cells = [[("." if not v else rational_str(v)) for v in row] for row in dense]
        w = max([len(s) for row in cells for s in row] + [1])
        return "\n".join(" ".join(s.rjust(w) for s in row) for row in cells)


# ---------------------------------------------------------------------------
# fraction-free elimination

def _integer_row(row):
    """Scale a {col: Fraction} row to coprime integers."""
    den = 1
    for v in row.values():
        den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items()}
    return _primitive(ints)


def _primitive(row):
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _combine(pivot_row, row, col):
    # row <- a*row - b*pivot_row, cancelling `col`
    a = pivot_row[col]
    b = row[col]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {c: a * v for c, v in row.items()}
    for c, v in pivot_row.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return _primitive(out)


def echelon(m, pivoting="first", reduced=True):
    """
    Row-reduce ``m``; returns ``{pivot_col: integer_row}``.

    ``pivoting`` picks the pivot row among the candidates for each column:
    "first" (lowest original index) or "sparsest" (fewest entries).
    """
    check_cap(m.cols, "matrix columns")
    remaining = [_integer_row(r) for r in m.row_dicts() if r]
    pivots = {}
    for col in range(m.cols):
        if not remaining:
            break
        cands = [i for i, r in enumerate(remaining) if col in r]
        if not cands:
            continue
        if pivoting == "first":
            idx = cands[0]
        elif pivoting == "sparsest":
            idx = min(cands, key=lambda i: (len(remaining[i]), i))
        else:
            raise ValueError(f"unknown pivoting {pivoting!r}")
        prow = remaining.pop(idx)
        nxt = []
        for r in remaining:
            if col in r:
                r = _combine(prow, r, col)
            if r:
                nxt.append(r)
        remaining = nxt
        pivots[col] = prow
    if reduced:
        cols = sorted(pivots)
        for i, c in enumerate(cols):
            prow = pivots[c]
            for c2 in cols[:i]:
                r = pivots[c2]
                if c in r:
                    pivots[c2] = _combine(prow, r, c)
    return pivots


def rank(m, pivoting="first"):
    if m.is_zero():
        return 0
    return len(echelon(m, pivoting, reduced=False))


def kernel_basis(m, pivoting="first"):
    """
    Basis of ker(m) as a list of {col: Fraction} vectors.

    One vector per free column, with a 1 in that column.
    """
    pivots = echelon(m, pivoting, reduced=True)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for c, row in pivots.items():
            x = row.get(f)
            if x:
                v[c] = Fraction(-x, row[c])
        basis.append(v)
    assert len(pivots) + len(basis) == m.cols
    return basis


def solve(m, rhs):
    """
    A particular solution x of m x = rhs ({row: value}), or None.
    """
    aug = m.hstack(SparseMatrix.from_columns(m.rows, [rhs]))
    pivots = echelon(aug, reduced=True)
    if m.cols in pivots:
        return None
    x = {}
    for c, row in pivots.items():
        b = row.get(m.cols, 0)
        if b:
            x[c] = Fraction(b, row[c])
    return x


def in_span(vectors, target, dim):
    """Whether ``target`` lies in the span of ``vectors`` (all {idx: value})."""
    m = SparseMatrix.from_columns(dim, list(vectors))
    return solve(m, target) is not None


def cohomology_dim(d_in, d_out):
    """dim ker(d_out) / im(d_in) for composable d_out ∘ d_in = 0."""
    if d_in.rows != d_out.cols:
        raise ValueError(f"d_in maps into dim {d_in.rows}, d_out starts at dim {d_out.cols}")
    if not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out . d_in != 0")
    return d_out.cols - rank(d_out) - rank(d_in)


def independent_modulo(vectors, subspace, dim):
    """
    Indices of a maximal subset of ``vectors`` independent modulo span(subspace).
    """
    chosen = []
    base = list(subspace)
    r0 = rank(SparseMatrix.from_columns(dim, base)) if base else 0
    current = list(base)
    r = r0
    for i, v in enumerate(vectors):
        trial = current + [v]
        r2 = rank(SparseMatrix.from_columns(dim, trial))
        if r2 > r:
            chosen.append(i)
            current = trial
            r = r2
    return chosen
