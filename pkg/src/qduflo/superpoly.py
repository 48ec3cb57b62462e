"""
Free graded-commutative polynomial algebras over Q.

A :class:`CoordinateSystem` fixes an ordered list of graded coordinates;
parity is degree mod 2 and odd coordinates square to zero.  Monomials are
exponent tuples in declaration order, so every stored coefficient already
carries its Koszul sign.

Conventions fixed here and used everywhere downstream:

* ``partial`` is the *left* derivative: d/dxi hits xi after moving it to
  the front, so it picks up (-1)^(number of odd coordinates present before xi).
* A vector field is v = sum_i v^i d_i (coefficient on the left) acting by
  left derivatives; its bracket is the graded commutator.
* Polyvectors live on the doubled system (x_i, theta_i) with theta_i of
  degree 1 - deg(x_i); the Schouten bracket is the odd Poisson bracket

      [P, R] = sum_i  P d<_{theta_i} . d>_{x_i} R  -  P d<_{x_i} . d>_{theta_i} R

  (right derivatives on P, left derivatives on R).  With this sign,
  [v, f] = v(f) and [v, w] = [v, w]_Lie for vector fields written as
  sum_i v^i theta_i.
"""

import re
from fractions import Fraction
from itertools import combinations_with_replacement

from .exactla import SparseMatrix, rational, rational_str


class CoordinateMismatch(ValueError):
    pass


class UnknownCoordinate(KeyError):
    pass


class CoordinateSystem:
    """Ordered graded coordinates; immutable."""

    __slots__ = ("names", "degrees", "odd", "_index")

    def __init__(self, coords):
        coords = list(coords)
        self.names = tuple(str(n) for n, _ in coords)
        self.degrees = tuple(int(d) for _, d in coords)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate coordinate names in {self.names}")
        self.odd = tuple(bool(d % 2) for d in self.degrees)
        self._index = {n: i for i, n in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (isinstance(other, CoordinateSystem)
                and self.names == other.names and self.degrees == other.degrees)

    def __hash__(self):
        return hash((self.names, self.degrees))

    def __repr__(self):
        inner = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"CoordinateSystem({inner})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnknownCoordinate(name) from None

    def pairs(self):
        return list(zip(self.names, self.degrees))

    def parity(self, i):
        return int(self.odd[i])

    def zero(self):
        return SuperPolynomial(self, {})

    def one(self):
        return SuperPolynomial(self, {(0,) * len(self): Fraction(1)})

    def constant(self, c):
        return SuperPolynomial(self, {(0,) * len(self): rational(c)})

    def var(self, name):
        i = self.index(name)
        e = [0] * len(self)
        e[i] = 1
        return SuperPolynomial(self, {tuple(e): Fraction(1)})

    def gens(self):
        return [self.var(n) for n in self.names]

    def mono_degree(self, exps):
        return sum(e * d for e, d in zip(exps, self.degrees))

    def mono_parity(self, exps):
        return sum(e for e, o in zip(exps, self.odd) if o) % 2


def mono_mul(a, b, odd):
    """Product of two monomials: (sign, exps) with sign 0 if it vanishes."""
    sign = 1
    n = len(a)
    # b's odd factors move left past a's odd factors with larger index
    later = 0
    for i in range(n - 1, -1, -1):
        if odd[i]:
            if b[i]:
                if a[i]:
                    return 0, None
                if later % 2:
                    sign = -sign
            if a[i]:
                later += 1
    return sign, tuple(x + y for x, y in zip(a, b))


def monomials(coords, poly_degree, indices=None):
    """
    Exponent tuples of polynomial degree ``poly_degree`` (odd exps <= 1),
    in a fixed order: combinations with replacement of coordinate indices.
    """
    idx = list(range(len(coords))) if indices is None else list(indices)
    out = []
    for combo in combinations_with_replacement(idx, poly_degree):
        e = [0] * len(coords)
        ok = True
        for i in combo:
            e[i] += 1
            if coords.odd[i] and e[i] > 1:
                ok = False
                break
        if ok:
            out.append(tuple(e))
    return out


class SuperPolynomial:
    """Element of the free graded-commutative algebra on ``coords``."""

    __slots__ = ("coords", "terms")

    def __init__(self, coords, terms=None):
        self.coords = coords
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(coords):
                raise ValueError("exponent length does not match coordinates")
            if any(o and x > 1 for o, x in zip(coords.odd, e)):
                continue
            c = rational(c) if not isinstance(c, Fraction) else c
            if c:
                clean[e] = c
        self.terms = clean

    # --- construction helpers -------------------------------------------------

    def _new(self, terms):
        p = SuperPolynomial.__new__(SuperPolynomial)
        p.coords = self.coords
        p.terms = {e: c for e, c in terms.items() if c}
        return p

    def _check(self, other):
        if self.coords != other.coords:
            raise CoordinateMismatch(f"{self.coords} vs {other.coords}")

    def _coerce(self, other):
        if isinstance(other, SuperPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.coords.constant(other)
        return NotImplemented

    # --- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q):
        q = rational(q)
        if not q:
            return self._new({})
        return self._new({e: q * c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        self._check(other)
        odd = self.coords.odd
        out = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                s, e = mono_mul(a, b, odd)
                if s:
                    out[e] = out.get(e, 0) + s * ca * cb
        return self._new(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = self.coords.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.coords.constant(other)
        if not isinstance(other, SuperPolynomial):
            return NotImplemented
        return self.coords == other.coords and self.terms == other.terms

    def __hash__(self):
        return hash((self.coords, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # --- gradings ---------------------------------------------------------------

    def degrees(self):
        return {self.coords.mono_degree(e) for e in self.terms}

    def degree(self):
        """Cohomological degree; None for the zero polynomial."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous polynomial (degrees {sorted(ds)})")
        return ds.pop()

    def parity(self):
        ps = {self.coords.mono_parity(e) for e in self.terms}
        if not ps:
            return 0
        if len(ps) > 1:
            raise ValueError("polynomial of mixed parity")
        return ps.pop()

    def parity_parts(self):
        parts = {0: {}, 1: {}}
        for e, c in self.terms.items():
            parts[self.coords.mono_parity(e)][e] = c
        return {p: self._new(t) for p, t in parts.items() if t}

    def poly_degrees(self):
        return {sum(e) for e in self.terms}

    def homogeneous_part(self, poly_degree):
        return self._new({e: c for e, c in self.terms.items() if sum(e) == poly_degree})

    def filter(self, pred):
        return self._new({e: c for e, c in self.terms.items() if pred(e)})

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self):
        return self.coefficient((0,) * len(self.coords))

    # --- derivatives ------------------------------------------------------------

    def partial(self, name):
        """Left derivative with respect to the named coordinate."""
        i = self.coords.index(name) if isinstance(name, str) else name
        return self._partial(i, left=True)

    def right_partial(self, name):
        i = self.coords.index(name) if isinstance(name, str) else name
        return self._partial(i, left=False)

    def _partial(self, i, left):
        odd = self.coords.odd
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if not k:
                continue
            if odd[i]:
                rng = range(i) if left else range(i + 1, len(e))
                n = sum(1 for j in rng if odd[j] and e[j])
                coef = -c if n % 2 else c
            else:
                coef = k * c
            f = list(e)
            f[i] -= 1
            f = tuple(f)
            out[f] = out.get(f, 0) + coef
        return self._new(out)

    # --- change of coordinates ----------------------------------------------------

    def embed(self, target, mapping=None):
        """Re-express in ``target`` (coordinates matched by name unless mapped)."""
        mapping = mapping or {}
        idx = [target.index(mapping.get(n, n)) for n in self.coords.names]
        out = {}
        for e, c in self.terms.items():
            # source order may differ from target order: rebuild by multiplication
            f = [0] * len(target)
            for i, k in enumerate(e):
                f[idx[i]] += k
            f = tuple(f)
            sign = _reorder_sign(e, idx, target.odd)
            out[f] = out.get(f, 0) + sign * c
        return SuperPolynomial(target, out)

    # --- rendering ----------------------------------------------------------------

    def sorted_terms(self):
        coords = self.coords
        return sorted(self.terms.items(),
                      key=lambda t: (coords.mono_degree(t[0]), sum(t[0]),
                                     tuple(-x for x in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.coords.names
        pieces = []
        for e, c in self.sorted_terms():
            factors = []
            for n, k in zip(names, e):
                if k == 1:
                    factors.append(n)
                elif k > 1:
                    factors.append(f"{n}^{k}")
            mag = abs(c)
            if not factors:
                body = rational_str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = rational_str(mag) + "*" + "*".join(factors)
            pieces.append(("-" if c < 0 else "+", body))
        s = pieces[0][1] if pieces[0][0] == "+" else "-" + pieces[0][1]
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"SuperPolynomial({self})"


def _reorder_sign(exps, idx, odd_target):
    """Koszul sign of moving the odd factors of a monomial into target order."""
    seq = []
    for i, k in enumerate(exps):
        if k and odd_target[idx[i]]:
            seq.append(idx[i])
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[b] < seq[a]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_∂][\w'∂]*)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


class PolynomialSyntaxError(ValueError):
    def __init__(self, msg, column):
        super().__init__(f"{msg} at column {column}")
        self.column = column


def parse_polynomial(text, coords):
    """
    Parse ``3/2*x^2*xi1*xi2 - y + 1/3`` style text.

    Factors multiply left to right, so the order of odd factors matters.
    Parentheses group sums.
    """
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            while text[pos].isspace():
                pos += 1
            raise PolynomialSyntaxError(f"unexpected {text[pos]!r}", pos + 1)
        kind = m.lastindex
        toks.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    toks.append((0, None, len(text) + 1))
    p = _Parser(toks, coords)
    value = p.sum()
    if p.peek()[0] != 0:
        raise PolynomialSyntaxError(f"unexpected {p.peek()[1]!r}", p.peek()[2])
    return value


class _Parser:
    NUM, NAME, CARET, STAR, PLUS, MINUS, LP, RP = range(1, 9)

    def __init__(self, toks, coords):
        self.toks = toks
        self.i = 0
        self.coords = coords

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def sum(self):
        sign = 1
        if self.peek()[0] in (self.PLUS, self.MINUS):
            sign = -1 if self.take()[0] == self.MINUS else 1
        total = self.product().scale(sign)
        while self.peek()[0] in (self.PLUS, self.MINUS):
            sign = -1 if self.take()[0] == self.MINUS else 1
            total = total + self.product().scale(sign)
        return total

    def product(self):
        value = self.power()
        while self.peek()[0] == self.STAR:
            self.take()
            value = value * self.power()
        return value

    def power(self):
        base = self.atom()
        if self.peek()[0] == self.CARET:
            self.take()
            kind, tok, col = self.take()
            if kind != self.NUM or "/" in tok:
                raise PolynomialSyntaxError("expected integer exponent", col)
            base = base ** int(tok)
        return base

    def atom(self):
        kind, tok, col = self.take()
        if kind == self.NUM:
            return self.coords.constant(Fraction(tok))
        if kind == self.NAME:
            try:
                return self.coords.var(tok)
            except UnknownCoordinate:
                raise PolynomialSyntaxError(f"unknown coordinate {tok!r}", col) from None
        if kind == self.LP:
            v = self.sum()
            k2, t2, c2 = self.take()
            if k2 != self.RP:
                raise PolynomialSyntaxError("expected ')'", c2)
            return v
        raise PolynomialSyntaxError(f"unexpected {tok!r}" if tok else "unexpected end", col)


# ---------------------------------------------------------------------------
# vector fields

class VectorField:
    """v = sum_i v^i d/dx_i with left derivatives; components keyed by name."""

    __slots__ = ("coords", "components")

    def __init__(self, coords, components=None):
        self.coords = coords
        comps = {}
        for name, poly in (components or {}).items():
            coords.index(name)
            if poly.coords != coords:
                raise CoordinateMismatch(f"component {name} lives on {poly.coords}")
            if poly:
                comps[name] = poly
        self.components = comps

    def __getitem__(self, name):
        return self.components.get(name, self.coords.zero())

    def __eq__(self, other):
        return (isinstance(other, VectorField) and self.coords == other.coords
                and self.components == other.components)

    def __bool__(self):
        return bool(self.components)

    def is_zero(self):
        return not self.components

    def __add__(self, other):
        if self.coords != other.coords:
            raise CoordinateMismatch("vector fields on different coordinates")
        names = set(self.components) | set(other.components)
        return VectorField(self.coords, {n: self[n] + other[n] for n in names})

    def __neg__(self):
        return VectorField(self.coords, {n: -p for n, p in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        return VectorField(self.coords, {n: p.scale(q) for n, p in self.components.items()})

    def times(self, f):
        """Left multiplication by a function: (f v)^i = f v^i."""
        return VectorField(self.coords, {n: f * p for n, p in self.components.items()})

    def degrees(self):
        out = set()
        for n, p in self.components.items():
            d = self.coords.degrees[self.coords.index(n)]
            out |= {x - d for x in p.degrees()}
        return out

    def degree(self):
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous vector field (degrees {sorted(ds)})")
        return ds.pop()

    def parity(self):
        d = self.degree()
        return 0 if d is None else d % 2

    def __call__(self, f):
        out = f.coords.zero()
        for n, p in self.components.items():
            out = out + p * f.partial(n)
        return out

    def __str__(self):
        if not self.components:
            return "0"
        parts = []
        for n in self.coords.names:
            if n in self.components:
                parts.append(f"({self.components[n]})*d/d{n}")
        return " + ".join(parts)

    __repr__ = __str__


def partial_field(coords, name):
    return VectorField(coords, {name: coords.one()})


def lie_bracket(v, w):
    """Graded commutator [v, w] = v∘w - (-1)^{|v||w|} w∘v."""
    if v.coords != w.coords:
        raise CoordinateMismatch("vector fields on different coordinates")
    sign = -1 if (v.parity() * w.parity()) % 2 else 1
    comps = {}
    for n in v.coords.names:
        c = v(w[n]) - w(v[n]).scale(sign)
        if c:
            comps[n] = c
    return VectorField(v.coords, comps)


# ---------------------------------------------------------------------------
# polyvectors on the doubled coordinate system

THETA_PREFIX = "∂"


class PolyvectorSpace:
    """
    The algebra of polyvector fields on ``base``: polynomials in the base
    coordinates x_i and the odd-shifted symbols theta_i standing for d/dx_i.
    """

    def __init__(self, base):
        self.base = base
        self.n = len(base)
        pairs = base.pairs() + [(THETA_PREFIX + nm, 1 - d) for nm, d in base.pairs()]
        self.coords = CoordinateSystem(pairs)
        self.theta_names = tuple(THETA_PREFIX + nm for nm in base.names)

    def __eq__(self, other):
        return isinstance(other, PolyvectorSpace) and self.base == other.base

    def __hash__(self):
        return hash(("polyvectors", self.base))

    def theta(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self.base.index(name_or_index)
        return self.coords.var(self.theta_names[i])

    def lift(self, f):
        """A function on the base as a polyvector of multiplicity 0."""
        if f.coords != self.base:
            raise CoordinateMismatch("function not on the base coordinates")
        n = len(self.coords)
        return SuperPolynomial(self.coords,
                               {e + (0,) * (n - len(e)): c for e, c in f.terms.items()})

    def from_field(self, v):
        out = self.coords.zero()
        for name, p in v.components.items():
            out = out + self.lift(p) * self.theta(name)
        return out

    def to_field(self, P):
        if any(m != 1 for m in self.multiplicities(P)):
            raise ValueError("not a polyvector of multiplicity 1")
        comps = {}
        for i, name in enumerate(self.base.names):
            c = P.right_partial(self.theta_names[i])
            if c:
                comps[name] = self.restrict(c)
        return VectorField(self.base, comps)

    def restrict(self, P):
        """A multiplicity-0 polyvector as a function on the base."""
        n = self.n
        out = {}
        for e, c in P.terms.items():
            if any(e[n:]):
                raise ValueError("polyvector has positive multiplicity")
            out[e[:n]] = c
        return SuperPolynomial(self.base, out)

    def multiplicity(self, exps):
        return sum(exps[self.n:])

    def multiplicities(self, P):
        return {self.multiplicity(e) for e in P.terms}

    def multiplicity_part(self, P, k):
        return P.filter(lambda e: self.multiplicity(e) == k)

    def bidegree(self, exps):
        """(multiplicity, internal degree) of a monomial; total = sum of both."""
        k = self.multiplicity(exps)
        return k, self.coords.mono_degree(exps) - k

    def total_degree(self, exps):
        return self.coords.mono_degree(exps)

    def schouten(self, P, R):
        return schouten_bracket(P, R, self)

    def basis(self, multiplicity, base_poly_degree):
        """Monomials with given theta-degree and polynomial degree in the base."""
        n = self.n
        xs = monomials(self.coords, base_poly_degree, range(n))
        ts = monomials(self.coords, multiplicity, range(n, 2 * n))
        out = []
        for a in xs:
            for b in ts:
                out.append(tuple(x + y for x, y in zip(a, b)))
        return out


def schouten_bracket(P, R, space=None):
    """Odd Poisson (Schouten–Nijenhuis) bracket on the doubled system."""
    if P.coords != R.coords:
        raise CoordinateMismatch("polyvectors on different coordinates")
    if space is None:
        space = _space_of(P.coords)
    out = P.coords.zero()
    for i in range(space.n):
        x = space.base.names[i]
        t = space.theta_names[i]
        a = P.right_partial(t)
        if a:
            b = R.partial(x)
            if b:
                out = out + a * b
        a = P.right_partial(x)
        if a:
            b = R.partial(t)
            if b:
                out = out - a * b
    return out


def _space_of(coords):
    n = len(coords) // 2
    base = CoordinateSystem(coords.pairs()[:n])
    space = PolyvectorSpace(base)
    if space.coords != coords:
        raise CoordinateMismatch("not a doubled polyvector coordinate system")
    return space


def operator_matrix(op, source, target, coords, strict=True):
    """
    Matrix of a linear map between spans of monomials (exponent tuples).

    With ``strict`` an image monomial outside ``target`` raises; otherwise it
    is dropped (quotient by the complementary span).
    """
    pos = {e: i for i, e in enumerate(target)}
    ent = {}
    for j, e in enumerate(source):
        img = op(SuperPolynomial(coords, {e: Fraction(1)}))
        for f, c in img.terms.items():
            i = pos.get(f)
            if i is None:
                if strict:
                    raise ValueError(f"image monomial {f} outside the target basis")
                continue
            ent[i, j] = c
    return SparseMatrix(len(target), len(source), ent)


def vector_of(poly, basis):
    pos = {e: i for i, e in enumerate(basis)}
    out = {}
    for e, c in poly.terms.items():
        if e not in pos:
            raise ValueError(f"monomial {e} outside the basis")
        out[pos[e]] = c
    return out


def poly_of(vec, basis, coords):
    return SuperPolynomial(coords, {basis[i]: c for i, c in vec.items()})
