"""
The universal enveloping algebra U(g) in PBW normal form.

Elements are dicts from nondecreasing index words (odd generators at most
once) to rationals.  Generator order is basis declaration order.
"""

import random
from fractions import Fraction
from itertools import permutations
from math import factorial

from .exactla import SparseMatrix, koszul_sign, rank
from .superpoly import SuperPolynomial, monomials


class PBWElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        self.terms = {tuple(w): Fraction(c) for w, c in (terms or {}).items() if c}
        for w in self.terms:
            if not algebra.is_normal(w):
                raise ValueError(f"word {w} is not in PBW normal form")

    @classmethod
    def _raw(cls, algebra, terms):
        e = cls.__new__(cls)
        e.algebra = algebra
        e.terms = {w: c for w, c in terms.items() if c}
        return e

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return PBWElement._raw(self.algebra, out)

    def __neg__(self):
        return PBWElement._raw(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        q = Fraction(q)
        return PBWElement._raw(self.algebra, {w: q * c for w, c in self.terms.items()})

    def __mul__(self, other):
        return self.algebra.star(self, other)

    def __eq__(self, other):
        return isinstance(other, PBWElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def parity(self):
        ps = {self.algebra.word_parity(w) for w in self.terms}
        if len(ps) > 1:
            raise ValueError("inhomogeneous element")
        return ps.pop() if ps else 0

    def degree(self):
        """Top filtration degree (word length)."""
        return max((len(w) for w in self.terms), default=-1)

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.algebra.spec.names
        parts = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            c = self.terms[w]
            if not w:
                parts.append(str(c))
                continue
            runs = []
            i = 0
            while i < len(w):
                j = i
                while j < len(w) and w[j] == w[i]:
                    j += 1
                runs.append(names[w[i]] + (f"^{j - i}" if j - i > 1 else ""))
                i = j
            mono = " ".join(runs)
            parts.append(mono if c == 1 else (f"-{mono}" if c == -1 else f"{c}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


class EnvelopingAlgebra:
    """U(g) for a LieSuperAlgebraSpec, with memoized left multiplication by generators."""

    def __init__(self, spec):
        self.spec = spec
        self.par = spec.basis.parities
        self._gen_cache = {}

    def is_normal(self, w):
        for a, b in zip(w, w[1:]):
            if a > b or (a == b and self.par[a]):
                return False
        return True

    def word_parity(self, w):
        return sum(self.par[i] for i in w) % 2

    def one(self):
        return PBWElement._raw(self, {(): Fraction(1)})

    def zero(self):
        return PBWElement._raw(self, {})

    def gen(self, i):
        if isinstance(i, str):
            i = self.spec.basis.index(i)
        return PBWElement._raw(self, {(i,): Fraction(1)})

    def element(self, terms):
        return PBWElement(self, terms)

    def _bracket_terms(self, i, j):
        return self.spec.constants.get((i, j), {})

    def mul_gen_word(self, i, w):
        """g_i * (normal word w), as a dict of normal words."""
        key = (i, w)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        if not w or i < w[0]:
            out = {(i,) + w: Fraction(1)}
        elif i == w[0]:
            if self.par[i]:
                # g g = ½[g, g] for odd g
                out = {}
                for k, c in self._bracket_terms(i, i).items():
                    for ww, cc in self.mul_gen_word(k, w[1:]).items():
                        out[ww] = out.get(ww, 0) + c * cc / 2
            else:
                out = {(i,) + w: Fraction(1)}
        else:
            j = w[0]
            rest = w[1:]
            # g_i g_j = ± g_j g_i + [g_i, g_j]
            s = -1 if self.par[i] * self.par[j] else 1
            out = {}
            for ww, c in self.mul_gen_word(i, rest).items():
                for www, cc in self.mul_gen_word(j, ww).items():
                    out[www] = out.get(www, 0) + s * c * cc
            for k, c in self._bracket_terms(i, j).items():
                for ww, cc in self.mul_gen_word(k, rest).items():
                    out[ww] = out.get(ww, 0) + c * cc
            out = {ww: c for ww, c in out.items() if c}
        self._gen_cache[key] = out
        return out

    def mul_word(self, word, u_terms):
        """(g_{w1} * ... * g_{wk}) * u for a normal-form dict u."""
        out = dict(u_terms)
        for i in reversed(word):
            nxt = {}
            for w, c in out.items():
                for ww, cc in self.mul_gen_word(i, w).items():
                    nxt[ww] = nxt.get(ww, 0) + c * cc
            out = {w: c for w, c in nxt.items() if c}
        return out

    def normal_order(self, word):
        return PBWElement._raw(self, self.mul_word(tuple(word), {(): Fraction(1)}))

    def star(self, u, v):
        out = {}
        for w, c in u.terms.items():
            for ww, cc in self.mul_word(w, v.terms).items():
                out[ww] = out.get(ww, 0) + c * cc
        return PBWElement._raw(self, out)

    def commutator(self, u, v):
        s = -1 if u.parity() * v.parity() else 1
        return self.star(u, v) - self.star(v, u).scale(s)


def normal_order_rewrite(algebra, word, strategy="leftmost", rng=None):
    """
    Independent rewriting route: repeatedly fix one adjacent inversion
    (chosen by ``strategy``: leftmost, rightmost or random) until every word
    is normal.  Used to test that the result is independent of the order.
    """
    rng = rng or random.Random(0)
    par = algebra.par
    todo = {tuple(word): Fraction(1)}
    done = {}
    while todo:
        w, c = todo.popitem()
        if not c:
            continue
        bad = [t for t in range(len(w) - 1)
               if w[t] > w[t + 1] or (w[t] == w[t + 1] and par[w[t]])]
        if not bad:
            done[w] = done.get(w, 0) + c
            continue
        t = {"leftmost": bad[0], "rightmost": bad[-1]}.get(strategy) \
            if strategy != "random" else rng.choice(bad)
        a, b = w[t], w[t + 1]
        pre, post = w[:t], w[t + 2:]
        new = []
        if a == b:
            for k, cc in algebra.spec.constants.get((a, a), {}).items():
                new.append((pre + (k,) + post, c * cc / 2))
        else:
            s = -1 if par[a] * par[b] else 1
            new.append((pre + (b, a) + post, s * c))
            for k, cc in algebra.spec.constants.get((a, b), {}).items():
                new.append((pre + (k,) + post, c * cc))
        for ww, cc in new:
            todo[ww] = todo.get(ww, 0) + cc
    return PBWElement._raw(algebra, done)


def normal_order(spec_or_algebra, word):
    alg = spec_or_algebra if isinstance(spec_or_algebra, EnvelopingAlgebra) \
        else EnvelopingAlgebra(spec_or_algebra)
    return alg.normal_order(word)


def star(u, v):
    return u.algebra.star(u, v)


# ---------------------------------------------------------------------------
# PBW symmetrization

def _expand_monomial(exps, coords):
    """Exponent tuple -> word of generator indices in declaration order."""
    w = []
    for i, e in enumerate(exps):
        w.extend([i] * e)
    return tuple(w)


def symmetrize_word_bruteforce(algebra, word):
    """(1/k!) Σ_σ supersign(σ) g_σ(1) * ... * g_σ(k), by enumerating permutations."""
    k = len(word)
    par = [algebra.par[i] for i in word]
    out = {}
    for perm in permutations(range(k)):
        s = koszul_sign(par, perm)
        for w, c in algebra.mul_word(tuple(word[p] for p in perm), {(): Fraction(1)}).items():
            out[w] = out.get(w, 0) + s * c
    return PBWElement._raw(algebra, {w: c / factorial(k) for w, c in out.items()})


class PBWMap:
    """φ_PBW: S(g) -> U(g), memoized on monomials."""

    def __init__(self, algebra):
        self.algebra = algebra
        self._cache = {}

    def monomial(self, exps):
        """Symmetrization of the monomial with exponent tuple ``exps``."""
        exps = tuple(exps)
        hit = self._cache.get(exps)
        if hit is not None:
            return hit
        k = sum(exps)
        if k == 0:
            out = {(): Fraction(1)}
        else:
            # S(m) = (1/k) Σ_ℓ m_ℓ · sign_ℓ · g_ℓ * S(m - e_ℓ), sign_ℓ moving g_ℓ to the front
            par = self.algebra.par
            out = {}
            odd_before = 0
            for l, e in enumerate(exps):
                if e:
                    sign = -1 if par[l] and odd_before % 2 else 1
                    rest = list(exps)
                    rest[l] -= 1
                    sub = self.monomial(tuple(rest))
                    for w, c in sub.items():
                        for ww, cc in self.algebra.mul_gen_word(l, w).items():
                            out[ww] = out.get(ww, 0) + Fraction(e * sign, k) * c * cc
                if par[l]:
                    odd_before += e
            out = {w: c for w, c in out.items() if c}
        self._cache[exps] = out
        return out

    def __call__(self, p):
        out = {}
        for e, c in p.terms.items():
            for w, cc in self.monomial(e).items():
                out[w] = out.get(w, 0) + c * cc
        return PBWElement._raw(self.algebra, out)


_PBW_MAPS = {}


def pbw_map(algebra):
    m = _PBW_MAPS.get(id(algebra))
    if m is None or m.algebra is not algebra:
        m = PBWMap(algebra)
        _PBW_MAPS[id(algebra)] = m
    return m


def phi_pbw(algebra, p):
    """Symmetrization φ_PBW(p) for p a SuperPolynomial in the S(g) coordinates."""
    if not isinstance(algebra, EnvelopingAlgebra):
        algebra = EnvelopingAlgebra(algebra)
    return pbw_map(algebra)(p)


def adjoint_on_symmetric(spec, x, p):
    """ad_x acting on p ∈ S(g) as a derivation; x a {index: coeff} vector."""
    from .liealg import ad_field
    out = p.coords.zero()
    for i, c in x.items():
        out = out + ad_field(spec, i, p.coords)(p).scale(c)
    return out


def equivariance_check(algebra, p, x):
    """φ_PBW(ad_x p) == x * φ_PBW(p) - (-1)^{|x||p|} φ_PBW(p) * x."""
    if not isinstance(algebra, EnvelopingAlgebra):
        algebra = EnvelopingAlgebra(algebra)
    spec = algebra.spec
    lhs = phi_pbw(algebra, adjoint_on_symmetric(spec, x, p))
    xe = PBWElement._raw(algebra, {(i,): Fraction(c) for i, c in x.items()})
    rhs = algebra.commutator(xe, phi_pbw(algebra, p))
    return lhs == rhs


def is_central(u):
    """u graded-commutes with every generator."""
    alg = u.algebra
    for i in range(alg.spec.dim):
        if alg.commutator(alg.gen(i), u):
            return False
    return True


def pbw_matrix(algebra, n):
    """Matrix of φ_PBW on S^n(g) against the normal words it produces."""
    coords = algebra.spec.symmetric_coords()
    src = monomials(coords, n)
    images = [phi_pbw(algebra, SuperPolynomial(coords, {e: 1})) for e in src]
    words = sorted({w for im in images for w in im.terms})
    pos = {w: i for i, w in enumerate(words)}
    ent = {}
    for j, im in enumerate(images):
        for w, c in im.terms.items():
            ent[pos[w], j] = c
    return SparseMatrix(len(words), len(src), ent)


def phi_pbw_injective(algebra, n):
    m = pbw_matrix(algebra, n)
    return rank(m) == m.cols


def from_polynomial_word(algebra, p):
    """The naive (unsymmetrized) image: each monomial written in declaration order."""
    out = {}
    for e, c in p.terms.items():
        for w, cc in algebra.normal_order(_expand_monomial(e, p.coords)).terms.items():
            out[w] = out.get(w, 0) + c * cc
    return PBWElement._raw(algebra, out)
