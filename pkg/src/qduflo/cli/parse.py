"""
Readers for algebra (.alg) and Q-structure (.q) files.

Algebra files::

    # sl(2)
    name: sl2
    basis: e:0, f:0, h:0
    [e,f] = h
    [h,e] = 2*e
    [h,f] = -2*f
    d(a) = b            # optional DG differential

Omitted brackets are zero; the partner [b,a] is filled in by graded
antisymmetry unless it is given explicitly.

Q-structure files::

    coords: x:0, dx:1
    truncate: 4         # polynomial truncation, needed with even coordinates
    Q[x] = dx

Right-hand sides use the polynomial grammar of superpoly: rational
coefficients, ``*``, ``^``, ``+``, ``-`` and parentheses.
"""

import re
from pathlib import Path

from ..exactla import rational
from ..liealg import LieSuperAlgebraSpec
from ..qmanifold import QStructure
from ..superpoly import CoordinateSystem, PolynomialSyntaxError, parse_polynomial

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


class ParseError(ValueError):
    def __init__(self, message, line, column=1, path=None):
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.path = path


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_PAIR = re.compile(rf"\s*({_NAME})\s*:\s*(-?\d+)\s*$")
_BRACKET = re.compile(rf"^\[\s*({_NAME})\s*,\s*({_NAME})\s*\]\s*=(.*)$")
_DIFF = re.compile(rf"^d\(\s*({_NAME})\s*\)\s*=(.*)$")
_QLINE = re.compile(rf"^Q\[\s*({_NAME})\s*\]\s*=(.*)$")


def resolve(path):
    """A path on disk, or a bare file name looked up in the shipped corpus."""
    p = Path(path)
    if p.exists():
        return p
    q = CORPUS / p.name
    if q.exists():
        return q
    raise FileNotFoundError(path)


def _lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield no, raw, line


def _pairs(body, no, raw, path):
    out = []
    offset = raw.find(body)
    for chunk in body.split(","):
        m = _PAIR.match(chunk)
        if not m:
            col = offset + len(chunk) - len(chunk.lstrip()) + 1
            raise ParseError(f"expected name:degree, got {chunk.strip()!r}", no, col, path)
        out.append((m.group(1), int(m.group(2))))
        offset += len(chunk) + 1
    names = [n for n, _ in out]
    if len(set(names)) != len(names):
        raise ParseError("duplicate basis name", no, 1, path)
    return out


def _linear(text, names, no, raw, path):
    """Parse a linear combination of basis names as {name: Fraction}."""
    coords = CoordinateSystem([(n, 0) for n in names])
    col0 = raw.find(text) + 1 if text in raw else 1
    try:
        p = parse_polynomial(text, coords)
    except PolynomialSyntaxError as exc:
        raise ParseError(str(exc), no, col0 + exc.column - 1, path) from None
    except KeyError as exc:
        raise ParseError(f"unknown basis element {exc.args[0]!r}", no, col0, path) from None
    out = {}
    for e, c in p.terms.items():
        if sum(e) != 1:
            raise ParseError("right-hand side must be linear in the basis", no, col0, path)
        out[names[e.index(1)]] = c
    return out


def parse_algebra(text, path=None):
    basis = None
    name = ""
    brackets = {}
    diff = {}
    for no, raw, line in _lines(text):
        s = line.strip()
        if s.startswith("name:"):
            name = s[5:].strip()
            continue
        if s.startswith("basis:"):
            if basis is not None:
                raise ParseError("second basis line", no, 1, path)
            basis = _pairs(s[6:], no, raw, path)
            continue
        if basis is None:
            raise ParseError("basis line must come first", no, 1, path)
        names = [n for n, _ in basis]
        m = _BRACKET.match(s)
        if m:
            a, b, rhs = m.groups()
            for x in (a, b):
                if x not in names:
                    raise ParseError(f"unknown basis element {x!r}", no, raw.find(x) + 1, path)
            if (a, b) in brackets:
                raise ParseError(f"bracket [{a},{b}] given twice", no, 1, path)
            brackets[a, b] = _linear(rhs.strip(), names, no, raw, path)
            continue
        m = _DIFF.match(s)
        if m:
            a, rhs = m.groups()
            if a not in names:
                raise ParseError(f"unknown basis element {a!r}", no, raw.find(a) + 1, path)
            diff[a] = _linear(rhs.strip(), names, no, raw, path)
            continue
        raise ParseError("expected '[a,b] = ...' or 'd(a) = ...'", no, len(raw) - len(raw.lstrip()) + 1,
                         path)
    if basis is None:
        raise ParseError("missing basis line", 1, 1, path)
    return LieSuperAlgebraSpec.from_brackets(basis, brackets, diff, name=name or _stem(path))


def parse_qstructure(text, path=None):
    coords = None
    comps = {}
    trunc = None
    for no, raw, line in _lines(text):
        s = line.strip()
        if s.startswith("coords:"):
            coords = CoordinateSystem(_pairs(s[7:], no, raw, path))
            continue
        if s.startswith("truncate:"):
            try:
                trunc = int(s[9:].strip())
            except ValueError:
                raise ParseError("truncate expects an integer", no, 1, path) from None
            continue
        if coords is None:
            raise ParseError("coords line must come first", no, 1, path)
        m = _QLINE.match(s)
        if not m:
            raise ParseError("expected 'Q[name] = polynomial'", no, 1, path)
        nm, rhs = m.groups()
        if nm not in coords.names:
            raise ParseError(f"unknown coordinate {nm!r}", no, raw.find(nm) + 1, path)
        col0 = raw.find(rhs.strip()) + 1
        try:
            comps[nm] = parse_polynomial(rhs.strip(), coords)
        except PolynomialSyntaxError as exc:
            raise ParseError(str(exc), no, col0 + exc.column - 1, path) from None
        except KeyError as exc:
            raise ParseError(f"unknown coordinate {exc.args[0]!r}", no, col0, path) from None
    if coords is None:
        raise ParseError("missing coords line", 1, 1, path)
    return QStructure(coords, comps, trunc)


def _stem(path):
    return Path(path).stem if path else ""


def load(path):
    """Read a .alg or .q file; returns a LieSuperAlgebraSpec or a QStructure."""
    p = resolve(path)
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".q":
        return parse_qstructure(text, str(path))
    return parse_algebra(text, str(path))


def load_algebra(path):
    return parse_algebra(resolve(path).read_text(encoding="utf-8"), str(path))


def load_qstructure(path):
    return parse_qstructure(resolve(path).read_text(encoding="utf-8"), str(path))


def corpus_files():
    return sorted(p.name for p in CORPUS.iterdir() if p.suffix in (".alg", ".q"))


__all__ = ["ParseError", "parse_algebra", "parse_qstructure", "load", "load_algebra",
           "load_qstructure", "resolve", "corpus_files", "CORPUS", "rational"]
