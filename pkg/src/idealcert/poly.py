"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients.  Variables are printed as ``z<base>, z<base+1>, ...``; affine
polynomials use ``base=1`` (z1..zn) and projective sections use ``base=0``
so that ``z0`` is the homogenizing coordinate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = [
    "Polynomial",
    "HomogeneousSection",
    "ParseError",
    "parse",
    "grevlex_key",
    "monomials_up_to",
    "homogenize",
    "dehomogenize",
    "section_norm_sq",
]


def grevlex_key(exps):
    """Sort key: larger key means larger monomial in graded reverse lex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def monomials_up_to(nvars, degree):
    """All exponent tuples of total degree <= ``degree``, grevlex ascending."""
    if degree < 0:
        return []
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            out.append(tuple(e))
    out.sort(key=grevlex_key)
    return out


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, Rational):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial over Q in ``nvars`` variables."""

    __slots__ = ("nvars", "base", "_terms", "_hash")

    def __init__(self, nvars, terms=None, base=1):
        if nvars < 1:
            raise ValueError("nvars must be positive")
        self.nvars = nvars
        self.base = base
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ValueError(f"monomial {exps} has length {len(exps)}, expected {nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def constant(cls, c, nvars, base=1):
        return cls(nvars, {(0,) * nvars: c}, base=base)

    @classmethod
    def variable(cls, index, nvars, base=1):
        """The variable at exponent position ``index`` (0-based)."""
        e = [0] * nvars
        e[index] = 1
        return cls(nvars, {tuple(e): 1}, base=base)

    @classmethod
    def monomial(cls, exps, coeff=1, base=1):
        return cls(len(exps), {tuple(exps): coeff}, base=base)

    def _new(self, terms):
        p = Polynomial.__new__(Polynomial)
        p.nvars = self.nvars
        p.base = self.base
        p._terms = terms
        p._hash = None
        return p

    # inspection

    @property
    def terms(self):
        """Terms as a dict copy (exponent tuple -> Fraction)."""
        return dict(self._terms)

    def items(self):
        """(exponents, coefficient) pairs in grevlex-descending order."""
        return sorted(self._terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def coeff(self, exps):
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self, d=None):
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return d is None or degs == {d}

    def leading(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return self.items()[0]

    # arithmetic

    def _check(self, other):
        if not isinstance(other, Polynomial):
            raise TypeError("polynomial operand expected")
        if other.nvars != self.nvars or other.base != self.base:
            raise ValueError(
                f"variable mismatch: {self.nvars} vars (base {self.base}) "
                f"vs {other.nvars} vars (base {other.base})")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, Rational):
            return Polynomial.constant(other, self.nvars, self.base)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, Polynomial):
            c = _as_fraction(other)
            if not c:
                return self._new({})
            return self._new({e: c * v for e, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._new({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(1, self.nvars, self.base)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.nvars, self.base, self._terms) == (other.nvars, other.base, other._terms)
        if isinstance(other, Rational):
            return self == Polynomial.constant(other, self.nvars, self.base)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.base, frozenset(self._terms.items())))
        return self._hash

    def derivative(self, index):
        """Partial derivative with respect to the variable at position ``index``."""
        out = {}
        for e, c in self._terms.items():
            if e[index]:
                e2 = list(e)
                e2[index] -= 1
                out[tuple(e2)] = c * e[index]
        return self._new(out)

    def rebase(self, base):
        """Same polynomial, printed with a different first variable index."""
        p = self._new(dict(self._terms))
        p.base = base
        return p

    # evaluation

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point):
        """Evaluate at ``point``.

        Rational points give an exact ``Fraction``.  Float/complex points (or
        numpy arrays broadcasting against each other) give complex floats.
        """
        point = list(point)
        if len(point) != self.nvars:
            raise ValueError(f"point has length {len(point)}, expected {self.nvars}")
        if all(isinstance(x, Rational) for x in point):
            total = Fraction(0)
            for e, c in self._terms.items():
                t = c
                for x, k in zip(point, e):
                    if k:
                        t *= Fraction(x) ** k
                total += t
            return total
        xs = [np.asarray(x, dtype=complex) for x in point]
        shape = np.broadcast_shapes(*(x.shape for x in xs))
        total = np.zeros(shape, dtype=complex)
        # cache powers per variable
        powers = [{0: 1.0} for _ in xs]
        for e, c in self._terms.items():
            t = complex(c)
            for v, k in enumerate(e):
                if k:
                    pw = powers[v]
                    if k not in pw:
                        pw[k] = xs[v] ** k
                    t = t * pw[k]
            total = total + t
        if total.ndim == 0:
            return complex(total)
        return total

    # printing

    def to_string(self, names=None):
        if names is None:
            names = [f"z{self.base + i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        pieces = []
        for idx, (e, c) in enumerate(self.items()):
            neg = c < 0
            a = -c if neg else c
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(a)] + factors)
            if idx == 0:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append((" - " if neg else " + ") + body)
        return "".join(pieces)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_string()!r}, base={self.base})"


@dataclass(frozen=True)
class HomogeneousSection:
    """A homogeneous polynomial in z0..zn viewed as a section of O(degree)."""

    poly: Polynomial
    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if not self.poly.is_homogeneous(self.degree):
            raise ValueError(f"{self.poly} is not homogeneous of degree {self.degree}")

    @property
    def n(self):
        return self.poly.nvars - 1

    def __call__(self, *z):
        return self.poly.evaluate(z)


# --------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    """Syntax error in polynomial text; ``offset`` is a byte offset."""

    def __init__(self, message, offset):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class _Parser:
    def __init__(self, text, nvars, base):
        self.text = text
        self.data = text.encode("utf-8")
        self.pos = 0
        self.nvars = nvars
        self.base = base

    def error(self, msg):
        raise ParseError(msg, self.pos)

    def skip(self):
        while self.pos < len(self.data) and self.data[self.pos] in b" \t\r\n":
            self.pos += 1

    def peek(self):
        self.skip()
        if self.pos < len(self.data):
            return chr(self.data[self.pos])
        return ""

    def eat(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def nat(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.data) and 48 <= self.data[self.pos] <= 57:
            self.pos += 1
        if start == self.pos:
            self.error("expected a natural number")
        return int(self.data[start:self.pos])

    def parse(self):
        p = self.poly()
        self.skip()
        if self.pos != len(self.data):
            self.error(f"unexpected {chr(self.data[self.pos])!r}")
        return p

    def poly(self):
        neg = self.eat("-")
        acc = self.term()
        if neg:
            acc = -acc
        while True:
            if self.eat("+"):
                acc = acc + self.term()
            elif self.eat("-"):
                acc = acc - self.term()
            else:
                return acc

    def term(self):
        acc = self.factor()
        while True:
            if self.eat("*"):
                acc = acc * self.factor()
            elif self.peek() and (self.peek().isdigit() or self.peek() in "z("):
                acc = acc * self.factor()
            else:
                return acc

    def _power(self, p):
        if self.eat("^"):
            return p ** self.nat()
        return p

    def factor(self):
        ch = self.peek()
        if ch.isdigit():
            num = self.nat()
            if self.eat("/"):
                self.skip()
                start = self.pos
                den = self.nat()
                if den == 0:
                    raise ParseError("zero denominator", start)
                return Polynomial.constant(Fraction(num, den), self.nvars, self.base)
            return Polynomial.constant(num, self.nvars, self.base)
        if ch == "z":
            start = self.pos
            self.pos += 1
            if not (self.pos < len(self.data) and 48 <= self.data[self.pos] <= 57):
                self.error("expected variable index after 'z'")
            k = self.nat()
            idx = k - self.base
            if not 0 <= idx < self.nvars:
                self.pos = start
                lo, hi = self.base, self.base + self.nvars - 1
                self.error(f"variable z{k} out of range z{lo}..z{hi}")
            return self._power(Polynomial.variable(idx, self.nvars, self.base))
        if ch == "(":
            self.pos += 1
            inner = self.poly()
            if not self.eat(")"):
                self.error("expected ')'")
            return self._power(inner)
        if ch == "":
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")


def parse(text, nvars, base=1):
    """Parse polynomial text such as ``"2*z1^2 - 1/3*z2"``.

    With the default ``base=1`` the variables are z1..z<nvars>; pass
    ``base=0`` for homogeneous input in z0..z<nvars-1>.
    """
    return _Parser(text, nvars, base).parse()


# --------------------------------------------------------------------------
# homogenization


def homogenize(F, d):
    """Return the section ``z0^d * F(z'/z0)`` of O(d) in n+1 variables."""
    deg = F.degree()
    if d < deg:
        raise ValueError(f"declared degree {d} is below deg F = {deg}")
    terms = {(d - sum(e),) + e: c for e, c in F.terms.items()}
    return HomogeneousSection(Polynomial(F.nvars + 1, terms, base=0), d)


def dehomogenize(s):
    """Set z0 = 1."""
    p = s.poly if isinstance(s, HomogeneousSection) else s
    if p.nvars < 2:
        raise ValueError("need at least two homogeneous variables")
    out = {}
    for e, c in p.terms.items():
        out[e[1:]] = out.get(e[1:], 0) + c
    return Polynomial(p.nvars - 1, out, base=1)


def section_norm_sq(sections, z):
    """Pointwise norm ``sum_j |f_j(z)|^2 / |z|^(2 d_j)`` on C^{n+1} minus 0."""
    z = [complex(x) for x in z]
    nz = sum(abs(x) ** 2 for x in z)
    if nz == 0:
        raise ValueError("z must be nonzero")
    total = 0.0
    for s in sections:
        total += abs(s.poly.evaluate(z)) ** 2 / nz ** s.degree
    return total
