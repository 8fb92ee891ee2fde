"""A small exterior algebra with numeric (possibly array valued) coefficients.

Basis monomials are bitmasks over an ordered list of odd generators; a
monomial is always stored with its generators in ascending order.
Coefficients may be complex scalars or numpy arrays; arrays broadcast, which
lets one form carry its values at every quadrature node at once.
"""

from __future__ import annotations

from math import factorial

import numpy as np

__all__ = [
    "Algebra",
    "Form",
    "FormElement",
    "kernel_algebra",
    "exterior_product",
    "epsilon_integral",
    "top_coefficient",
    "omega",
]


def _swap_sign(a, b):
    """Sign of moving monomial ``b`` past ``a`` into ascending order (a first)."""
    s = 0
    while b:
        low = b & -b
        j = low.bit_length() - 1
        s += (a >> (j + 1)).bit_count()
        b ^= low
    return -1 if s & 1 else 1


class Algebra:
    """Ordered odd generators, addressed by name."""

    def __init__(self, names, n=0, m=0):
        self.n = n
        self.m = m
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        self.index = {name: i for i, name in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def mask(self, *names):
        m = 0
        for name in names:
            m |= 1 << self.index[name]
        return m

    def gen(self, name, coeff=1.0):
        return Form(self, {1 << self.index[name]: coeff})

    def scalar(self, c):
        return Form(self, {0: c})

    def zero(self):
        return Form(self, {})

    def monomial(self, names, coeff=1.0):
        """Wedge of the named generators in the given order."""
        out = self.scalar(coeff)
        for name in names:
            out = out ^ self.gen(name)
        return out


def _is_zero_coeff(c):
    return np.ndim(c) == 0 and c == 0


class Form:
    """An element of the exterior algebra: mask -> coefficient."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        self.terms = {m: c for m, c in (terms or {}).items() if not _is_zero_coeff(c)}

    def __add__(self, other):
        if not isinstance(other, Form):
            other = self.algebra.scalar(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Form(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        """Multiplication by a scalar or coefficient array."""
        if isinstance(c, Form):
            return self.wedge(c)
        return Form(self.algebra, {m: v * c for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other):
        return self.wedge(other)

    def wedge(self, other, keep=None):
        """Exterior product; ``keep(mask)`` (optional) drops unwanted result monomials early."""
        if other.algebra is not self.algebra:
            raise ValueError("forms live in different algebras")
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                if keep is not None and not keep(ma | mb):
                    continue
                v = ca * cb if _swap_sign(ma, mb) > 0 else -(ca * cb)
                m = ma | mb
                out[m] = out[m] + v if m in out else v
        return Form(self.algebra, out)

    def power(self, k):
        out = self.algebra.scalar(1.0)
        for _ in range(k):
            out = out.wedge(self)
        return out

    def exp(self):
        """exp of a nilpotent even element (no scalar part)."""
        if 0 in self.terms:
            raise ValueError("exp is only used on elements without scalar part")
        total = self.algebra.scalar(1.0)
        term = self.algebra.scalar(1.0)
        k = 0
        while True:
            k += 1
            term = term.wedge(self)
            if not term.terms:
                return total
            total = total + term * (1.0 / factorial(k))

    def contract(self, name, value=1.0):
        """Left interior multiplication by the dual of a generator (an odd antiderivation)."""
        g = self.algebra.index[name]
        bit = 1 << g
        out = {}
        for m, c in self.terms.items():
            if m & bit:
                sign = -1 if (m & (bit - 1)).bit_count() & 1 else 1
                out[m ^ bit] = c * (sign * value)
        return Form(self.algebra, out)

    def contract_section(self, pairs):
        """Interior multiplication by sum value_g * (dual of g) over (name, value) pairs."""
        out = self.algebra.zero()
        for name, value in pairs:
            out = out + self.contract(name, value)
        return out

    def restrict(self, mask_filter):
        return Form(self.algebra, {m: c for m, c in self.terms.items() if mask_filter(m)})

    def degree_part(self, k):
        return self.restrict(lambda m: m.bit_count() == k)

    def coefficient(self, names):
        """Coefficient on the monomial with the given generators (any order, sign-corrected)."""
        out = self.algebra.monomial(names)
        (mask, sign), = out.terms.items()
        c = self.terms.get(mask, 0.0)
        return c * sign

    def scalar_part(self):
        return self.terms.get(0, 0.0)

    def __repr__(self):
        parts = []
        for m, c in sorted(self.terms.items()):
            gens = [self.algebra.names[i] for i in range(len(self.algebra)) if m >> i & 1]
            label = "^".join(gens) if gens else "1"
            val = c if np.ndim(c) == 0 else f"array{np.shape(c)}"
            parts.append(f"{val}*{label}")
        return "Form(" + " + ".join(parts) + ")" if parts else "Form(0)"


FormElement = Form


def exterior_product(a, b):
    return a.wedge(b)


# --------------------------------------------------------------------------
# the algebra used by the division kernel


def kernel_algebra(n, m, tilde=True):
    """Generators dz_k, dzbar_k (k = 1..n), then eps*_j, eps_j pairs, then eps~_j.

    With this ordering the monomial eps*_1 eps_1 ... eps*_m eps_m equals
    (sum eps*_j eps_j)^m / m!, and the top differential monomial is
    dz_1 dzbar_1 ... dz_n dzbar_n.
    """
    names = []
    for k in range(1, n + 1):
        names += [f"dz{k}", f"dzb{k}"]
    for j in range(1, m + 1):
        names += [f"es{j}", f"e{j}"]
    if tilde:
        names += [f"et{j}" for j in range(1, m + 1)]
    return Algebra(names, n, m)


def differential_mask(alg):
    return alg.mask(*[f"{p}{k}" for k in range(1, alg.n + 1) for p in ("dz", "dzb")])


def epsilon_integral(form):
    """Coefficient gamma' of (sum eps*_j ^ eps_j)^m / m!, as a form in the differentials.

    Terms carrying any other eps-family generator (extra eps, eps~) are
    discarded.
    """
    alg = form.algebra
    full = alg.mask(*[f"{p}{j}" for j in range(1, alg.m + 1) for p in ("es", "e")])
    dmask = differential_mask(alg)
    out = {}
    for mask, c in form.terms.items():
        if mask & ~dmask == full:
            # differentials precede every eps generator, so no reordering sign
            out[mask & dmask] = c
    return Form(alg, out)


def top_coefficient(form):
    """Coefficient on dz_1 dzbar_1 ... dz_n dzbar_n (zero if absent)."""
    return form.terms.get(differential_mask(form.algebra), 0.0)


def omega(alg):
    """sum_j eps*_j ^ eps_j."""
    out = alg.zero()
    for j in range(1, alg.m + 1):
        out = out + alg.monomial([f"es{j}", f"e{j}"])
    return out
