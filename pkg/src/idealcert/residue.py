"""Annihilation of residue currents for monomial complete intersections.

For generators that are powers of distinct coordinates the residue current is
a tensor product of one-variable currents dbar[1/z^p].  Multiplying by z^k
lowers the pole order by k and the current vanishes once the order hits 0,
so a polynomial kills the product current iff each of its monomials kills
some factor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .membership import GeneratorSystem, divide
from .poly import HomogeneousSection, Polynomial

__all__ = [
    "MonomialCI",
    "OneVarCurrent",
    "onevar_reduce",
    "annihilates",
    "annihilates_projective",
    "duality_oracle",
]


@dataclass(frozen=True)
class OneVarCurrent:
    """dbar[1/z^p]; ``pole_order == 0`` is the zero current."""

    pole_order: int

    def __post_init__(self):
        if self.pole_order < 0:
            raise ValueError("pole order must be non-negative")

    @property
    def vanishes(self):
        return self.pole_order == 0


def onevar_reduce(k, p):
    """z^k * dbar[1/z^p] = dbar[1/z^(p-k)], zero once k >= p."""
    if k < 0 or p < 0:
        raise ValueError("k and p must be non-negative")
    return OneVarCurrent(max(p - k, 0))


@dataclass(frozen=True)
class MonomialCI:
    """Generators z_{k_j}^{a_j} with distinct positions k_j (0-based in the exponent vector).

    ``nvars`` is the number of polynomial variables (n affine, n+1 when
    ``homogeneous``).
    """

    nvars: int
    gens: tuple
    homogeneous: bool = False

    def __post_init__(self):
        gens = tuple((int(k), int(a)) for k, a in self.gens)
        object.__setattr__(self, "gens", gens)
        ks = [k for k, _ in gens]
        if len(set(ks)) != len(ks):
            raise ValueError("variable positions must be pairwise distinct")
        if any(not 0 <= k < self.nvars for k in ks):
            raise ValueError("variable position out of range")
        if any(a < 1 for _, a in gens):
            raise ValueError("exponents must be >= 1")
        if not gens:
            raise ValueError("need at least one generator")

    @property
    def m(self):
        return len(self.gens)

    @classmethod
    def from_polys(cls, polys, homogeneous=False):
        """Recognise c * z_k^a generators; scalars c are dropped."""
        gens = []
        nvars = polys[0].nvars
        for F in polys:
            if len(F) != 1:
                raise ValueError(f"{F} is not a monomial")
            (e, _), = F.terms.items()
            support = [i for i, a in enumerate(e) if a]
            if len(support) != 1:
                raise ValueError(f"{F} is not a power of a single coordinate")
            gens.append((support[0], e[support[0]]))
        return cls(nvars, tuple(gens), homogeneous)

    def polys(self):
        base = 0 if self.homogeneous else 1
        out = []
        for k, a in self.gens:
            e = [0] * self.nvars
            e[k] = a
            out.append(Polynomial.monomial(e, base=base))
        return out

    def generator_system(self):
        if self.homogeneous:
            raise ValueError("generator systems are affine")
        return GeneratorSystem(self.nvars, self.polys())


def _monomial_kills(ci, exps):
    return any(onevar_reduce(exps[k], a).vanishes for k, a in ci.gens)


def annihilates(ci, target):
    """True iff target * R^f = 0 for the monomial complete intersection ``ci``."""
    if target.nvars != ci.nvars:
        raise ValueError(f"target has {target.nvars} variables, expected {ci.nvars}")
    return all(_monomial_kills(ci, e) for e in target.terms)


def annihilates_projective(ci, phi, extra_power_of_z0=0):
    """Same test for a homogeneous section, optionally multiplied by z0^s."""
    if not ci.homogeneous:
        raise ValueError("projective test needs a homogeneous MonomialCI")
    if not isinstance(phi, HomogeneousSection):
        raise TypeError("phi must be a HomogeneousSection")
    if not phi.poly.is_homogeneous(phi.degree):
        raise ValueError("phi is not homogeneous of its declared degree")
    if extra_power_of_z0 < 0:
        raise ValueError("z0 power must be non-negative")
    e = [0] * phi.poly.nvars
    e[0] = extra_power_of_z0
    lifted = phi.poly * Polynomial.monomial(e, base=phi.poly.base)
    return annihilates(ci, lifted)


def duality_oracle(G, target):
    """Membership answer from the exact solver at budget deg(target)."""
    MonomialCI.from_polys(list(G.polys))
    r = max(target.degree(), 0)
    return bool(divide(G, target, r))
