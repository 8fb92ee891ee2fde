"""Degree-bounded ideal membership by exact linear algebra.

The question "are there Q_j with sum F_j Q_j = Phi and deg F_j Q_j <= r" is
a finite linear system once the Q_j are expanded in monomials of degree at
most r - d_j.  Rows of that (Macaulay) matrix are monomials of degree <= r,
columns are pairs (generator j, monomial kappa).  Everything is ordered by
grevlex ascending, generator-major for the columns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .linalg import ExactMatrix, solve
from .poly import Polynomial, monomials_up_to, parse

__all__ = [
    "GeneratorSystem",
    "MacaulaySystem",
    "DivisionCertificate",
    "Infeasible",
    "KoszulTuple",
    "AutoSatisfied",
    "MinimalR",
    "build_macaulay",
    "divide",
    "bezout",
    "power_divide",
    "koszul_divide",
    "koszul_differential",
    "verify",
    "noll_threshold",
    "skolk_oppo_budget",
    "certificate_to_json",
    "certificate_from_json",
]


@dataclass(frozen=True)
class GeneratorSystem:
    """Generators F_1..F_m in n variables with declared degrees d_j >= deg F_j."""

    n: int
    polys: tuple
    degrees: tuple

    def __init__(self, n, polys, degrees=None):
        polys = tuple(polys)
        if not polys:
            raise ValueError("need at least one generator")
        for F in polys:
            if F.nvars != n:
                raise ValueError(f"generator {F} is not in {n} variables")
            if F.is_zero():
                raise ValueError("generators must be nonzero")
        if degrees is None:
            degrees = tuple(F.degree() for F in polys)
        degrees = tuple(int(d) for d in degrees)
        if len(degrees) != len(polys):
            raise ValueError("one declared degree per generator")
        for F, d in zip(polys, degrees):
            if d < F.degree():
                raise ValueError(f"declared degree {d} < deg {F} = {F.degree()}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "degrees", degrees)

    @classmethod
    def parse(cls, texts, n, degrees=None):
        return cls(n, [parse(t, n) for t in texts], degrees)

    @property
    def m(self):
        return len(self.polys)

    def one(self):
        return Polynomial.constant(1, self.n)

    def scaled(self, factors):
        return GeneratorSystem(self.n, [F * Fraction(c) for F, c in zip(self.polys, factors)],
                               self.degrees)

    def permuted(self, perm):
        return GeneratorSystem(self.n, [self.polys[p] for p in perm],
                               [self.degrees[p] for p in perm])


@dataclass
class MacaulaySystem:
    rows: list
    cols: list
    matrix: ExactMatrix

    def rhs(self, target):
        """Coefficient vector of ``target`` in the row basis."""
        index = {mono: i for i, mono in enumerate(self.rows)}
        b = [Fraction(0)] * len(self.rows)
        for e, c in target.terms.items():
            if e not in index:
                raise ValueError(f"target monomial {e} outside the degree budget")
            b[index[e]] = c
        return b


@dataclass
class DivisionCertificate:
    """Cofactors with ``sum F_j Q_j = target^nu`` inside degree budget ``r``."""

    cofactors: list
    nu: int
    r: int
    verified: bool = False

    feasible = True

    def __bool__(self):
        return True

    def max_deg_fq(self, G):
        return max(((F * Q).degree() for F, Q in zip(G.polys, self.cofactors)), default=-1)


@dataclass
class Infeasible:
    """No cofactors exist within the budget; ``witness`` is an inconsistent row monomial."""

    r: int | None = None
    witness: tuple | None = None
    nu: int | None = None

    feasible = False

    def __bool__(self):
        return False


@dataclass
class KoszulTuple:
    """A Lambda^ell E valued element: components keyed by sorted 0-based index tuples."""

    ell: int
    components: dict
    r: int

    def component(self, J, n):
        return self.components.get(tuple(J), Polynomial(n))


@dataclass(frozen=True)
class AutoSatisfied:
    def __str__(self):
        return "auto-satisfied"


@dataclass(frozen=True)
class MinimalR:
    r: int

    def __str__(self):
        return f"minimal r = {self.r}"


def _column_index(G, r):
    cols = []
    for j, d in enumerate(G.degrees):
        for kappa in monomials_up_to(G.n, r - d):
            cols.append((j, kappa))
    return cols


def build_macaulay(G, r):
    """Matrix of (Q_1..Q_m) -> sum F_j Q_j restricted to deg F_j Q_j <= r."""
    if r < 0:
        raise ValueError("r must be non-negative")
    rows = monomials_up_to(G.n, r)
    index = {mono: i for i, mono in enumerate(rows)}
    cols = _column_index(G, r)
    data = {}
    for c, (j, kappa) in enumerate(cols):
        for e, v in G.polys[j].terms.items():
            mono = tuple(a + b for a, b in zip(e, kappa))
            data[(index[mono], c)] = v
    return MacaulaySystem(rows, cols, ExactMatrix(len(rows), len(cols), data))


def _cofactors_from(G, cols, x):
    parts = [dict() for _ in range(G.m)]
    for (j, kappa), v in zip(cols, x):
        if v:
            parts[j][kappa] = v
    return [Polynomial(G.n, p) for p in parts]


def divide(G, target, r):
    """Cofactors with ``sum F_j Q_j = target`` and ``deg F_j Q_j <= r``, or ``Infeasible``."""
    if target.nvars != G.n:
        raise ValueError(f"target is not in {G.n} variables")
    if r < 0:
        raise ValueError("r must be non-negative")
    if target.degree() > r:
        raise ValueError(f"deg target = {target.degree()} exceeds budget r = {r}")
    if target.is_zero():
        cert = DivisionCertificate([Polynomial(G.n) for _ in G.polys], 1, r)
        cert.verified = verify(G, target, cert)
        return cert
    system = build_macaulay(G, r)
    out = solve(system.matrix, system.rhs(target))
    if not out.solved:
        return Infeasible(r=r, witness=system.rows[out.witness_row], nu=1)
    cert = DivisionCertificate(_cofactors_from(G, system.cols, out.solution), 1, r)
    cert.verified = verify(G, target, cert)
    return cert


def bezout(G, r):
    """Solve ``sum F_j Q_j = 1`` within budget ``r``."""
    return divide(G, G.one(), r)


def power_divide(G, target, nu_max, r_of_nu: Callable[[int], int]):
    """Smallest nu <= nu_max with target^nu in the ideal at budget ``r_of_nu(nu)``.

    Returns ``(nu, certificate)`` or ``Infeasible``.  A budget below
    ``deg target^nu`` counts as infeasible for that nu.
    """
    if nu_max < 1:
        raise ValueError("nu_max must be at least 1")
    last = None
    for nu in range(1, nu_max + 1):
        r = r_of_nu(nu)
        phi = target ** nu
        if r < 0 or phi.degree() > r:
            last = Infeasible(r=r, witness=None, nu=nu)
            continue
        cert = divide(G, phi, r)
        if cert:
            cert.nu = nu
            cert.verified = verify(G, target, cert)
            return nu, cert
        cert.nu = nu
        last = cert
    return last


def _koszul_sign(j, Jp):
    return -1 if Jp.index(j) % 2 else 1


def koszul_differential(G, psi):
    """delta_f on a Koszul tuple: contraction of eps_{J'} against f."""
    out = {}
    for Jp, P in psi.components.items():
        for j in Jp:
            J = tuple(x for x in Jp if x != j)
            term = G.polys[j] * P * _koszul_sign(j, Jp)
            out[J] = out.get(J, Polynomial(G.n)) + term
    return KoszulTuple(psi.ell - 1, {J: P for J, P in out.items() if P}, psi.r)


def koszul_divide(G, phi):
    """Find psi in Lambda^{ell+1} with delta_f psi = phi, degrees bounded by phi.r."""
    ell, r, m, n = phi.ell, phi.r, G.m, G.n
    if not 0 <= ell < m:
        raise ValueError(f"ell must satisfy 0 <= ell < m = {m}")
    d = G.degrees
    for J, P in phi.components.items():
        if len(J) != ell or list(J) != sorted(set(J)) or any(not 0 <= j < m for j in J):
            raise ValueError(f"bad index set {J} for ell = {ell}")
        if P.degree() > r - sum(d[j] for j in J):
            raise ValueError(f"component {J} has degree {P.degree()} above its budget")
    out_sets = list(combinations(range(m), ell + 1))
    in_sets = list(combinations(range(m), ell))
    rows = []
    row_index = {}
    for J in in_sets:
        for mono in monomials_up_to(n, r - sum(d[j] for j in J)):
            row_index[(J, mono)] = len(rows)
            rows.append((J, mono))
    cols = []
    for Jp in out_sets:
        for kappa in monomials_up_to(n, r - sum(d[j] for j in Jp)):
            cols.append((Jp, kappa))
    data = {}
    for c, (Jp, kappa) in enumerate(cols):
        for j in Jp:
            J = tuple(x for x in Jp if x != j)
            s = _koszul_sign(j, Jp)
            for e, v in G.polys[j].terms.items():
                mono = tuple(a + b for a, b in zip(e, kappa))
                data[(row_index[(J, mono)], c)] = s * v
    b = [Fraction(0)] * len(rows)
    for J, P in phi.components.items():
        for e, v in P.terms.items():
            b[row_index[(tuple(J), e)]] = v
    if not any(b):
        return KoszulTuple(ell + 1, {}, r)
    out = solve(ExactMatrix(len(rows), len(cols), data), b)
    if not out.solved:
        J, mono = rows[out.witness_row]
        return Infeasible(r=r, witness=(J, mono))
    parts = {}
    for (Jp, kappa), v in zip(cols, out.solution):
        if v:
            parts.setdefault(Jp, {})[kappa] = v
    return KoszulTuple(ell + 1, {Jp: Polynomial(n, t) for Jp, t in parts.items()}, r)


def verify(G, target, cert):
    """Independent recomputation of a certificate.

    True iff ``sum F_j Q_j == target^nu`` exactly, every ``deg F_j Q_j <= r``
    and every ``deg Q_j <= r - d_j``.
    """
    if len(cert.cofactors) != G.m:
        return False
    total = Polynomial(G.n)
    for F, d, Q in zip(G.polys, G.degrees, cert.cofactors):
        if Q.nvars != G.n:
            return False
        FQ = F * Q
        if FQ.degree() > cert.r or (Q and Q.degree() > cert.r - d):
            return False
        total = total + FQ
    return total == target ** cert.nu


def noll_threshold(degrees: Sequence[int], n: int, ell: int = 0):
    """Degree budget above which solvability follows from the residue condition.

    ``AutoSatisfied`` when m - ell <= n, else ``MinimalR`` with the sum of the
    n + ell + 1 largest degrees minus n (clamped at 0).
    """
    degrees = list(degrees)
    if not degrees or any(d < 1 for d in degrees):
        raise ValueError("degrees must be a nonempty list of positive integers")
    if ell < 0:
        raise ValueError("ell must be non-negative")
    m = len(degrees)
    if m - ell <= n:
        return AutoSatisfied()
    top = sorted(degrees, reverse=True)[: n + ell + 1]
    return MinimalR(max(0, sum(top) - n))


def skolk_oppo_budget(degrees, n, m, r_or_M, mode="skolk"):
    """(power, degree budget, condition holds) for the Briancon-Skoda type corollaries.

    ``mode`` is ``"skolk"`` (target satisfies |phi| <= C|f|, r = deg budget of
    phi) or ``"oppo"`` (Bezout with Lojasiewicz exponent M).  Both read
    ``min(m, n) * r_or_M >= sum of the n+1 largest d_j - n`` unless m <= n.
    """
    if mode not in ("skolk", "oppo"):
        raise ValueError("mode must be 'skolk' or 'oppo'")
    power = min(m, n)
    budget = r_or_M * power
    if m <= n:
        ok = True
    else:
        top = sorted(degrees, reverse=True)[: n + 1]
        ok = budget >= sum(top) - n
    return power, budget, ok


# --------------------------------------------------------------------------
# JSON certificates


def certificate_to_json(G, target, cert):
    return {
        "n": G.n,
        "generators": [str(F) for F in G.polys],
        "declared_degrees": list(G.degrees),
        "target": str(target),
        "nu": cert.nu,
        "r": cert.r,
        "cofactors": [str(Q) for Q in cert.cofactors],
        "verified": bool(cert.verified),
        "max_deg_fq": cert.max_deg_fq(G),
    }


CERTIFICATE_KEYS = {"n": int, "generators": list, "declared_degrees": list, "target": str,
                    "nu": int, "r": int, "cofactors": list, "verified": bool,
                    "max_deg_fq": int}


def certificate_from_json(doc):
    """Parse a certificate document; returns ``(G, target, cert)``."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    for key, typ in CERTIFICATE_KEYS.items():
        if key not in doc:
            raise ValueError(f"certificate is missing {key!r}")
        if not isinstance(doc[key], typ) or (typ is int and isinstance(doc[key], bool)):
            raise ValueError(f"certificate field {key!r} must be {typ.__name__}")
    n = doc["n"]
    G = GeneratorSystem.parse(doc["generators"], n, doc["declared_degrees"])
    target = parse(doc["target"], n)
    cofactors = [parse(t, n) for t in doc["cofactors"]]
    cert = DivisionCertificate(cofactors, doc["nu"], doc["r"], doc["verified"])
    return G, target, cert
