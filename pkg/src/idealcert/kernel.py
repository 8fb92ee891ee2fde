"""Integral division formula on P^1 and P^2 for generators without common zeros.

Conventions (affine chart zeta_0 = 1, evaluation point z = (1, z')):

* alpha_0 = (1 + z'.conj(zeta')) / (1 + |zeta'|^2),
  alpha_1 = -(1/2 pi i) dbar(conj(zeta').dzeta' / (1 + |zeta'|^2));
* s = sum_j conj(F_j(zeta')) / (1+|zeta'|^2)^{d_j} eps_j and
  U = sum_k s ^ (dbar s)^{k-1} / |f|^{2k};
* H = sum_j H_j ^ eps*_j with H_j = -(1/2 pi i) sum_k h_j^k(zeta', z') dzeta_k,
  tau = sum_j eps*_j ^ (eps_j - eps~_j).

All contractions and dbar are left antiderivations, which is what makes
(delta_f + delta_eta - dbar)(tau + H) = 0 hold with the signs above.  An
(n, n)-form c dzeta_1 dzbar_1 ... dzeta_n dzbar_n is integrated as
(2i)^n c dV; with that orientation alpha_1^n has total mass one.

The cofactor Q_j(z') is the integral of the eps-projection of
contract(eps~_j, e^{tau+H} ^ U) ^ alpha^{n+r} phi.  It is a polynomial in z',
so it is sampled on a grid of z' and recovered by least squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, pi

import numpy as np

from .forms import (
    _swap_sign,
    differential_mask,
    epsilon_integral,
    kernel_algebra,
    omega,
    top_coefficient,
)
from .linalg import nullspace_basis, solve
from .membership import build_macaulay
from .poly import Polynomial, monomials_up_to
from .quadrature import QuadratureRule

__all__ = [
    "HeferDecomposition",
    "NumericPolynomial",
    "KernelDivision",
    "AlphaKernel",
    "alpha_kernel",
    "QuadratureDegeneracy",
    "hefer_decompose",
    "verify_hefer",
    "bergman_reproduce",
    "bergman_reproduce_forms",
    "assemble_u",
    "nabla_f_scalar",
    "kernel_divide",
    "division_degree_bound",
    "projection_distance",
]

NORM_FLOOR = 1e-12


class QuadratureDegeneracy(ValueError):
    """|f|^2 fell below the floor at a quadrature node."""


# --------------------------------------------------------------------------
# Hefer decompositions


@dataclass(frozen=True)
class HeferDecomposition:
    """h^1..h^n in 2n variables (zeta_1..zeta_n, z_1..z_n)."""

    forms: tuple
    index: int = 0

    @property
    def n(self):
        return len(self.forms)

    def names(self):
        n = self.n
        return [f"w{k}" for k in range(1, n + 1)] + [f"z{k}" for k in range(1, n + 1)]


def _embed(F, offset, total):
    """F(x) placed in variables offset..offset+n-1 of a ``total`` variable ring."""
    out = {}
    for e, c in F.terms.items():
        big = [0] * total
        big[offset:offset + len(e)] = e
        out[tuple(big)] = c
    return Polynomial(total, out)


def hefer_decompose(F, n=None, index=0):
    """Telescoping Hefer decomposition of F.

    h^k collects, for each monomial, the z-variables before slot k, the
    zeta-variables after it and the quotient
    (zeta_k^a - z_k^a) / (zeta_k - z_k) = sum_t zeta_k^t z_k^(a-1-t).
    """
    n = F.nvars if n is None else n
    if n != F.nvars:
        raise ValueError(f"F has {F.nvars} variables, expected {n}")
    forms = []
    for k in range(n):
        acc = {}
        for e, c in F.terms.items():
            a = e[k]
            if a == 0:
                continue
            for t in range(a):
                mono = [0] * (2 * n)
                for i in range(k):
                    mono[n + i] = e[i]
                for i in range(k + 1, n):
                    mono[i] = e[i]
                mono[k] = t
                mono[n + k] = a - 1 - t
                mono = tuple(mono)
                acc[mono] = acc.get(mono, 0) + c
        forms.append(Polynomial(2 * n, acc))
    return HeferDecomposition(tuple(forms), index)


def verify_hefer(F, H, degree=None):
    """Exact check of sum_k h^k (zeta_k - z_k) = F(zeta) - F(z) and deg h^k <= d - 1."""
    n = F.nvars
    if H.n != n:
        return False
    d = F.degree() if degree is None else degree
    total = Polynomial(2 * n)
    for k, h in enumerate(H.forms):
        if h.nvars != 2 * n:
            return False
        if not h.is_zero() and h.degree() > d - 1:
            return False
        diff = Polynomial.variable(k, 2 * n) - Polynomial.variable(n + k, 2 * n)
        total = total + h * diff
    return total == _embed(F, 0, 2 * n) - _embed(F, n, 2 * n)


# --------------------------------------------------------------------------
# numeric polynomials


@dataclass
class NumericPolynomial:
    """Complex-coefficient polynomial, exps -> complex."""

    nvars: int
    coeffs: dict

    def evaluate(self, point):
        xs = [np.asarray(x, dtype=complex) for x in point]
        shape = np.broadcast_shapes(*(x.shape for x in xs))
        total = np.zeros(shape, dtype=complex)
        for e, c in self.coeffs.items():
            t = c
            for x, k in zip(xs, e):
                if k:
                    t = t * x ** k
            total = total + t
        return total if total.ndim else complex(total)

    def degree(self, tol=0.0):
        degs = [sum(e) for e, c in self.coeffs.items() if abs(c) > tol]
        return max(degs) if degs else -1

    def vector(self, monomials):
        return np.array([self.coeffs.get(m, 0j) for m in monomials], dtype=complex)

    def to_string(self, digits=12):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items(), key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            val = f"({c.real:.{digits}g}{c.imag:+.{digits}g}j)"
            parts.append(val + ("*" + mono if mono else ""))
        return " + ".join(parts)


# --------------------------------------------------------------------------
# Bergman representation


def _check_rule(rule, n):
    if not isinstance(rule, QuadratureRule):
        raise TypeError("rule must be a QuadratureRule")
    if rule.n != n:
        raise ValueError(f"rule is for n = {rule.n}, polynomial has n = {n}")


def bergman_reproduce(target, r, z, rule, max_nodes=1 << 18):
    """Quadrature value of C(n+r, n) * int alpha_0^r * target dV_FS at the chart point z.

    ``z`` may also be a batch of points of shape (P, n); the result is then
    an array of P values and every node is visited once.
    """
    n = target.nvars
    _check_rule(rule, n)
    if r < target.degree():
        raise ValueError(f"r = {r} is below deg target = {target.degree()}")
    z = np.asarray(z, dtype=complex)
    single = z.ndim <= 1
    z = z.reshape(-1, n)
    scale = comb(n + r, n)
    total = np.zeros(len(z), dtype=complex)
    for nodes, w, _ in rule.chunks(max(1, max_nodes // len(z))):
        rho = 1.0 + np.sum(np.abs(nodes) ** 2, axis=1)
        phi_w = target.evaluate(nodes.T) * w
        a0 = (1.0 + z @ nodes.conj().T) / rho  # (P, C)
        total += (a0 ** r) @ np.broadcast_to(phi_w, rho.shape)
    total *= scale
    return complex(total[0]) if single else total


def _alpha(alg, zeta, z):
    """(alpha_0, alpha_1) with zeta of shape (..., C, n) and z of shape (S, 1, n) or (n,)."""
    n = alg.n
    rho = 1.0 + np.sum(np.abs(zeta) ** 2, axis=-1)
    a0 = (1.0 + np.sum(z * zeta.conj(), axis=-1)) / rho
    a1 = alg.zero()
    c = -1.0 / (2j * pi)
    for k in range(n):
        for l in range(n):
            g = (1.0 / rho if k == l else 0.0) - zeta[..., k].conj() * zeta[..., l] / rho ** 2
            a1 = a1 + alg.monomial([f"dzb{l + 1}", f"dz{k + 1}"]) * (c * g)
    return a0, a1


@dataclass
class AlphaKernel:
    """alpha = alpha_0 + alpha_1 at chart points; ``power(N)`` is alpha^N."""

    alpha0: object
    alpha1: object

    def power(self, N):
        return _alpha_power(self.alpha1.algebra, self.alpha0, self.alpha1, N)


def alpha_kernel(z, zeta, alg=None):
    """Kernel alpha for evaluation point z' (shape (n,)) at chart points zeta (shape (C, n))."""
    zeta = np.atleast_2d(np.asarray(zeta, dtype=complex))
    z = np.asarray(z, dtype=complex).reshape(-1)
    n = zeta.shape[-1]
    alg = alg or kernel_algebra(n, 0, tilde=False)
    return AlphaKernel(*_alpha(alg, zeta, z))


def _alpha_power(alg, a0, a1, N):
    """alpha^N = sum_p C(N, p) alpha_0^{N-p} alpha_1^p."""
    out = alg.zero()
    a1p = alg.scalar(1.0)
    for p in range(0, min(N, alg.n) + 1):
        out = out + a1p * (comb(N, p) * a0 ** (N - p))
        a1p = a1p.wedge(a1)
    return out


def _integrate_top(coeff, lebesgue, n):
    return np.sum(coeff * lebesgue, axis=-1) * (2j) ** n


def bergman_reproduce_forms(target, r, z, rule, max_nodes=1 << 18):
    """Same value as ``bergman_reproduce`` but through the form engine: int alpha^{n+r} phi."""
    n = target.nvars
    _check_rule(rule, n)
    alg = kernel_algebra(n, 0, tilde=False)
    z = np.asarray(z, dtype=complex).reshape(n)
    total = 0j
    for nodes, _, leb in rule.chunks(max_nodes):
        a0, a1 = _alpha(alg, nodes, z)
        A = _alpha_power(alg, a0, a1, n + r) * target.evaluate(nodes.T)
        total += _integrate_top(top_coefficient(A), leb, n)
    return total


# --------------------------------------------------------------------------
# the form U with nabla_f U = 1 off the zero set of f


def _section_data(G, zeta):
    """F_j, dbar s_j coefficients, s_j and |f|^2 at chart points zeta (..., n)."""
    n = G.n
    rho = 1.0 + np.sum(np.abs(zeta) ** 2, axis=-1)
    cols = [zeta[..., k] for k in range(n)]
    Fv, s, ds = [], [], []
    norm = np.zeros(rho.shape)
    for F, d in zip(G.polys, G.degrees):
        val = F.evaluate(cols)
        val = np.broadcast_to(val, rho.shape)
        Fv.append(val)
        sj = val.conj() / rho ** d
        s.append(sj)
        norm = norm + np.abs(val) ** 2 / rho ** d
        dj = []
        for l in range(n):
            dF = np.broadcast_to(F.derivative(l).evaluate(cols), rho.shape)
            dj.append(dF.conj() / rho ** d - d * val.conj() * zeta[..., l] / rho ** (d + 1))
        ds.append(dj)
    return Fv, s, ds, norm


def assemble_u(G, zeta, alg=None):
    """U = sum_k s ^ (dbar s)^{k-1} / |f|^{2k} at chart points ``zeta`` (shape (C, n) or (n,)).

    Raises ``QuadratureDegeneracy`` where |f|^2 < 1e-12, i.e. near a common
    zero of the homogenized generators.
    """
    zeta = np.asarray(zeta, dtype=complex)
    if zeta.ndim == 1:
        zeta = zeta[None, :]
    n, m = G.n, G.m
    if zeta.shape[-1] != n:
        raise ValueError(f"points must have {n} coordinates")
    alg = alg or kernel_algebra(n, m)
    _, s, ds, norm = _section_data(G, zeta)
    if np.min(norm) < NORM_FLOOR:
        raise QuadratureDegeneracy(
            f"|f|^2 = {np.min(norm):.3e} below {NORM_FLOOR:g}: generators (nearly) share a zero")
    s_form = alg.zero()
    ds_form = alg.zero()
    for j in range(m):
        s_form = s_form + alg.gen(f"e{j + 1}") * s[j]
        for l in range(n):
            ds_form = ds_form + alg.monomial([f"dzb{l + 1}", f"e{j + 1}"]) * ds[j][l]
    U = alg.zero()
    piece = s_form
    for k in range(1, min(m, n + 1) + 1):
        U = U + piece * (1.0 / norm ** k)
        piece = piece.wedge(ds_form)
    return U


def nabla_f_scalar(G, U, zeta):
    """Scalar part of delta_f U at the chart points (should be identically 1)."""
    zeta = np.asarray(zeta, dtype=complex)
    if zeta.ndim == 1:
        zeta = zeta[None, :]
    cols = [zeta[..., k] for k in range(G.n)]
    pairs = [(f"e{j + 1}", np.broadcast_to(F.evaluate(cols), zeta.shape[:-1]))
             for j, F in enumerate(G.polys)]
    return U.contract_section(pairs).scalar_part()


# --------------------------------------------------------------------------
# division formula


@dataclass
class KernelDivision:
    cofactors: list
    degree_bound: int
    cofactor_degrees: list
    fit_residuals: list
    sample_points: np.ndarray = field(repr=False)

    def residual(self, G, target, points):
        """max |target - sum F_j Q_j| over ``points`` (shape (P, n))."""
        pts = np.asarray(points, dtype=complex)
        cols = [pts[:, k] for k in range(G.n)]
        lhs = np.broadcast_to(target.evaluate(cols), (len(pts),)).astype(complex)
        for F, Q in zip(G.polys, self.cofactors):
            lhs = lhs - np.broadcast_to(F.evaluate(cols), (len(pts),)) * Q.evaluate(cols)
        return float(np.max(np.abs(lhs)))


def division_degree_bound(degrees, n, r):
    """d_1 + ... + d_{mu+1} + r with mu = min(n, m-1), degrees sorted decreasingly."""
    ds = sorted(degrees, reverse=True)
    mu = min(n, len(ds) - 1)
    return sum(ds[: mu + 1]) + r


def _sample_grid(n, K):
    roots = np.exp(2j * pi * np.arange(K) / K)
    if n == 1:
        return roots[:, None]
    a, b = np.meshgrid(roots, roots, indexing="ij")
    return np.stack([a.ravel(), b.ravel()], axis=1)


def _hefer_form(alg, hefer, zeta, zs):
    """H = sum_j H_j ^ eps*_j with H_j = -(1/2 pi i) sum_k h_j^k(zeta, z) dzeta_k."""
    n = alg.n
    c = -1.0 / (2j * pi)
    args = [zeta[..., k] for k in range(n)] + [zs[..., k] for k in range(n)]
    H = alg.zero()
    for j, hd in enumerate(hefer):
        for k, h in enumerate(hd.forms):
            if not h.is_zero():
                H = H + alg.monomial([f"dz{k + 1}", f"es{j + 1}"]) * (c * h.evaluate(args))
    return H


def _top_pairing(Y, A):
    """Top coefficient of Y ^ A, multiplying only complementary monomials."""
    full = differential_mask(Y.algebra)
    total = 0.0
    for my, cy in Y.terms.items():
        need = full & ~my
        for ma, ca in A.terms.items():
            if ma == need and not my & ma:
                sign = _swap_sign(my, ma)
                total = total + (cy * ca if sign > 0 else -(cy * ca))
    return total


def _cofactor_samples(G, target, r, rule, Z, max_nodes, generic=False):
    """Quadrature values of every Q_j at the sample points ``Z`` (shape (S, n))."""
    n, m = G.n, G.m
    alg = kernel_algebra(n, m, tilde=generic)
    hefer = [hefer_decompose(F) for F in G.polys]
    S = len(Z)
    zs = Z[:, None, :]  # (S, 1, n)
    dmask = differential_mask(alg)
    eps_full = alg.mask(*[f"{p}{j}" for j in range(1, m + 1) for p in ("es", "e")])
    full_eps = lambda mask: mask & ~dmask == eps_full  # noqa: E731
    values = np.zeros((m, S), dtype=complex)
    for nodes, _, leb in rule.chunks(max(1, max_nodes // S)):
        zeta = nodes[None, :, :]  # (1, C, n)
        U = assemble_u(G, nodes, alg)
        H = _hefer_form(alg, hefer, zeta, zs)
        a0, a1 = _alpha(alg, zeta, zs)
        phi = target.evaluate([nodes[:, k] for k in range(n)])
        A = _alpha_power(alg, a0, a1, n + r) * phi
        if generic:
            tau = alg.zero()
            for j in range(1, m + 1):
                tau = tau + alg.monomial([f"es{j}", f"e{j}"]) - alg.monomial([f"es{j}", f"et{j}"])
            X = (tau + H).exp().wedge(U)
            XA = X.wedge(A)
            pieces = [top_coefficient(epsilon_integral(XA.contract(f"et{j + 1}")))
                      for j in range(m)]
        else:
            # contracting eps~_j out of e^{tau+H} and dropping the other eps~
            # leaves eps*_j ^ e^{omega+H}
            E = (omega(alg) + H).exp()
            pieces = []
            for j in range(m):
                Y = alg.gen(f"es{j + 1}").wedge(E).wedge(U, keep=full_eps)
                pieces.append(_top_pairing(Y, A))
        for j, coeff in enumerate(pieces):
            coeff = np.broadcast_to(coeff, (S, len(nodes)))
            values[j] += _integrate_top(coeff, leb[None, :], n)
    return values


def kernel_divide(G, target, r, rule, oversample=2, fit_tol=1e-6, max_nodes=1 << 16,
                  generic=False):
    """Cofactors Q_j from the integral division formula (generators without common zeros).

    Returns a ``KernelDivision``.  ``sum F_j Q_j`` reproduces ``target`` up
    to quadrature error; each ``F_j Q_j`` has degree at most
    ``d_1 + ... + d_{mu+1} + r``.

    z' is sampled at K-th roots of unity (K = oversample * (D + 1) for n = 1,
    a (D+1) x (D+1) torus grid for n = 2).  ``generic=True`` keeps the eps~
    generators in the algebra and contracts them explicitly; it is slower and
    only meant as a cross-check.
    """
    n, m = G.n, G.m
    if m < 2:
        raise ValueError("the division formula needs m >= 2 generators")
    _check_rule(rule, n)
    if target.nvars != n:
        raise ValueError("target is in the wrong number of variables")
    if r < target.degree():
        raise ValueError(f"r = {r} is below deg target = {target.degree()}")
    B = division_degree_bound(G.degrees, n, r)
    degs = [B - d for d in G.degrees]
    K = (oversample if n == 1 else 1) * (max(degs) + 1)
    Z = _sample_grid(n, K)
    values = _cofactor_samples(G, target, r, rule, Z, max_nodes, generic)
    cofactors, residuals = [], []
    for j, D in enumerate(degs):
        monos = monomials_up_to(n, D)
        V = np.stack([np.prod(Z ** np.array(e), axis=1) for e in monos], axis=1)
        coef, *_ = np.linalg.lstsq(V, values[j], rcond=None)
        res = np.linalg.norm(V @ coef - values[j]) / max(np.linalg.norm(values[j]), 1e-300)
        if res > fit_tol:
            raise ValueError(f"cofactor {j + 1}: fit residual {res:.2e} above {fit_tol:g}")
        cofactors.append(NumericPolynomial(n, dict(zip(monos, coef))))
        residuals.append(float(res))
    return KernelDivision(cofactors, B, degs, residuals, Z)


def projection_distance(G, target, cofactors, budget):
    """Distance from numeric cofactors to the exact solution set at the given budget.

    The exact set is x_p + span(nullspace) of the Macaulay system; the
    distance is a complex least-squares residual in coefficient space.
    Returns ``inf`` if the exact system is infeasible.
    """
    system = build_macaulay(G, budget)
    out = solve(system.matrix, system.rhs(target))
    if not out.solved:
        return float("inf")
    q = np.array([cofactors[j].coeffs.get(kappa, 0j) for j, kappa in system.cols], dtype=complex)
    xp = np.array([float(v) for v in out.solution])
    N = nullspace_basis(system.matrix)
    diff = q - xp
    if not N:
        return float(np.linalg.norm(diff))
    B = np.array([[float(v) for v in vec] for vec in N]).T
    c, *_ = np.linalg.lstsq(B.astype(complex), diff, rcond=None)
    return float(np.linalg.norm(diff - B @ c))
