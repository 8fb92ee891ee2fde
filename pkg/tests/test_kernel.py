import random

import numpy as np
import pytest

from idealcert.kernel import (
    QuadratureDegeneracy,
    HeferDecomposition,
    assemble_u,
    bergman_reproduce,
    bergman_reproduce_forms,
    division_degree_bound,
    hefer_decompose,
    kernel_divide,
    nabla_f_scalar,
    projection_distance,
    verify_hefer,
)
from idealcert.forms import top_coefficient
from idealcert.kernel import _integrate_top, alpha_kernel
from idealcert.membership import GeneratorSystem
from idealcert.poly import Polynomial, parse
from idealcert.quadrature import fs_quadrature

from conftest import random_poly

W = GeneratorSystem.parse(["z1", "1 - z1"], 1)


def grid(n, count=20, seed=1):
    rng = np.random.default_rng(seed)
    return 0.7 * (rng.normal(size=(count, n)) + 1j * rng.normal(size=(count, n)))


class TestHefer:
    def test_examples(self):
        H = hefer_decompose(parse("z1*z2", 2))
        names = ["w1", "w2", "z1", "z2"]
        assert [h.to_string(names) for h in H.forms] == ["w2", "z1"]
        H = hefer_decompose(parse("z1^2", 1))
        assert H.forms[0].to_string(["w1", "z1"]) == "w1 + z1"
        assert all(h.is_zero() for h in hefer_decompose(parse("7", 3)).forms)

    def test_random(self):
        rng = random.Random(11)
        for _ in range(40):
            n = rng.randint(1, 3)
            F = random_poly(rng, n, 4, 5)
            assert verify_hefer(F, hefer_decompose(F))

    def test_tampered(self):
        F = parse("z1^2*z2 - z2", 2)
        H = hefer_decompose(F)
        bad = HeferDecomposition((H.forms[0] + 1,) + H.forms[1:])
        assert not verify_hefer(F, bad)

    def test_degree_bound_enforced(self):
        # h1 + (w2 - z2) g, h2 - (w1 - z1) g keeps the identity but raises the degree
        F = parse("z1*z2", 2)
        H = hefer_decompose(F)
        g = Polynomial(4, {(1, 1, 0, 0): 1})
        w1, w2, z1, z2 = (Polynomial.variable(i, 4) for i in range(4))
        shifted = HeferDecomposition((H.forms[0] + (w2 - z2) * g, H.forms[1] - (w1 - z1) * g))
        assert not verify_hefer(F, shifted)
        assert verify_hefer(F, shifted, degree=4)

    def test_zero(self):
        Z = Polynomial(2)
        assert verify_hefer(Z, HeferDecomposition((Polynomial(4), Polynomial(4))))


class TestBergman:
    def test_constant(self):
        rule = fs_quadrature(1, 16)
        assert abs(bergman_reproduce(parse("1", 1), 0, [0.4 - 2j], rule) - 1) < 1e-10

    def test_examples(self):
        rule = fs_quadrature(1, 64)
        assert abs(bergman_reproduce(parse("z1", 1), 1, [0.5], rule) - 0.5) < 1e-8
        assert abs(bergman_reproduce(parse("z1^2", 1), 2, [0.3], rule) - 0.09) < 1e-8

    def test_form_engine_agrees(self):
        rule = fs_quadrature(2, 10)
        T = parse("z1*z2 - 2*z2 + 1", 2)
        z = [0.3 + 0.1j, -0.2j]
        a = bergman_reproduce(T, 2, z, rule)
        b = bergman_reproduce_forms(T, 2, z, rule)
        assert abs(a - b) < 1e-12

    def test_fs_form_has_unit_mass(self):
        for n in (1, 2):
            rule = fs_quadrature(n, 24)
            total = 0
            for nodes, _, leb in rule.chunks():
                a1n = alpha_kernel(np.zeros(n), nodes).alpha1.power(n)
                total += _integrate_top(top_coefficient(a1n), leb, n)
            assert abs(total - 1) < 1e-10

    def test_alpha0_matches_homogeneous_formula(self):
        # chart value equals z.conj(Z)/|Z|^2 for any representative Z = lam*(1, zeta),
        # once the 1/lam weight of that representative is removed
        rng = np.random.default_rng(3)
        zeta = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
        z = np.array([0.3 - 0.1j, 2.0])
        a0 = alpha_kernel(z, zeta).alpha0
        lam = 1.7 - 0.4j
        Z = np.concatenate([[1.0], z])
        W = lam * np.concatenate([np.ones((5, 1)), zeta], axis=1)
        direct = (W.conj() @ Z) / np.sum(np.abs(W) ** 2, axis=1)
        np.testing.assert_allclose(a0, direct * lam, rtol=1e-12)

    def test_linear_and_zero(self):
        rule = fs_quadrature(1, 24)
        z = [0.2 - 0.7j]
        p, q = parse("z1^2 - 1", 1), parse("3*z1", 1)
        va, vb = bergman_reproduce(p, 2, z, rule), bergman_reproduce(q, 2, z, rule)
        vab = bergman_reproduce(p * 2 + q * (-5), 2, z, rule)
        assert abs(vab - (2 * va - 5 * vb)) < 1e-13
        assert bergman_reproduce(Polynomial(1), 1, z, rule) == 0

    def test_spectral_in_resolution(self):
        T = parse("z1^3 - z1 + 2", 1)
        z = [0.8 + 0.4j]
        errs = [abs(bergman_reproduce(T, 3, z, fs_quadrature(1, q)) - T.evaluate(z))
                for q in (4, 8, 16)]
        assert errs[1] <= errs[0] / 2 + 1e-15 and errs[2] <= errs[1] / 2 + 1e-15

    def test_errors(self):
        with pytest.raises(ValueError):
            bergman_reproduce(parse("z1^2", 1), 1, [0], fs_quadrature(1, 8))
        with pytest.raises(ValueError):
            bergman_reproduce(parse("z1", 1), 1, [0], fs_quadrature(2, 4))


class TestAssembleU:
    def test_single_generator(self):
        G = GeneratorSystem.parse(["1"], 1, degrees=[1])
        pts = grid(1, 10)
        U = assemble_u(G, pts)
        np.testing.assert_allclose(nabla_f_scalar(G, U, pts), 1, atol=1e-12)

    def test_pair_at_point(self):
        U = assemble_u(W, np.array([0.3]))
        assert abs(nabla_f_scalar(W, U, np.array([0.3]))[0] - 1) < 1e-12

    def test_identity_at_nodes(self):
        G = GeneratorSystem.parse(["z1", "z2", "1 - z1 - z2"], 2)
        nodes = fs_quadrature(2, 6).nodes
        U = assemble_u(G, nodes)
        assert np.max(np.abs(nabla_f_scalar(G, U, nodes) - 1)) < 1e-12

    def test_common_zero_raises(self):
        G = GeneratorSystem.parse(["z1", "z1^2"], 1)
        with pytest.raises(QuadratureDegeneracy):
            assemble_u(G, np.array([[0.0], [1.0]]))


class TestKernelDivide:
    @pytest.mark.parametrize("target, r", [("1", 0), ("z1", 1)])
    def test_pair(self, target, r):
        T = parse(target, 1)
        kd = kernel_divide(W, T, r, fs_quadrature(1, 64))
        assert kd.residual(W, T, grid(1)) < 1e-4
        assert kd.degree_bound == 2 + r
        for F, d, Q in zip(W.polys, W.degrees, kd.cofactors):
            assert Q.degree(tol=1e-9) + d <= kd.degree_bound
        assert projection_distance(W, T, kd.cofactors, kd.degree_bound) < 1e-3

    def test_three_generators_p1(self):
        G = GeneratorSystem.parse(["z1^2 + 1", "z1^2 - 2", "z1"], 1)
        T = parse("z1^2 - z1", 1)
        kd = kernel_divide(G, T, 2, fs_quadrature(1, 48))
        assert kd.residual(G, T, grid(1)) < 1e-8
        assert projection_distance(G, T, kd.cofactors, kd.degree_bound) < 1e-8

    def test_plane(self):
        G = GeneratorSystem.parse(["z1", "z2", "1 - z1 - z2"], 2)
        T = parse("1", 2)
        kd = kernel_divide(G, T, 0, fs_quadrature(2, 24))
        assert kd.residual(G, T, grid(2)) < 1e-5
        assert projection_distance(G, T, kd.cofactors, kd.degree_bound) < 1e-5

    def test_generic_route_agrees(self):
        G = GeneratorSystem.parse(["z1", "z2", "1 - z1 - z2"], 2)
        T = parse("z1 + 2", 2)
        rule = fs_quadrature(2, 4)
        a = kernel_divide(G, T, 1, rule)
        b = kernel_divide(G, T, 1, rule, generic=True)
        for Qa, Qb in zip(a.cofactors, b.cofactors):
            diff = max(abs(Qa.coeffs[k] - Qb.coeffs[k]) for k in Qa.coeffs)
            assert diff < 1e-12

    def test_degree_bound(self):
        assert division_degree_bound([1, 1], 1, 0) == 2
        assert division_degree_bound([1, 3, 2, 2], 2, 1) == 3 + 2 + 2 + 1
        assert division_degree_bound([4, 1], 5, 0) == 5

    def test_preconditions(self):
        rule = fs_quadrature(1, 8)
        with pytest.raises(ValueError):
            kernel_divide(GeneratorSystem.parse(["z1"], 1), parse("z1", 1), 1, rule)
        with pytest.raises(ValueError):
            kernel_divide(W, parse("z1^2", 1), 1, rule)
        # common zero at 0: no node sits on it, but the samples stop being polynomial
        with pytest.raises(ValueError, match="fit residual"):
            kernel_divide(GeneratorSystem.parse(["z1", "z1^2"], 1), parse("z1", 1), 2,
                          fs_quadrature(1, 9))
