import json
import random
from fractions import Fraction

import pytest

from idealcert.membership import (
    AutoSatisfied,
    DivisionCertificate,
    GeneratorSystem,
    Infeasible,
    KoszulTuple,
    MinimalR,
    bezout,
    build_macaulay,
    certificate_from_json,
    certificate_to_json,
    divide,
    koszul_differential,
    koszul_divide,
    noll_threshold,
    power_divide,
    skolk_oppo_budget,
    verify,
)
from idealcert.poly import Polynomial, parse

from conftest import random_poly


def system(texts, n, degrees=None):
    return GeneratorSystem.parse(texts, n, degrees)


SQUARES = system(["z1^2", "z2^2"], 2)


class TestMacaulay:
    def test_single_generator(self):
        S = build_macaulay(system(["z1"], 1), 1)
        assert S.matrix.to_rows() == [[0], [1]]
        assert S.rows == [(0,), (1,)]
        assert S.cols == [(0, (0,))]

    def test_unit_columns(self):
        S = build_macaulay(SQUARES, 2)
        assert (S.matrix.rows, S.matrix.cols) == (6, 2)
        for c in range(2):
            col = [S.matrix[i, c] for i in range(6)]
            assert sorted(col) == [0, 0, 0, 0, 0, 1]

    def test_sizes(self):
        S = build_macaulay(SQUARES, 4)
        assert (S.matrix.rows, S.matrix.cols) == (15, 12)

    def test_declared_degree_shrinks_columns(self):
        G = system(["z1", "z2"], 2, degrees=[2, 1])
        S = build_macaulay(G, 2)
        assert [c for c in S.cols if c[0] == 0] == [(0, (0, 0))]


class TestDivide:
    def test_squares_feasible(self):
        cert = divide(SQUARES, parse("(z1+z2)^4", 2), 4)
        assert cert and cert.verified
        assert cert.cofactors[0] * parse("z1^2", 2) + cert.cofactors[1] * parse("z2^2", 2) \
            == parse("(z1+z2)^4", 2)

    def test_squares_infeasible_with_witness(self):
        out = divide(SQUARES, parse("(z1+z2)^2", 2), 8)
        assert isinstance(out, Infeasible) and not out
        assert out.witness == (1, 1)

    def test_generator_itself(self):
        G = system(["z1^2 - z2", "z1*z2 + 3"], 2)
        cert = divide(G, G.polys[0], 2)
        assert cert.cofactors == [Polynomial.constant(1, 2), Polynomial(2)]

    def test_zero_target(self):
        cert = divide(SQUARES, Polynomial(2), 0)
        assert cert.verified and all(Q.is_zero() for Q in cert.cofactors)

    def test_budget_below_degree(self):
        with pytest.raises(ValueError):
            divide(SQUARES, parse("z1^3", 2), 2)

    def test_wrong_ring(self):
        with pytest.raises(ValueError):
            divide(SQUARES, parse("z1", 3), 2)


class TestBezout:
    def test_linear_forms(self):
        cert = bezout(system(["z1", "z2", "1-z1-z2"], 2), 1)
        assert [str(Q) for Q in cert.cofactors] == ["1", "1", "1"]

    def test_squares_n1(self):
        G = system(["z1^2", "(1+z1)^2"], 1)
        cert = bezout(G, 3)
        assert cert.verified and cert.max_deg_fq(G) == 3
        assert not bezout(G, 2)

    def test_squares_n2(self):
        assert bezout(system(["z1^2", "z2^2", "(1-z1-z2)^2"], 2), 4).verified


class TestPowerDivide:
    def test_squares_needs_square(self):
        nu, cert = power_divide(SQUARES, parse("(z1+z2)^2", 2), 2, lambda nu: 2 * nu)
        assert nu == 2 and cert.verified and cert.nu == 2

    def test_generator_is_nu_one(self):
        nu, cert = power_divide(SQUARES, parse("z1^2", 2), 3, lambda nu: 2 * nu)
        assert nu == 1

    def test_never(self):
        out = power_divide(system(["z1"], 2), parse("z2", 2), 3, lambda nu: 3 * nu)
        assert isinstance(out, Infeasible)

    def test_small_budget_counts_as_infeasible(self):
        out = power_divide(SQUARES, parse("(z1+z2)^2", 2), 2, lambda nu: nu)
        assert isinstance(out, Infeasible)


class TestKoszul:
    def test_ell_zero_matches_divide(self):
        G = system(["z1^2", "z2^2"], 2)
        for text, r in [("(z1+z2)^4", 4), ("(z1+z2)^2", 3)]:
            phi = KoszulTuple(0, {(): parse(text, 2)}, r)
            assert bool(koszul_divide(G, phi)) == bool(divide(G, parse(text, 2), r))

    def test_koszul_relation(self):
        G = system(["z1", "z2"], 2)
        phi = KoszulTuple(1, {(0,): parse("-z2", 2), (1,): parse("z1", 2)}, 2)
        psi = koszul_divide(G, phi)
        assert psi.components == {(0, 1): Polynomial.constant(1, 2)}
        assert koszul_differential(G, psi).components == phi.components

    def test_not_a_cycle(self):
        G = system(["z1", "z2"], 2)
        phi = KoszulTuple(1, {(0,): Polynomial.constant(1, 2)}, 1)
        assert isinstance(koszul_divide(G, phi), Infeasible)

    def test_differential_squares_to_zero(self):
        G = system(["z1", "z2 + 1", "z1*z2"], 2)
        psi = KoszulTuple(3, {(0, 1, 2): parse("z1 + 2", 2)}, 6)
        twice = koszul_differential(G, koszul_differential(G, psi))
        assert all(P.is_zero() for P in twice.components.values())

    def test_bad_index(self):
        G = system(["z1", "z2"], 2)
        with pytest.raises(ValueError):
            koszul_divide(G, KoszulTuple(1, {(1, 0): Polynomial.constant(1, 2)}, 3))


class TestVerify:
    def test_tamper(self):
        target = parse("(z1+z2)^4", 2)
        cert = divide(SQUARES, target, 4)
        assert verify(SQUARES, target, cert)
        bad = DivisionCertificate([cert.cofactors[0] + 1, cert.cofactors[1]], 1, 4)
        assert not verify(SQUARES, target, bad)

    def test_degree_breach(self):
        G = system(["z1", "z2"], 2)
        target = parse("z1", 2)
        # z1 * (1 + z2) - z2 * z1 = z1 with deg F_1 Q_1 = 2 > r = 1
        cert = DivisionCertificate([parse("1 + z2", 2), parse("-z1", 2)], 1, 1)
        assert not verify(G, target, cert)
        cert.r = 2
        assert verify(G, target, cert)

    def test_wrong_length(self):
        assert not verify(SQUARES, Polynomial(2), DivisionCertificate([Polynomial(2)], 1, 2))


class TestThresholds:
    def test_threshold_values(self):
        assert noll_threshold([1, 1, 1], 2) == MinimalR(1)
        assert str(noll_threshold([1, 1, 1], 2)) == "minimal r = 1"
        assert isinstance(noll_threshold([2, 2], 2), AutoSatisfied)
        assert noll_threshold([3, 2, 2, 1], 2) == MinimalR(5)
        assert noll_threshold([3, 2, 2, 1], 1, ell=1) == MinimalR(6)
        assert isinstance(noll_threshold([3, 2, 2, 1], 2, ell=2), AutoSatisfied)

    def test_threshold_rejects_garbage(self):
        with pytest.raises(ValueError):
            noll_threshold([], 2)
        with pytest.raises(ValueError):
            noll_threshold([0, 1], 2)

    def test_power_budget(self):
        assert skolk_oppo_budget([2, 2], 2, 2, 2, "skolk") == (2, 4, True)
        assert skolk_oppo_budget([2, 2], 1, 2, 2, "oppo") == (1, 2, False)
        assert skolk_oppo_budget([5, 5], 3, 2, 1)[2]

    def test_threshold_is_sufficient_on_a_fixture(self):
        G = system(["z1", "z2", "1-z1-z2", "z1*z2"], 2)
        r = noll_threshold(G.degrees, G.n).r
        assert bezout(G, r)


class TestProperties:
    def test_monotone_in_r(self):
        rng = random.Random(3)
        for _ in range(15):
            G = GeneratorSystem(2, [random_poly(rng, 2, 2, 3) for _ in range(2)])
            if any(F.is_zero() for F in G.polys):
                continue
            target = random_poly(rng, 2, 2, 3)
            for r in range(max(target.degree(), 0), 4):
                if divide(G, target, r):
                    assert divide(G, target, r + 1) and divide(G, target, r + 2)

    def test_scaling(self):
        G = system(["z1^2 - z2", "z2^2 + z1"], 2)
        target = G.polys[0] * parse("z1 + 1", 2) + G.polys[1] * parse("z2", 2)
        c = [Fraction(3), Fraction(-1, 2)]
        H = G.scaled(c)
        for r in range(3, 6):
            a, b = divide(G, target, r), divide(H, target, r)
            assert bool(a) == bool(b) == (r >= 3)
            assert b.verified
            assert b.cofactors == [Q * (1 / x) for Q, x in zip(a.cofactors, c)]

    def test_permutation(self):
        G = system(["z1", "z2^2", "1 + z1*z2"], 2)
        H = G.permuted([2, 0, 1])
        for r in range(0, 4):
            a, b = bezout(G, r), bezout(H, r)
            assert bool(a) == bool(b)
            if b:
                assert verify(H, H.one(), b)

    def test_inconsistent_means_rank_jump(self):
        from idealcert.linalg import ExactMatrix, rank
        G = system(["z1^2", "z1*z2 - 1"], 2)
        target = parse("z2", 2)
        for r in range(1, 4):
            S = build_macaulay(G, r)
            b = S.rhs(target)
            aug = ExactMatrix(S.matrix.rows, S.matrix.cols + 1,
                              {**S.matrix.nonzeros(),
                               **{(i, S.matrix.cols): v for i, v in enumerate(b) if v}})
            assert (rank(aug) > rank(S.matrix)) == (not divide(G, target, r))


class TestJSON:
    def test_round_trip(self):
        target = parse("(z1+z2)^4", 2)
        cert = divide(SQUARES, target, 4)
        doc = certificate_to_json(SQUARES, target, cert)
        assert set(doc) == {"n", "generators", "declared_degrees", "target", "nu", "r",
                            "cofactors", "verified", "max_deg_fq"}
        G, t, c = certificate_from_json(json.dumps(doc))
        assert verify(G, t, c) and t == target and G.polys == SQUARES.polys

    def test_missing_key(self):
        doc = certificate_to_json(SQUARES, Polynomial(2), divide(SQUARES, Polynomial(2), 2))
        del doc["r"]
        with pytest.raises(ValueError):
            certificate_from_json(doc)

    def test_wrong_type(self):
        doc = certificate_to_json(SQUARES, Polynomial(2), divide(SQUARES, Polynomial(2), 2))
        doc["nu"] = True
        with pytest.raises(ValueError):
            certificate_from_json(doc)
