import numpy as np
import pytest

from idealcert.forms import (
    Algebra,
    epsilon_integral,
    exterior_product,
    kernel_algebra,
    omega,
    top_coefficient,
)


@pytest.fixture
def alg():
    return kernel_algebra(1, 2)


def test_odd_generator_squares_to_zero(alg):
    e = alg.gen("e1")
    assert not exterior_product(e, e).terms


def test_anticommutation(alg):
    a, b = alg.gen("e1"), alg.gen("es2")
    assert (a ^ b).terms == {k: -v for k, v in (b ^ a).terms.items()}


def test_associativity_with_arrays(alg):
    rng = np.random.default_rng(0)
    x = alg.gen("dz1", rng.normal(size=4)) + alg.gen("e1", 2.0)
    y = alg.gen("dzb1", rng.normal(size=4)) + alg.gen("es1", 1j)
    z = alg.gen("e2") + alg.scalar(3.0)
    lhs, rhs = (x ^ y) ^ z, x ^ (y ^ z)
    assert set(lhs.terms) == set(rhs.terms)
    for k in lhs.terms:
        np.testing.assert_allclose(lhs.terms[k], rhs.terms[k])


def test_epsilon_integral_of_full_power(alg):
    w = omega(alg)
    assert epsilon_integral(w.power(2) * 0.5).scalar_part() == pytest.approx(1.0)


def test_epsilon_integral_needs_all_pairs(alg):
    assert not epsilon_integral(alg.monomial(["es1", "e1"])).terms


def test_exp_matches_power_series(alg):
    w = omega(alg)
    ex = w.exp()
    expected = alg.scalar(1.0) + w + w.power(2) * 0.5
    assert ex.terms == expected.terms


def test_contract_is_antiderivation(alg):
    a = alg.monomial(["dz1", "e1"])
    b = alg.monomial(["es1", "e2"])
    for name in ("e1", "e2"):
        lhs = (a ^ b).contract(name)
        rhs = (a.contract(name) ^ b) + (a ^ b.contract(name))
        assert lhs.terms == rhs.terms


def test_contract_signs():
    A = Algebra(["x", "y"])
    xy = A.monomial(["x", "y"])
    assert xy.contract("x").terms == {A.mask("y"): 1.0}
    assert xy.contract("y").terms == {A.mask("x"): -1.0}


def test_coefficient_and_top():
    A = kernel_algebra(2, 0, tilde=False)
    f = A.monomial(["dzb1", "dz1", "dz2", "dzb2"], 2.0)
    assert top_coefficient(f) == -2.0
    assert f.coefficient(["dz1", "dzb1", "dz2", "dzb2"]) == -2.0


def test_keep_filter(alg):
    x = alg.gen("e1") + alg.gen("e2")
    y = alg.gen("es1")
    kept = x.wedge(y, keep=lambda m: m & alg.mask("e1"))
    assert list(kept.terms) == [alg.mask("e1", "es1")]


def test_duplicate_names():
    with pytest.raises(ValueError):
        Algebra(["a", "a"])
