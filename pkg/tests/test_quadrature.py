import numpy as np
import pytest

from idealcert.quadrature import fs_density, fs_quadrature


def test_total_mass_p1():
    assert abs(fs_quadrature(1, 64).weights.sum() - 1) < 1e-10


def test_total_mass_p2():
    assert abs(fs_quadrature(2, 48).weights.sum() - 1) < 1e-8


def test_odd_moment_vanishes():
    rule = fs_quadrature(1, 64)
    assert abs(rule.integrate(lambda z: z[:, 0])) < 1e-10


def test_known_moment():
    # E|zeta|^2 / (1 + |zeta|^2) under the FS measure on P^1 is 1/2
    rule = fs_quadrature(1, 32)
    val = rule.integrate(lambda z: np.abs(z[:, 0]) ** 2 / (1 + np.abs(z[:, 0]) ** 2))
    assert val == pytest.approx(0.5, abs=1e-12)


def test_lebesgue_weights_match_density():
    rule = fs_quadrature(2, 6)
    np.testing.assert_allclose(rule.lebesgue_weights * fs_density(rule.nodes), rule.weights)


def test_chunks_cover_rule():
    rule = fs_quadrature(2, 8)
    parts = list(rule.chunks(max_nodes=100))
    assert len(parts) > 1
    assert sum(len(p[0]) for p in parts) == rule.size
    assert sum(p[1].sum() for p in parts) == pytest.approx(1.0)


def test_nodes_finite_and_weights_positive():
    rule = fs_quadrature(2, 10)
    assert np.all(np.isfinite(rule.nodes)) and np.all(rule.weights > 0)


@pytest.mark.parametrize("n", [0, 3])
def test_unsupported_dimension(n):
    with pytest.raises(ValueError):
        fs_quadrature(n, 8)


def test_bad_resolution():
    with pytest.raises(ValueError):
        fs_quadrature(1, 0)
