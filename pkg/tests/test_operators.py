import numpy as np
import pytest

from hybriddg.operators import (OperatorError, build_sbp, chebyshev_lobatto,
                                gauss_lobatto, interpolation_matrix,
                                lagrange_eval, legendre_vandermonde)


def test_gauss_lobatto_known_nodes():
    nodes, weights = gauss_lobatto(1)
    assert np.allclose(nodes, [-1.0, 1.0])
    assert np.allclose(weights, [1.0, 1.0])

    nodes, weights = gauss_lobatto(2)
    assert np.allclose(nodes, [-1.0, 0.0, 1.0])
    assert np.allclose(weights, [1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0])

    nodes, weights = gauss_lobatto(3)
    assert np.allclose(nodes, [-1.0, -np.sqrt(0.2), np.sqrt(0.2), 1.0])
    assert np.allclose(weights, [1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0])


@pytest.mark.parametrize("degree", range(1, 11))
def test_sbp_property(degree):
    sbp = build_sbp(degree)
    assert np.max(np.abs(sbp.Q + sbp.Q.T - sbp.B)) <= 1e-13


@pytest.mark.parametrize("degree", range(1, 11))
def test_quadrature_exactness(degree):
    # Gauss-Lobatto is exact for polynomials up to degree 2N - 1
    sbp = build_sbp(degree)
    for k in range(2 * degree):
        exact = 2.0 / (k + 1.0) if k % 2 == 0 else 0.0
        assert abs(np.dot(sbp.weights, sbp.nodes ** k) - exact) <= 1e-13


@pytest.mark.parametrize("degree", range(1, 11))
def test_derivative_matrix_exact_on_polynomials(degree):
    sbp = build_sbp(degree)
    for k in range(degree + 1):
        df = sbp.D @ sbp.nodes ** k
        exact = k * sbp.nodes ** max(k - 1, 0) if k > 0 else 0.0 * sbp.nodes
        assert np.max(np.abs(df - exact)) < 1e-11


def test_weights_sum_to_interval_length():
    for degree in range(1, 11):
        assert abs(np.sum(build_sbp(degree).weights) - 2.0) < 1e-14


def test_degree_cap():
    build_sbp(15)
    with pytest.raises(OperatorError):
        build_sbp(16)
    with pytest.raises(OperatorError):
        build_sbp(0)


def test_interpolation_exact_on_coincident_nodes():
    # cardinal rows must be exact unit vectors so shared nodes stay
    # bitwise identical after interpolation
    src = chebyshev_lobatto(3)
    dst = np.concatenate([src, [0.123]])
    t = interpolation_matrix(src, dst)
    assert np.array_equal(t[:4], np.eye(4))


def test_interpolation_reproduces_polynomials():
    src = chebyshev_lobatto(4)
    dst = np.linspace(-1.0, 1.0, 17)
    t = interpolation_matrix(src, dst)
    for k in range(5):
        assert np.max(np.abs(t @ src ** k - dst ** k)) < 1e-13


def test_lagrange_eval_matches_matrix():
    src = gauss_lobatto(4)[0]
    vals = np.sin(src)
    pts = np.array([-0.9, -0.3, 0.441, 0.99])
    direct = np.array([lagrange_eval(src, vals, x) for x in pts])
    via_matrix = interpolation_matrix(src, pts) @ vals
    assert np.allclose(direct, via_matrix, atol=1e-14)


def test_vandermonde_inverse():
    sbp = build_sbp(5)
    v = legendre_vandermonde(sbp.nodes)
    assert np.max(np.abs(v @ sbp.inv_vandermonde - np.eye(6))) < 1e-12
