"""Legendre-Gauss-Lobatto collocation operators.

Provides the 1D node set, quadrature weights and the diagonal-norm
summation-by-parts matrices (M, D, Q, B) that the flux-differencing
kernels are built on.  Everything is plain dense numpy; degrees are
small (<= 15) so there is no point in being clever.
"""

from dataclasses import dataclass, field

import numpy as np

MAX_DEGREE = 15


class OperatorError(ValueError):
    pass


def _legendre_and_derivative(n, x):
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    if n == 1:
        p1, p0 = x.copy(), np.ones_like(x)
    # derivative from the standard identity, regular away from |x| = 1
    dp = n * (x * p1 - p0) / (x * x - 1.0 + 1e-300)
    return p1, dp


def gauss_lobatto(n, tol=1e-15, max_iter=50):
    """Gauss-Lobatto nodes and weights for polynomial degree ``n``.

    Returns ``n + 1`` ascending nodes in [-1, 1] (endpoints included) and
    weights exact for polynomials of degree <= 2n - 1.  Interior nodes are
    the roots of P_n', found by Newton iteration from Chebyshev-Lobatto
    initial guesses.
    """
    if n < 1:
        raise OperatorError("degree must be >= 1 (subcell scheme needs >= 2 nodes)")
    if n > MAX_DEGREE:
        raise OperatorError(f"degree {n} > {MAX_DEGREE} not supported")
    nodes = np.empty(n + 1)
    nodes[0], nodes[-1] = -1.0, 1.0
    if n >= 2:
        x = -np.cos(np.pi * np.arange(1, n) / n)
        for _ in range(max_iter):
            pn, dpn = _legendre_and_derivative(n, x)
            # P_n'' from the Legendre ODE
            d2pn = (2.0 * x * dpn - n * (n + 1) * pn) / (1.0 - x * x)
            dx = dpn / d2pn
            x = x - dx
            if np.max(np.abs(dx)) < tol:
                break
        nodes[1:-1] = x
    pn, _ = _legendre_and_derivative(n, nodes)
    weights = 2.0 / (n * (n + 1) * pn**2)
    return nodes, weights


def barycentric_weights(nodes):
    nodes = np.asarray(nodes, dtype=float)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.min(np.abs(diff)) == 0.0:
        raise OperatorError("duplicate interpolation nodes")
    return 1.0 / np.prod(diff, axis=1)


def derivative_matrix(nodes):
    """Polynomial derivative matrix D_ij = l_j'(x_i), barycentric form.

    Rows sum to zero (constants are annihilated exactly up to round-off).
    """
    nodes = np.asarray(nodes, dtype=float)
    w = barycentric_weights(nodes)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    d = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -np.sum(d, axis=1))
    return d


def lagrange_eval(nodes, values, x):
    """Evaluate the interpolating polynomial at scalar ``x`` (barycentric)."""
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    w = barycentric_weights(nodes)
    dx = x - nodes
    hit = np.abs(dx) < 1e-14 * (1.0 + np.abs(x))
    if np.any(hit):
        return float(values[np.argmax(hit)])
    c = w / dx
    return float(np.dot(c, values) / np.sum(c))


def interpolation_matrix(src_nodes, dst_nodes):
    """Matrix mapping nodal values on ``src_nodes`` to ``dst_nodes``.

    Coincident nodes get exact cardinal rows so that shared mesh points
    interpolate bitwise-identically.
    """
    src = np.asarray(src_nodes, dtype=float)
    dst = np.asarray(dst_nodes, dtype=float)
    w = barycentric_weights(src)
    mat = np.zeros((dst.size, src.size))
    for i, x in enumerate(dst):
        dx = x - src
        hit = np.abs(dx) < 1e-14 * (1.0 + np.abs(x))
        if np.any(hit):
            mat[i, np.argmax(hit)] = 1.0
        else:
            c = w / dx
            mat[i] = c / np.sum(c)
    return mat


def chebyshev_lobatto(n):
    """Chebyshev-Lobatto points, ascending, endpoints included."""
    if n < 1:
        raise OperatorError("geometry degree must be >= 1")
    return -np.cos(np.pi * np.arange(n + 1) / n)


def legendre_vandermonde(nodes):
    """V_ij = P_j(x_i) for the (non-normalized) Legendre basis."""
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    v = np.empty((n, n))
    for j in range(n):
        v[:, j], _ = _legendre_and_derivative(j, nodes)
    return v


@dataclass(frozen=True)
class SbpOperator:
    """Diagonal-norm SBP operator on Gauss-Lobatto nodes of degree N."""

    degree: int
    nodes: np.ndarray
    weights: np.ndarray
    D: np.ndarray
    Q: np.ndarray
    B: np.ndarray
    # modal transform for the blending indicator
    inv_vandermonde: np.ndarray = field(repr=False, default=None)

    @property
    def n_nodes(self):
        return self.degree + 1

    @property
    def mass(self):
        return np.diag(self.weights)


def build_sbp(n):
    """Assemble the SBP operator set for degree ``n``."""
    nodes, weights = gauss_lobatto(n)
    d = derivative_matrix(nodes)
    q = weights[:, None] * d
    b = np.zeros((n + 1, n + 1))
    b[0, 0], b[-1, -1] = -1.0, 1.0
    vinv = np.linalg.inv(legendre_vandermonde(nodes))
    return SbpOperator(degree=n, nodes=nodes, weights=weights, D=d, Q=q, B=b,
                       inv_vandermonde=vinv)
