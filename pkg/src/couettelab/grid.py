"""Chebyshev collocation infrastructure on [-1, 1].

Gauss-Lobatto nodes y_j = cos(j pi / N) (descending, y_0 = 1, y_N = -1),
Clenshaw-Curtis quadrature weights, and dense differentiation matrices for
the first, second and fourth derivative.
"""

import math
from dataclasses import dataclass, field

import numpy as np

#: Hard resolution cap.  Dense factorizations above this order are refused.
N_MAX = 1024


def cheb_nodes(n):
    """Chebyshev-Lobatto nodes cos(j pi / n), j = 0..n, descending."""
    return np.cos(np.pi * np.arange(n + 1) / n)


def clenshaw_curtis_weights(n):
    """Clenshaw-Curtis quadrature weights on the n+1 Lobatto nodes.

    Direct O(n^2) cosine-sum formula; exact for polynomials of degree <= n.
    """
    theta = np.pi * np.arange(1, n) / n
    w = np.zeros(n + 1)
    v = np.ones(n - 1)
    if n % 2 == 0:
        w[0] = w[n] = 1.0 / (n**2 - 1)
        for m in range(1, n // 2):
            v -= 2.0 * np.cos(2 * m * theta) / (4 * m**2 - 1)
        v -= np.cos(n * theta) / (n**2 - 1)
    else:
        w[0] = w[n] = 1.0 / n**2
        for m in range(1, (n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * m * theta) / (4 * m**2 - 1)
    w[1:n] = 2.0 * v / n
    return w


@dataclass(frozen=True)
class ChebGrid:
    """Collocation grid: order, nodes and quadrature weights.

    Immutable after construction; safe to share across workers.
    """

    order: int
    nodes: np.ndarray = field(repr=False)
    quad_weights: np.ndarray = field(repr=False)

    @property
    def n_points(self):
        return self.order + 1


def build_grid(n):
    """Build a ChebGrid of order n (n + 1 nodes).  Rejects n < 4."""
    if n < 4:
        raise ValueError(f"grid order must be >= 4, got {n}")
    if n > N_MAX:
        raise ValueError(f"grid order {n} exceeds the dense cap {N_MAX}")
    nodes = cheb_nodes(n)
    w = clenshaw_curtis_weights(n)
    g = ChebGrid(order=n, nodes=nodes, quad_weights=w)
    g.nodes.setflags(write=False)
    g.quad_weights.setflags(write=False)
    return g


def default_order(nu, k):
    """Default grid order for a solve at viscosity nu, wavenumber k.

    Resolves the wall-layer scale 1/L = (nu/|k|)^(1/3) with eight points:
    N = max(64, ceil(8 L)), refused above the dense cap.
    """
    bl = boundary_layer_scale(nu, k)
    n = max(64, math.ceil(8.0 * bl))
    if n > N_MAX:
        raise ValueError(
            f"required order {n} for nu={nu}, k={k} exceeds the cap {N_MAX}"
        )
    return n


def boundary_layer_scale(nu, k):
    """L = (|k|/nu)^(1/3); 1/L is the wall-layer width."""
    return (abs(k) / nu) ** (1.0 / 3.0)


def critical_layer_scale(nu, k):
    """delta = nu^(1/3) |k|^(-1/3), the critical-layer width (= 1/L)."""
    return (nu / abs(k)) ** (1.0 / 3.0)


def _cheb_d1(nodes):
    """First-derivative matrix on Lobatto nodes (Trefethen form)."""
    n = len(nodes) - 1
    c = np.ones(n + 1)
    c[0] = c[n] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    x = nodes.reshape(-1, 1)
    dx = x - x.T + np.eye(n + 1)
    d = np.outer(c, 1.0 / c) / dx
    # negative-sum trick: enforce zero row sums exactly
    np.fill_diagonal(d, 0.0)
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


def _negative_sum(d):
    out = d.copy()
    np.fill_diagonal(out, 0.0)
    np.fill_diagonal(out, -out.sum(axis=1))
    return out


@dataclass(frozen=True)
class DiffOps:
    """Dense differentiation matrices d1, d2, d4 on a ChebGrid."""

    d1: np.ndarray = field(repr=False)
    d2: np.ndarray = field(repr=False)
    d4: np.ndarray = field(repr=False)


def build_diff_ops(grid):
    """Differentiation matrices by repeated products of d1.

    The diagonal of each product is re-derived from the negative-sum trick
    so that constants differentiate to zero at round-off level.
    """
    d1 = _cheb_d1(grid.nodes)
    d2 = _negative_sum(d1 @ d1)
    d4 = _negative_sum(d2 @ d2)
    for m in (d1, d2, d4):
        m.setflags(write=False)
    return DiffOps(d1=d1, d2=d2, d4=d4)


def quadrature(grid, values):
    """Clenshaw-Curtis approximation of the integral of values over (-1, 1)."""
    values = np.asarray(values)
    if values.shape[-1] != grid.n_points:
        raise ValueError(
            f"expected {grid.n_points} nodal values, got {values.shape[-1]}"
        )
    return values @ grid.quad_weights


def l2_norm(grid, values):
    """L2 norm by quadrature of |values|^2."""
    return math.sqrt(abs(quadrature(grid, np.abs(np.asarray(values)) ** 2)))


def weighted_l2_norm(grid, values, weight):
    """L2 norm with a nonnegative nodal weight.

    Nodes where the weight is non-finite (singular weights at the walls)
    are dropped; the omitted sliver is integrable and below quadrature error
    for the weights used here.
    """
    weight = np.asarray(weight)
    mask = np.isfinite(weight)
    v = np.abs(np.asarray(values)[mask]) ** 2 * weight[mask]
    return math.sqrt(abs(np.sum(v * grid.quad_weights[mask])))


def l1_norm(grid, values):
    """L1 norm by quadrature of |values|."""
    return float(quadrature(grid, np.abs(np.asarray(values))))
