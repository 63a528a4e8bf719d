import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from couettelab.grid import (N_MAX, build_diff_ops, build_grid, cheb_nodes,
                             default_order, l2_norm, quadrature,
                             weighted_l2_norm)

from oracles import exp_quadrature_exact


def test_nodes_closed_forms():
    assert np.allclose(cheb_nodes(2), [1.0, 0.0, -1.0], atol=1e-15)
    g = build_grid(4)
    assert g.nodes[0] == 1.0
    assert g.nodes[-1] == -1.0
    assert abs(g.nodes[1] - np.sqrt(2) / 2) < 1e-15
    assert np.all(np.diff(g.nodes) < 0)


def test_build_grid_rejects_small_and_huge():
    with pytest.raises(ValueError):
        build_grid(2)
    with pytest.raises(ValueError):
        build_grid(N_MAX + 1)


@pytest.mark.parametrize("n", [4, 16, 33, 64, 257])
def test_quadrature_weights(n):
    g = build_grid(n)
    assert np.all(g.quad_weights > 0)
    assert abs(g.quad_weights.sum() - 2.0) < 1e-13


def test_quadrature_examples():
    g = build_grid(32)
    assert abs(quadrature(g, np.ones(33)) - 2.0) < 1e-14
    assert abs(quadrature(g, g.nodes)) < 1e-15
    assert abs(quadrature(g, np.exp(2 * g.nodes)) - exp_quadrature_exact()) < 1e-12


def test_quadrature_length_mismatch():
    g = build_grid(8)
    with pytest.raises(ValueError):
        quadrature(g, np.ones(8))


def test_diff_ops_closed_forms():
    g = build_grid(24)
    ops = build_diff_ops(g)
    y = g.nodes
    assert np.max(np.abs(ops.d1 @ y - 1.0)) < 1e-11
    assert np.max(np.abs(ops.d2 @ y**2 - 2.0)) < 1e-9
    assert np.max(np.abs(ops.d4 @ y**4 - 24.0)) < 1e-6
    # constants differentiate to zero at round-off (negative-sum trick)
    n2 = g.order**2
    assert np.max(np.abs(ops.d1 @ np.ones_like(y))) < 1e-10 * n2
    # d2 consistent with d1 . d1
    d11 = ops.d1 @ ops.d1
    assert (np.linalg.norm(ops.d2 - d11) / np.linalg.norm(d11)) < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=8))
def test_diff_exact_on_polynomials(degree, seed):
    g = build_grid(16)
    ops = build_diff_ops(g)
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(degree + 1)
    p = np.polynomial.Polynomial(coeffs)
    vals = p(g.nodes)
    assert np.max(np.abs(ops.d1 @ vals - p.deriv(1)(g.nodes))) < 1e-8
    assert np.max(np.abs(ops.d2 @ vals - p.deriv(2)(g.nodes))) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=6))
def test_quadrature_exact_on_polynomials(da, db):
    # combined degree <= N: quadrature and the duality identity are exact
    g = build_grid(20)
    ops = build_diff_ops(g)
    rng = np.random.default_rng(da * 7 + db)
    f = np.polynomial.Polynomial(rng.standard_normal(da + 1))
    h = np.polynomial.Polynomial(rng.standard_normal(db + 1))
    exact = (f * h).integ()(1.0) - (f * h).integ()(-1.0)
    assert abs(quadrature(g, f(g.nodes) * h(g.nodes)) - exact) < 1e-12
    lhs = quadrature(g, (ops.d1 @ f(g.nodes)) * h(g.nodes)) \
        + quadrature(g, f(g.nodes) * (ops.d1 @ h(g.nodes)))
    boundary = f(1.0) * h(1.0) - f(-1.0) * h(-1.0)
    assert abs(lhs - boundary) < 1e-10


def test_default_order_rule():
    assert default_order(1e-3, 1) == 80
    assert default_order(1.0, 1) == 64
    with pytest.raises(ValueError):
        default_order(1e-7, 8)  # needs N > 1024


def test_weighted_norm_monotone_in_weight():
    g = build_grid(48)
    rng = np.random.default_rng(3)
    f = rng.standard_normal(49) + 1j * rng.standard_normal(49)
    w = rng.uniform(0, 1, 49)
    assert weighted_l2_norm(g, f, w) <= l2_norm(g, f) + 1e-12
