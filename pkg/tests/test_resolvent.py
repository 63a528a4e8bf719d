import math

import numpy as np
import pytest
import scipy.linalg as sla

from couettelab.grid import (build_diff_ops, build_grid, default_order,
                             l2_norm, quadrature)
from couettelab import resolvent as R

from oracles import c1_sinh_closed_form


@pytest.fixture(scope="module")
def setup64():
    g = build_grid(64)
    return g, build_diff_ops(g)


def mkgrid(nu, k):
    g = build_grid(default_order(nu, k))
    return g, build_diff_ops(g)


def test_case_validation():
    with pytest.raises(ValueError):
        R.ResolventCase(nu=-1.0, k=1)
    with pytest.raises(ValueError):
        R.ResolventCase(nu=1e-3, k=0)
    with pytest.raises(ValueError):
        R.ResolventCase(nu=1e-3, k=1, epsilon=0.5)
    with pytest.raises(ValueError):
        R.ResolventCase(nu=1e-3, k=1, bc="free")
    case = R.ResolventCase(nu=1e-3, k=2)
    assert abs(case.L - (2e3) ** (1 / 3)) < 1e-12
    assert abs(case.delta * case.L - 1.0) < 1e-12


def test_build_operator_constant_residual(setup64):
    # applied to a constant, the vorticity operator leaves nu k^2 + ik(y-lam)
    g, ops = setup64
    case = R.ResolventCase(nu=1e-2, k=3, lam=0.0)
    op = R.build_operator(case, g, ops)
    w = np.ones(g.n_points, dtype=complex)
    res = R.vorticity_matrix(case, g, ops) @ w
    expect = case.nu * case.k**2 + 1j * case.k * g.nodes
    assert np.max(np.abs(res - expect)) < 1e-8
    assert op.form == "vorticity" and op.bc_rows == (0, g.order)


def test_build_operator_symbol_check(setup64):
    # smooth eigenfunction-like input reproduces the analytic application
    g, ops = setup64
    case = R.ResolventCase(nu=1e-2, k=2, lam=0.3)
    f = np.sin(np.pi * (g.nodes + 1) / 2)
    got = R.vorticity_matrix(case, g, ops) @ f
    expect = (case.nu * (np.pi**2 / 4 + case.k**2)
              + 1j * case.k * (g.nodes - case.lam)) * f
    assert np.max(np.abs(got - expect)) < 1e-9 * np.max(np.abs(expect))


def test_build_operator_stream_form(setup64):
    g, ops = setup64
    case = R.ResolventCase(nu=1e-2, k=1, lam=0.0, bc="non_slip")
    op = R.build_operator(case, g, ops)
    assert op.form == "stream"
    # phi = (1-y^2)^2 satisfies all four boundary rows
    phi = (1 - g.nodes**2) ** 2
    res = op.matrix @ phi
    assert abs(res[0]) < 1e-10 and abs(res[-1]) < 1e-10
    assert abs(res[1]) < 1e-6 and abs(res[-2]) < 1e-6


def test_accretivity_identity(setup64):
    # Re< L_k f, f > = nu ||f'||^2 + nu k^2 ||f||^2 for f vanishing at walls
    g, ops = setup64
    nu, k = 3e-3, 2
    f = (1 - g.nodes**2) * np.exp(1j * g.nodes)
    lf = nu * (k**2 * f - ops.d2 @ f) + 1j * k * g.nodes * f
    lhs = quadrature(g, lf * np.conj(f)).real
    rhs = nu * l2_norm(g, ops.d1 @ f) ** 2 + nu * k**2 * l2_norm(g, f) ** 2
    assert abs(lhs - rhs) <= 1e-10 * abs(rhs)


def test_navier_zero_forcing_zero_solution(setup64):
    g, ops = setup64
    case = R.ResolventCase(nu=1e-3, k=1, lam=0.4)
    sol = R.solve_navier(case, R.direct_forcing(np.zeros(g.n_points)), g, ops)
    assert np.max(np.abs(sol.w)) == 0.0
    assert np.max(np.abs(sol.phi)) == 0.0


def test_navier_solution_invariants():
    nu, k = 1e-4, 1
    g, ops = mkgrid(nu, k)
    case = R.ResolventCase(nu=nu, k=k, lam=0.0)
    sol = R.solve_navier(case, R.direct_forcing(np.ones(g.n_points)), g, ops)
    assert abs(sol.w[0]) <= 1e-10 * np.abs(sol.w).max()
    assert abs(sol.w[-1]) <= 1e-10 * np.abs(sol.w).max()
    assert abs(sol.phi[0]) < 1e-12 and abs(sol.phi[-1]) < 1e-12
    # refinement stability of ||w||_2
    g2, ops2 = build_grid(2 * g.order), None
    ops2 = build_diff_ops(g2)
    sol2 = R.solve_navier(case, R.direct_forcing(np.ones(g2.n_points)), g2, ops2)
    assert abs(l2_norm(g, sol.w) - l2_norm(g2, sol2.w)) \
        <= 1e-8 * l2_norm(g2, sol2.w)
    # energy identity
    lhs = quadrature(g, np.ones(g.n_points) * np.conj(sol.w)).real
    rhs = nu * l2_norm(g, ops.d1 @ sol.w) ** 2 + nu * k**2 * l2_norm(g, sol.w) ** 2
    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


def test_navier_shift_consistency():
    nu, k = 1e-4, 1
    g, ops = mkgrid(nu, k)
    F = np.exp(1j * np.pi * g.nodes)
    shifted = R.solve_navier(R.ResolventCase(nu=nu, k=k, epsilon=0.02),
                             R.direct_forcing(F), g, ops)
    ftilde = F + R.ResolventCase(nu=nu, k=k, epsilon=0.02).shift * shifted.w
    plain = R.solve_navier(R.ResolventCase(nu=nu, k=k),
                           R.direct_forcing(ftilde), g, ops)
    assert l2_norm(g, shifted.w - plain.w) <= 1e-10 * l2_norm(g, shifted.w)


def test_uniqueness_smallest_singular_value():
    # real lam is never in the spectrum: weighted interior sigma_min stays
    # well above zero on sampled cases
    for nu, k, lam in [(1e-3, 1, 0.0), (1e-4, 2, 0.7), (3e-4, 1, -1.0)]:
        g, ops = mkgrid(nu, k)
        case = R.ResolventCase(nu=nu, k=k, lam=lam)
        a = R.vorticity_matrix(case, g, ops)[1:-1, 1:-1]
        sq = np.sqrt(g.quad_weights[1:-1])
        smin = sla.svdvals(a * (sq[:, None] / sq[None, :]))[-1]
        assert smin > 1e-10


def test_coefficients_trivial_and_closed_form():
    g = build_grid(96)
    assert R.coefficients(np.zeros(97), 1, g) == (0j, 0j)
    k = 1
    w_na = np.sinh(k * (g.nodes + 1)).astype(complex)
    c1, c2 = R.coefficients(w_na, k, g)
    assert abs(c1 - c1_sinh_closed_form(k)) < 1e-12
    # system consistency: e^k c1 - e^{-k} c2 = -int e^{ky} w_na
    mom = quadrature(g, np.exp(k * g.nodes) * w_na)
    assert abs(math.e**k * c1 - math.e**-k * c2 + mom) < 1e-10
    # even in k
    c1m, c2m = R.coefficients(w_na, -k, g)
    assert abs(c1 - c1m) < 1e-14 and abs(c2 - c2m) < 1e-14


def test_coefficients_reflection_antisymmetry():
    g = build_grid(96)
    k = 2
    rng = np.random.default_rng(0)
    w = np.polynomial.Polynomial(rng.standard_normal(6))(g.nodes).astype(complex)
    c1, c2 = R.coefficients(w, k, g)
    wr = w[::-1]  # y -> -y on the symmetric grid
    c1r, c2r = R.coefficients(wr, k, g)
    assert abs(c1r + c2) < 1e-12 and abs(c2r + c1) < 1e-12


def test_recover_velocity_examples(setup64):
    g, ops = setup64
    k = 3
    u1, u2 = R.recover_velocity(np.zeros(g.n_points), k, ops)
    assert np.max(np.abs(u1)) == 0 and np.max(np.abs(u2)) == 0
    phi = 1 - g.nodes**2
    u1, u2 = R.recover_velocity(phi, k, ops)
    assert np.max(np.abs(u1 - (-2 * g.nodes))) < 1e-9
    assert np.max(np.abs(u2 - (-1j * k * phi))) < 1e-12
    # || u ||^2 = < -w, phi > for phi vanishing at the walls
    w = (ops.d2 - k**2 * np.eye(g.n_points)) @ phi
    lhs = quadrature(g, np.abs(u1) ** 2 + np.abs(u2) ** 2)
    rhs = quadrature(g, -w * np.conj(phi))
    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


# -- homogeneous pair ----------------------------------------------------------

def test_homogeneous_pair_contract():
    nu, k, lam = 1e-3, 2, 0.3
    g, ops = mkgrid(nu, k)
    case = R.ResolventCase(nu=nu, k=k, lam=lam, bc="non_slip")
    for method, pair in [("airy", R.homogeneous_airy(case, g, ops)),
                         ("bvp", R.homogeneous_bvp(case, g, ops))]:
        d1 = ops.d1
        assert abs((d1 @ pair.phi1)[0] - 1) < 1e-8, method
        assert abs((d1 @ pair.phi1)[-1]) < 1e-8, method
        assert abs((d1 @ pair.phi2)[-1] - 1) < 1e-8, method
        assert abs((d1 @ pair.phi2)[0]) < 1e-8, method
        assert abs(pair.phi1[0]) < 1e-10 and abs(pair.phi1[-1]) < 1e-10
        # moment identities
        m = quadrature(g, np.exp(k * g.nodes) * pair.w1)
        assert abs(m - math.e**k) <= 1e-7 * math.e**k, method
        m = quadrature(g, np.exp(-k * g.nodes) * pair.w1)
        assert abs(m - math.e**-k) <= 1e-7, method
        m = quadrature(g, np.exp(k * g.nodes) * pair.w2)
        assert abs(m + math.e**-k) <= 1e-7, method


def test_homogeneous_airy_nondegenerate_and_coefficient_bound():
    nu, k, lam = 1e-4, 1, 0.0
    g, ops = mkgrid(nu, k)
    case = R.ResolventCase(nu=nu, k=k, lam=lam, bc="non_slip")
    pair = R.homogeneous_airy(case, g, ops)
    det_log = (pair.A1 * pair.A2 - pair.B1 * pair.B2).abs_log()
    assert det_log > (pair.B1 * pair.B2).abs_log() + math.log(1e-12)
    # wall-layer coefficient ratio bound
    ratio = math.exp(pair.A1.abs_log() - pair.B1.abs_log())
    assert ratio <= math.sqrt(2) / 2 + 1e-9


def test_homogeneous_airy_matches_bvp():
    nu, k, lam = 1e-3, 2, 0.3
    g, ops = mkgrid(nu, k)
    case = R.ResolventCase(nu=nu, k=k, lam=lam, bc="non_slip")
    pa = R.homogeneous_airy(case, g, ops)
    pb = R.homogeneous_bvp(case, g, ops)
    assert l2_norm(g, pa.w1 - pb.w1) <= 1e-6 * l2_norm(g, pb.w1)
    assert l2_norm(g, pa.w2 - pb.w2) <= 1e-6 * l2_norm(g, pb.w2)


def test_homogeneous_airy_precondition_guard():
    case = R.ResolventCase(nu=0.25, k=4, bc="non_slip")  # L = 2.5 < 6k
    g, ops = mkgrid(0.25, 4)
    with pytest.raises(ValueError):
        R.homogeneous_airy(case, g, ops)


def test_homogeneous_mirror_symmetry():
    # w2 at lam is the conjugate reflection of w1 at -lam
    nu, k, lam = 1e-3, 1, 0.4
    g, ops = mkgrid(nu, k)
    pair_p = R.homogeneous_airy(R.ResolventCase(nu=nu, k=k, lam=lam,
                                                bc="non_slip"), g, ops)
    pair_m = R.homogeneous_airy(R.ResolventCase(nu=nu, k=k, lam=-lam,
                                                bc="non_slip"), g, ops)
    mirrored = -np.conj(pair_m.w1[::-1])
    assert l2_norm(g, pair_p.w2 - mirrored) <= 1e-8 * l2_norm(g, pair_p.w2)


def test_negative_k_by_conjugation():
    nu, lam = 1e-3, 0.2
    g, ops = mkgrid(nu, 2)
    F = np.exp(1j * g.nodes)
    sol_m = R.solve_nonslip(R.ResolventCase(nu=nu, k=-2, lam=lam, bc="non_slip"),
                            R.direct_forcing(F), g, ops)
    sol_p = R.solve_nonslip(R.ResolventCase(nu=nu, k=2, lam=lam, bc="non_slip"),
                            R.direct_forcing(np.conj(F)), g, ops)
    assert l2_norm(g, sol_m.w - np.conj(sol_p.w)) <= 1e-12 * l2_norm(g, sol_p.w)
    assert R.moment_residuals(sol_m, g)[0] < 1e-8


# -- non-slip solves -----------------------------------------------------------

def test_nonslip_zero_forcing(setup64):
    g, ops = setup64
    case = R.ResolventCase(nu=1e-2, k=1, lam=0.1, bc="non_slip")
    sol = R.solve_nonslip(case, R.direct_forcing(np.zeros(g.n_points)), g, ops,
                          path="decomposed")
    assert np.max(np.abs(sol.w)) < 1e-12
    assert sol.c1 == 0j and sol.c2 == 0j


def test_nonslip_paths_agree():
    nu, k, lam = 1e-3, 2, 0.5
    g, ops = mkgrid(nu, k)
    case = R.ResolventCase(nu=nu, k=k, lam=lam, bc="non_slip")
    F = R.direct_forcing(np.exp(1j * g.nodes))
    sa = R.solve_nonslip(case, F, g, ops, path="monolithic")
    sb = R.solve_nonslip(case, F, g, ops, path="decomposed")
    assert l2_norm(g, sa.w - sb.w) <= 1e-7 * l2_norm(g, sb.w)
    sc = R.solve_nonslip(case, F, g, ops, path="decomposed_bvp")
    assert l2_norm(g, sa.w - sc.w) <= 1e-7 * l2_norm(g, sc.w)


def test_nonslip_solution_invariants():
    nu, k, lam = 1e-4, 1, 0.3
    g, ops = mkgrid(nu, k)
    case = R.ResolventCase(nu=nu, k=k, lam=lam, bc="non_slip")
    sol = R.solve_nonslip(case, R.direct_forcing(np.ones(g.n_points)), g, ops)
    d1 = ops.d1
    phip = d1 @ sol.phi
    assert abs(sol.phi[0]) < 1e-12 and abs(sol.phi[-1]) < 1e-12
    assert abs(phip[0]) <= 1e-8 * np.abs(phip).max()
    assert abs(phip[-1]) <= 1e-8 * np.abs(phip).max()
    mom = R.moment_residuals(sol, g)
    assert max(mom) <= 1e-8
    res = (ops.d2 - k**2 * np.eye(g.n_points)) @ sol.phi - sol.w
    assert l2_norm(g, res) <= 1e-8 * l2_norm(g, sol.w)


def test_nonslip_pair_forcing():
    nu, k = 1e-3, 1
    g, ops = mkgrid(nu, k)
    case = R.ResolventCase(nu=nu, k=k, lam=0.0, bc="non_slip")
    sol = R.solve_nonslip(case, R.pair_forcing(f2=np.zeros(g.n_points)), g, ops)
    assert np.max(np.abs(sol.w)) < 1e-12
    f2 = np.cos(np.pi * g.nodes / 2).astype(complex)
    sol = R.solve_nonslip(case, R.pair_forcing(f2=f2), g, ops)
    assert max(R.moment_residuals(sol, g)) <= 1e-8
