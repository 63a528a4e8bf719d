"""Resolvent problems for the sheared advection-diffusion operator.

Vorticity-form equation on (-1, 1):

    -nu (w'' - k^2 w) + i k (y - lam) w - eps nu^{1/3} |k|^{2/3} w = F

Two boundary settings: vorticity Dirichlet w(+-1) = 0 ("navier_slip") and
velocity Dirichlet phi(+-1) = phi'(+-1) = 0 ("non_slip"), phi the stream
function with (d^2/dy^2 - k^2) phi = w.

The non-slip problem is solved two ways: a monolithic bordered solve and
the decomposition w = w_na + c1 w1 + c2 w2 whose homogeneous pieces come
either from slanted Airy functions or from direct bordered solves.
"""

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from .airy import airy_scaled
from .grid import quadrature
from .scaled import Scaled, scaled_quadrature

#: Largest admissible contour shift; the harness verifies C * EPSILON_MAX <= 1/2
#: against the recorded vorticity-Dirichlet resolvent constant.
EPSILON_MAX = 0.02

#: Wavenumber above which the slanted-Airy representation is trusted even when
#: the wall layer is not much thinner than 1/(6k) (working hypothesis).
K0_LARGE = 10

BCS = ("navier_slip", "non_slip")


@dataclass(frozen=True)
class ResolventCase:
    """One (nu, k, lam, eps, bc) instance of the resolvent problem."""

    nu: float
    k: int
    lam: float = 0.0
    epsilon: float = 0.0
    bc: str = "navier_slip"

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("nu must be positive")
        if int(self.k) != self.k or abs(self.k) < 1:
            raise ValueError("k must be a nonzero integer")
        if self.bc not in BCS:
            raise ValueError(f"bc must be one of {BCS}")
        if not 0 <= self.epsilon <= EPSILON_MAX:
            raise ValueError(f"epsilon must lie in [0, {EPSILON_MAX}]")

    @property
    def L(self):
        return (abs(self.k) / self.nu) ** (1.0 / 3.0)

    @property
    def delta(self):
        return (self.nu / abs(self.k)) ** (1.0 / 3.0)

    @property
    def shift(self):
        """eps nu^{1/3} |k|^{2/3}, the spectral-contour displacement."""
        return self.epsilon * self.nu ** (1.0 / 3.0) * abs(self.k) ** (2.0 / 3.0)


@dataclass(frozen=True)
class ForcingSpec:
    """Right-hand side: direct F, or a divergence pair F = -ik f1 - d/dy f2."""

    form: str
    F: np.ndarray = None
    f1: np.ndarray = None
    f2: np.ndarray = None

    def nodal_rhs(self, case, grid, ops):
        if self.form == "direct_F":
            F = np.asarray(self.F, dtype=complex)
        elif self.form == "divergence_pair":
            f1 = np.zeros(grid.n_points, dtype=complex) if self.f1 is None \
                else np.asarray(self.f1, dtype=complex)
            f2 = np.zeros(grid.n_points, dtype=complex) if self.f2 is None \
                else np.asarray(self.f2, dtype=complex)
            F = -1j * case.k * f1 - ops.d1 @ f2
        else:
            raise ValueError(f"unknown forcing form {self.form!r}")
        if F.shape != (grid.n_points,):
            raise ValueError("forcing length does not match the grid")
        return F


def direct_forcing(F):
    return ForcingSpec(form="direct_F", F=np.asarray(F, dtype=complex))


def pair_forcing(f1=None, f2=None):
    return ForcingSpec(form="divergence_pair", f1=f1, f2=f2)


@dataclass
class ResolventSolution:
    case: ResolventCase
    w: np.ndarray
    phi: np.ndarray
    u: tuple
    w_na: np.ndarray = None
    c1: complex = 0j
    c2: complex = 0j
    path: str = "monolithic"
    norms: object = None


@dataclass(frozen=True)
class HomogeneousPair:
    """Homogeneous solutions normalized by the wall derivative of phi.

    C11..C22 and A1..B2 are Scaled values (mantissa * exp(log)); they span
    exp(+-O(L^{3/2})) and are combined in log space.
    """

    w1: np.ndarray
    w2: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    C11: Scaled
    C12: Scaled
    C21: Scaled
    C22: Scaled
    A1: Scaled
    A2: Scaled
    B1: Scaled
    B2: Scaled
    d: complex
    d_tilde: complex
    method: str = "airy"


@dataclass(frozen=True)
class BorderedOperator:
    matrix: np.ndarray
    bc_rows: tuple
    form: str


class EllipticSolver:
    """Prefactored (d2 - k^2) phi = w with phi(+-1) = 0."""

    def __init__(self, grid, ops, k):
        n = grid.n_points
        a = (ops.d2 - k**2 * np.eye(n)).astype(complex)
        a[0, :] = 0.0
        a[0, 0] = 1.0
        a[-1, :] = 0.0
        a[-1, -1] = 1.0
        self._lu = sla.lu_factor(a)

    def solve(self, w):
        rhs = np.asarray(w, dtype=complex).copy()
        rhs[0] = 0.0
        rhs[-1] = 0.0
        return sla.lu_solve(self._lu, rhs)


def recover_velocity(phi, k, ops):
    """u = (d phi/dy, -ik phi)."""
    phi = np.asarray(phi, dtype=complex)
    return ops.d1 @ phi, -1j * k * phi


def vorticity_matrix(case, grid, ops):
    """Unbordered operator -nu(d2 - k^2) + ik(y - lam) - shift."""
    n = grid.n_points
    k = case.k
    return (-case.nu * (ops.d2 - k**2 * np.eye(n))
            + 1j * k * np.diag(grid.nodes - case.lam)
            - case.shift * np.eye(n)).astype(complex)


def stream_matrix(case, grid, ops):
    """Unbordered fourth-order operator acting on the stream function."""
    n = grid.n_points
    k = case.k
    lap = ops.d2 - k**2 * np.eye(n)
    return (-case.nu * (lap @ lap)
            + 1j * k * np.diag(grid.nodes - case.lam) @ lap
            - case.shift * lap).astype(complex)


def build_operator(case, grid, ops):
    """Bordered discrete operator for the case's boundary condition.

    navier_slip: vorticity form with rows at y = +-1 replaced by w = 0.
    non_slip: fourth-order stream form with four rows replaced by
    phi(+-1) = 0 and phi'(+-1) = 0.
    """
    n = grid.n_points
    if case.bc == "navier_slip":
        a = vorticity_matrix(case, grid, ops)
        for i in (0, n - 1):
            a[i, :] = 0.0
            a[i, i] = 1.0
        return BorderedOperator(matrix=a, bc_rows=(0, n - 1), form="vorticity")
    a = stream_matrix(case, grid, ops)
    rows = (0, 1, n - 2, n - 1)
    a[0, :] = 0.0
    a[0, 0] = 1.0                 # phi(1) = 0
    a[1, :] = ops.d1[0, :]        # phi'(1) = 0
    a[n - 2, :] = ops.d1[-1, :]   # phi'(-1) = 0
    a[n - 1, :] = 0.0
    a[n - 1, n - 1] = 1.0         # phi(-1) = 0
    return BorderedOperator(matrix=a, bc_rows=rows, form="stream")


def _conjugate_case(case):
    return replace(case, k=-case.k)


def solve_navier(case, forcing, grid, ops, elliptic=None):
    """Vorticity-Dirichlet resolvent solve; phi recovered elliptically."""
    if case.bc != "navier_slip":
        raise ValueError("solve_navier requires bc = navier_slip")
    if case.k < 0:
        mirror = solve_navier(_conjugate_case(case), _conj_forcing(forcing),
                              grid, ops, elliptic=None)
        return _conjugate_solution(case, mirror)
    F = forcing.nodal_rhs(case, grid, ops)
    op = build_operator(case, grid, ops)
    rhs = F.copy()
    rhs[0] = rhs[-1] = 0.0
    try:
        w = np.linalg.solve(op.matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"resolvent solve failed for {case}: {exc} "
            "(lam real cannot be in the spectrum; check resolution)"
        ) from exc
    if elliptic is None:
        elliptic = EllipticSolver(grid, ops, case.k)
    phi = elliptic.solve(w)
    return ResolventSolution(case=case, w=w, phi=phi,
                             u=recover_velocity(phi, case.k, ops),
                             w_na=w, path="vorticity_dirichlet")


def _conj_forcing(forcing):
    conj = lambda a: None if a is None else np.conj(a)
    return ForcingSpec(form=forcing.form, F=conj(forcing.F),
                       f1=conj(forcing.f1), f2=conj(forcing.f2))


def _conjugate_solution(case, sol):
    u1, u2 = sol.u
    return ResolventSolution(
        case=case, w=np.conj(sol.w), phi=np.conj(sol.phi),
        u=(np.conj(u1), np.conj(u2)),
        w_na=None if sol.w_na is None else np.conj(sol.w_na),
        c1=None if sol.c1 is None else np.conj(sol.c1),
        c2=None if sol.c2 is None else np.conj(sol.c2),
        path=sol.path)


def coefficients(w_na, k, grid):
    """Boundary coefficients from sinh-weighted moments of w_na.

    c1 = -int sinh(k(1+y))/sinh(2k) w_na dy,
    c2 = +int sinh(k(1-y))/sinh(2k) w_na dy; both even in k.
    """
    y = grid.nodes
    s2k = math.sinh(2 * k)
    c1 = -quadrature(grid, np.sinh(k * (1 + y)) / s2k * w_na)
    c2 = quadrature(grid, np.sinh(k * (1 - y)) / s2k * w_na)
    return complex(c1), complex(c2)


def airy_admissible(case):
    """Hypothesis-range check for the slanted-Airy representation."""
    k = abs(case.k)
    return case.L >= 6 * k or (case.L >= k >= K0_LARGE)


def homogeneous_airy(case, grid, ops, elliptic=None):
    """Homogeneous pair from slanted Airy functions.

    W1, W2 are Airy evaluations on the rotated critical-layer coordinate;
    the wall-moment system fixes the four coefficients.  All exponentially
    large factors stay in (mantissa, log) form.
    """
    if not airy_admissible(case):
        raise ValueError(
            f"slanted-Airy representation requires L >= 6|k| or L >= |k| >= "
            f"{K0_LARGE}; case has L = {case.L:.2f}, k = {case.k}")
    if case.k < 0:
        mirror = homogeneous_airy(_conjugate_case(case), grid, ops)
        return _conjugate_pair(mirror)

    k, nu, lam, eps = case.k, case.nu, case.lam, case.epsilon
    L = case.L
    y = grid.nodes
    base = L * (y - lam - 1j * k * nu) + 1j * eps
    rot1 = cmath.exp(1j * math.pi / 6)
    rot2 = cmath.exp(5j * math.pi / 6)
    m_all, _, s_all = airy_scaled(np.concatenate([rot1 * base, rot2 * base]),
                                  need_prime=False)
    n = grid.n_points
    m1, s1 = m_all[:n], s_all[:n]
    m2, s2 = m_all[n:], s_all[n:]

    q = grid.quad_weights
    A1 = scaled_quadrature(q, m1, s1 + k * y)
    B1 = scaled_quadrature(q, m1, s1 - k * y)
    A2 = scaled_quadrature(q, m2, s2 - k * y)
    B2 = scaled_quadrature(q, m2, s2 + k * y)

    det = A1 * A2 - B1 * B2
    if det.abs_log() < (B1 * B2).abs_log() + math.log(1e-12):
        raise RuntimeError(f"degenerate homogeneous system for {case}")
    ek = Scaled(1.0 + 0j, float(k))
    emk = Scaled(1.0 + 0j, float(-k))
    C11 = (A2 * ek - B2 * emk) / det
    C12 = (A1 * emk - B1 * ek) / det
    C21 = (B2 * ek - A2 * emk) / det
    C22 = (B1 * emk - A1 * ek) / det

    w1 = _combine(C11, m1, s1, C12, m2, s2)
    w2 = _combine(C21, m1, s1, C22, m2, s2)
    if elliptic is None:
        elliptic = EllipticSolver(grid, ops, k)
    phi1 = elliptic.solve(w1)
    phi2 = elliptic.solve(w2)
    d = -1 - lam - 1j * k * nu
    d_tilde = -1 + lam - 1j * k * nu
    return HomogeneousPair(w1=w1, w2=w2, phi1=phi1, phi2=phi2,
                           C11=C11, C12=C12, C21=C21, C22=C22,
                           A1=A1, A2=A2, B1=B1, B2=B2,
                           d=d, d_tilde=d_tilde, method="airy")


def _combine(ca, ma, sa, cb, mb, sb):
    ta = ca.s + sa
    tb = cb.s + sb
    if max(ta.max(), tb.max()) > 690.0:
        raise OverflowError("homogeneous combination leaves float range")
    return ca.m * ma * np.exp(ta) + cb.m * mb * np.exp(tb)


def _conjugate_pair(p):
    cs = lambda x: Scaled(np.conj(x.m), x.s)
    return HomogeneousPair(
        w1=np.conj(p.w1), w2=np.conj(p.w2),
        phi1=np.conj(p.phi1), phi2=np.conj(p.phi2),
        C11=cs(p.C11), C12=cs(p.C12), C21=cs(p.C21), C22=cs(p.C22),
        A1=cs(p.A1), A2=cs(p.A2), B1=cs(p.B1), B2=cs(p.B2),
        d=np.conj(p.d), d_tilde=np.conj(p.d_tilde), method=p.method)


def coupled_system(case, grid, ops, bc="non_slip"):
    """Second-order coupled (w, phi) system; avoids the N^8 growth of the
    bordered fourth-order matrix at large resolution.

    Unknowns x = [w; phi].  Rows: interior vorticity equation, interior
    elliptic link (d2 - k^2) phi = w, then four boundary rows.
    """
    n = grid.n_points
    k = case.k
    aw = vorticity_matrix(case, grid, ops)
    lap = (ops.d2 - k**2 * np.eye(n)).astype(complex)
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    # interior vorticity rows at 1..n-2
    m[1:n - 1, :n] = aw[1:n - 1, :]
    # interior elliptic rows
    m[n + 1:2 * n - 1, :n] = -np.eye(n, dtype=complex)[1:n - 1, :]
    m[n + 1:2 * n - 1, n:] = lap[1:n - 1, :]
    # phi(+-1) = 0
    m[n, n] = 1.0
    m[2 * n - 1, 2 * n - 1] = 1.0
    # wall-derivative rows (values set by the caller's rhs)
    m[0, n:] = ops.d1[0, :]
    m[n - 1, n:] = ops.d1[-1, :]
    return m


def homogeneous_bvp(case, grid, ops):
    """Homogeneous pair by direct bordered solves of the coupled system."""
    if case.k < 0:
        return _conjugate_pair(homogeneous_bvp(_conjugate_case(case), grid, ops))
    n = grid.n_points
    m = coupled_system(case, grid, ops)
    lu = sla.lu_factor(m)
    rhs = np.zeros((2 * n, 2), dtype=complex)
    rhs[0, 0] = 1.0       # phi1'(1) = 1
    rhs[n - 1, 1] = 1.0   # phi2'(-1) = 1
    x = sla.lu_solve(lu, rhs)
    w1, phi1 = x[:n, 0], x[n:, 0]
    w2, phi2 = x[:n, 1], x[n:, 1]
    zero = Scaled(0j, 0.0)
    return HomogeneousPair(w1=w1, w2=w2, phi1=phi1, phi2=phi2,
                           C11=zero, C12=zero, C21=zero, C22=zero,
                           A1=zero, A2=zero, B1=zero, B2=zero,
                           d=-1 - case.lam - 1j * case.k * case.nu,
                           d_tilde=-1 + case.lam - 1j * case.k * case.nu,
                           method="bvp")


def solve_nonslip(case, forcing, grid, ops, path="auto", elliptic=None):
    """Velocity-Dirichlet resolvent solve.

    path 'monolithic': one bordered solve of the coupled (w, phi) system.
    path 'decomposed': vorticity-Dirichlet solve + homogeneous pair with
    coefficients from the sinh-moment formulas.  'auto' prefers the
    decomposed slanted-Airy route when its hypothesis holds.
    """
    if case.bc != "non_slip":
        raise ValueError("solve_nonslip requires bc = non_slip")
    if case.k < 0:
        mirror = solve_nonslip(_conjugate_case(case), _conj_forcing(forcing),
                               grid, ops, path=path)
        return _conjugate_solution(case, mirror)
    if path == "auto":
        path = "decomposed" if airy_admissible(case) else "monolithic"

    if path == "monolithic":
        n = grid.n_points
        F = forcing.nodal_rhs(case, grid, ops)
        m = coupled_system(case, grid, ops)
        rhs = np.zeros(2 * n, dtype=complex)
        rhs[1:n - 1] = F[1:n - 1]
        x = np.linalg.solve(m, rhs)
        w, phi = x[:n], x[n:]
        return ResolventSolution(case=case, w=w, phi=phi,
                                 u=recover_velocity(phi, case.k, ops),
                                 w_na=None, c1=None, c2=None, path="monolithic")

    if path not in ("decomposed", "decomposed_bvp"):
        raise ValueError(f"unknown path {path!r}")
    if elliptic is None:
        elliptic = EllipticSolver(grid, ops, case.k)
    na = solve_navier(replace(case, bc="navier_slip"), forcing, grid, ops,
                      elliptic=elliptic)
    if path == "decomposed" and airy_admissible(case):
        pair = homogeneous_airy(case, grid, ops, elliptic=elliptic)
    else:
        pair = homogeneous_bvp(case, grid, ops)
    c1, c2 = coefficients(na.w, case.k, grid)
    w = na.w + c1 * pair.w1 + c2 * pair.w2
    phi = na.phi + c1 * pair.phi1 + c2 * pair.phi2
    return ResolventSolution(case=case, w=w, phi=phi,
                             u=recover_velocity(phi, case.k, ops),
                             w_na=na.w, c1=c1, c2=c2,
                             path=f"decomposed/{pair.method}")


def solve(case, forcing, grid, ops, **kw):
    if case.bc == "navier_slip":
        return solve_navier(case, forcing, grid, ops, **kw)
    return solve_nonslip(case, forcing, grid, ops, **kw)


def moment_residuals(sol, grid):
    """The exp(+-ky) moments of w, normalized as in the boundary-condition
    derivation: |moment| / (e^{|k|} ||w||_L1)."""
    k = sol.case.k
    y = grid.nodes
    l1 = quadrature(grid, np.abs(sol.w))
    out = []
    for sgn in (1, -1):
        mom = quadrature(grid, np.exp(sgn * k * y) * sol.w)
        out.append(abs(mom) / (math.exp(abs(k)) * max(l1, 1e-300)))
    return tuple(out)
