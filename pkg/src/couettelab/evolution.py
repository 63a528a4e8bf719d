"""Time integration of the forced sheared advection-diffusion equation.

    d omega/dt + [nu(k^2 - d2) + iky] omega = -ik f1 - d f2/dy

Crank-Nicolson on the full dense operator, factorized once per run.  Under
vorticity Dirichlet the wall rows are bordered to w(+-1) = 0; under velocity
Dirichlet the two wall values are chosen each step by the influence-matrix
method so the exp(+-ky) moments of omega hit their targets (zero for the
plain problem), which is the moment form of phi'(+-1) = 0.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .grid import l2_norm, quadrature
from .resolvent import EllipticSolver, recover_velocity
from .weights import rho_k

MAX_STEPS = 400_000


def dt_accuracy_bound(nu, k):
    """0.1 min(1/|k|, enhanced-dissipation time)."""
    return 0.1 * min(1.0 / abs(k), nu ** (-1 / 3) * abs(k) ** (-2 / 3))


@dataclass
class EvolutionCase:
    nu: float
    k: int
    omega0: np.ndarray
    dt: float
    t_end: float
    bc: str = "non_slip"
    forcing: object = None          # callable t -> (f1, f2) nodal arrays or None
    check_moments: bool = True

    def __post_init__(self):
        if self.dt <= 0 or self.t_end <= 0:
            raise ValueError("dt and t_end must be positive")
        bound = dt_accuracy_bound(self.nu, self.k)
        if self.dt > bound * (1 + 1e-12):
            raise ValueError(f"dt = {self.dt} exceeds the accuracy rule {bound:.4g}")


def moment_violation(omega, k, grid):
    """max of |<omega, e^{+-ky}>| / (e^{|k|} ||omega||_L1)."""
    y = grid.nodes
    l1 = quadrature(grid, np.abs(omega))
    if l1 == 0:
        return 0.0
    return max(abs(quadrature(grid, np.exp(s * k * y) * omega))
               for s in (1, -1)) / (math.exp(abs(k)) * l1)


class CrankNicolson:
    """One-step CN propagator with either wall treatment, LU reused."""

    def __init__(self, nu, k, bc, dt, grid, ops):
        self.nu, self.k, self.bc, self.dt = nu, k, bc, dt
        self.grid, self.ops = grid, ops
        n = grid.n_points
        lmat = (nu * (k**2 * np.eye(n) - ops.d2)
                + 1j * k * np.diag(grid.nodes)).astype(complex)
        m_plus = np.eye(n) + 0.5 * dt * lmat
        self.m_minus = np.eye(n) - 0.5 * dt * lmat
        for i in (0, n - 1):
            m_plus[i, :] = 0.0
            m_plus[i, i] = 1.0
        self.lu = sla.lu_factor(m_plus)
        self.elliptic = EllipticSolver(grid, ops, k)
        if bc == "non_slip":
            y = grid.nodes
            q = grid.quad_weights
            self._mom = np.vstack([q * np.exp(k * y), q * np.exp(-k * y)])
            cols = np.zeros((n, 2), dtype=complex)
            cols[0, 0] = 1.0
            cols[n - 1, 1] = 1.0
            self.infl_cols = sla.lu_solve(self.lu, cols)
            self.infl_mat = self._mom @ self.infl_cols
            if abs(np.linalg.det(self.infl_mat)) == 0.0:
                raise RuntimeError("singular influence matrix")

    def step(self, w, rhs_mid=None, moment_targets=(0.0, 0.0)):
        """Advance one dt.  rhs_mid is the time-centered forcing (nodal)."""
        rhs = self.m_minus @ w
        if rhs_mid is not None:
            rhs = rhs + self.dt * rhs_mid
        rhs[0] = 0.0
        rhs[-1] = 0.0
        wp = sla.lu_solve(self.lu, rhs)
        if self.bc == "navier_slip":
            return wp
        resid = np.asarray(moment_targets, dtype=complex) - self._mom @ wp
        ab = np.linalg.solve(self.infl_mat, resid)
        return wp + self.infl_cols @ ab


@dataclass
class SpaceTimeLedger:
    """Accumulated space-time norms of one run (L2-in-time by trapezoid,
    L-inf-in-time by running max over stored samples)."""

    u_linf_linf: float = 0.0
    u_l2l2: float = 0.0
    w_l2l2: float = 0.0
    w_linf_l2: float = 0.0
    boundary_w_linf_l2: float = 0.0
    rho_half_l2l2: float = 0.0
    rho_threehalf_linf_l2: float = 0.0
    decay_samples: list = field(default_factory=list)
    t_final: float = 0.0
    data_l2: float = 0.0
    data_dy_l2: float = 0.0
    forcing_f1_l2l2: float = 0.0
    forcing_f2_l2l2: float = 0.0


def space_time_ratio(ledger, nu, k):
    """Space-time estimate ratio: (|k| ||u||^2_{LinfLinf} + k^2 ||u||^2_{L2L2}
    + (nu k^2)^{1/2} ||w||^2_{L2L2} + ||(1-|y|)^{1/2} w||^2_{LinfL2}) over the
    data functional (plus the forcing functional when forced)."""
    lhs = (abs(k) * ledger.u_linf_linf**2
           + k**2 * ledger.u_l2l2**2
           + math.sqrt(nu * k**2) * ledger.w_l2l2**2
           + ledger.boundary_w_linf_l2**2)
    rhs = (ledger.data_l2**2 + ledger.data_dy_l2**2 / k**2
           + nu ** -0.5 * abs(k) * ledger.forcing_f1_l2l2**2
           + ledger.forcing_f2_l2l2**2 / nu)
    return lhs / rhs


class _Accumulator:
    def __init__(self, case, grid, ops, stepper):
        self.case, self.grid, self.ops = case, grid, ops
        self.stepper = stepper
        self.rho = rho_k(grid.nodes, (abs(case.k) / case.nu) ** (1 / 3))
        self.bweight = 1.0 - np.abs(grid.nodes)
        self.led = SpaceTimeLedger()
        self.led.data_l2 = l2_norm(grid, case.omega0)
        self.led.data_dy_l2 = l2_norm(grid, ops.d1 @ case.omega0)
        self._prev = None

    def take(self, t, w, f1norm2=0.0, f2norm2=0.0):
        g, ops, case = self.grid, self.ops, self.case
        phi = self.stepper.elliptic.solve(w)
        u1, u2 = recover_velocity(phi, case.k, ops)
        umod2 = np.abs(u1) ** 2 + np.abs(u2) ** 2
        w2 = np.abs(w) ** 2
        vals = dict(
            u2=abs(quadrature(g, umod2)),
            w2=abs(quadrature(g, w2)),
            rho_w2=abs(quadrature(g, self.rho * w2)),
            f1=f1norm2, f2=f2norm2,
        )
        led = self.led
        led.u_linf_linf = max(led.u_linf_linf, math.sqrt(float(np.max(umod2))))
        led.w_linf_l2 = max(led.w_linf_l2, math.sqrt(vals["w2"]))
        led.boundary_w_linf_l2 = max(
            led.boundary_w_linf_l2, math.sqrt(abs(quadrature(g, self.bweight * w2))))
        led.rho_threehalf_linf_l2 = max(
            led.rho_threehalf_linf_l2,
            math.sqrt(abs(quadrature(g, self.rho**3 * w2))))
        if self._prev is not None:
            t0, prev = self._prev
            h = 0.5 * (t - t0)
            led.u_l2l2 = math.sqrt(led.u_l2l2**2 + h * (prev["u2"] + vals["u2"]))
            led.w_l2l2 = math.sqrt(led.w_l2l2**2 + h * (prev["w2"] + vals["w2"]))
            led.rho_half_l2l2 = math.sqrt(
                led.rho_half_l2l2**2 + h * (prev["rho_w2"] + vals["rho_w2"]))
            led.forcing_f1_l2l2 = math.sqrt(
                led.forcing_f1_l2l2**2 + h * (prev["f1"] + vals["f1"]))
            led.forcing_f2_l2l2 = math.sqrt(
                led.forcing_f2_l2l2**2 + h * (prev["f2"] + vals["f2"]))
        led.decay_samples.append((t, math.sqrt(vals["w2"])))
        led.t_final = t
        self._prev = (t, vals)


def _rhs_of(case, grid, ops, t):
    if case.forcing is None:
        return None, 0.0, 0.0
    f1, f2 = case.forcing(t)
    rhs = np.zeros(grid.n_points, dtype=complex)
    n1 = n2 = 0.0
    if f1 is not None:
        rhs = rhs - 1j * case.k * f1
        n1 = abs(quadrature(grid, np.abs(f1) ** 2))
    if f2 is not None:
        rhs = rhs - ops.d1 @ f2
        n2 = abs(quadrature(grid, np.abs(f2) ** 2))
    return rhs, n1, n2


def run(case, grid, ops, store_every=1, auto_extend=True):
    """Integrate to t_end (extended for unforced runs until the vorticity has
    decayed by 1e4) and return the space-time ledger."""
    if case.bc == "non_slip" and case.check_moments:
        viol = moment_violation(case.omega0, case.k, grid)
        if viol > 1e-8:
            raise ValueError(f"initial data violates the wall moments: {viol:.2e}")
    stepper = CrankNicolson(case.nu, case.k, case.bc, case.dt, grid, ops)
    acc = _Accumulator(case, grid, ops, stepper)
    w = np.asarray(case.omega0, dtype=complex).copy()
    w0_l2 = l2_norm(grid, w)
    rhs_prev, n1p, n2p = _rhs_of(case, grid, ops, 0.0)
    acc.take(0.0, w, n1p, n2p)
    t = 0.0
    steps = 0
    while True:
        rhs_next, n1, n2 = _rhs_of(case, grid, ops, t + case.dt)
        rhs_mid = None if rhs_next is None else 0.5 * (rhs_prev + rhs_next)
        w = stepper.step(w, rhs_mid=rhs_mid)
        t += case.dt
        steps += 1
        if steps % store_every == 0 or t >= case.t_end:
            acc.take(t, w, n1, n2)
        rhs_prev = rhs_next
        if t >= case.t_end:
            done = True
            if auto_extend and case.forcing is None:
                done = l2_norm(grid, w) <= 1e-4 * w0_l2
            if done:
                break
        if steps >= MAX_STEPS:
            raise RuntimeError("run exceeded MAX_STEPS before reaching t_end")
    return acc.led, w


def decay_rate(samples, nu, k, efolds=2.0):
    """Fitted decay rate of ||omega(t)||_2 after the non-normal transient.

    Window: drop t < 0.4 (nu k^2)^{-1/3}, fit over the next `efolds`
    e-foldings; returns (rate, r2)."""
    ts = np.array([s[0] for s in samples])
    vs = np.array([s[1] for s in samples])
    t0 = 0.4 * (nu * k**2) ** (-1 / 3)
    i0 = int(np.searchsorted(ts, t0))
    if i0 >= len(ts) - 4:
        raise ValueError("run too short for the fit window")
    v0 = vs[i0]
    mask = (ts >= t0) & (vs >= v0 * math.exp(-efolds)) & (vs > 0)
    if mask.sum() < 5:
        raise ValueError("too few samples in the fit window")
    lt, lv = ts[mask], np.log(vs[mask])
    slope, intercept = np.polyfit(lt, lv, 1)
    resid = lv - (slope * lt + intercept)
    ss = np.sum((lv - lv.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss if ss > 0 else 0.0
    return -float(slope), float(r2)


def homogeneous_splitting(case, grid, ops, store_every=1):
    """Three-part splitting of the unforced velocity-Dirichlet run.

    part 1: exp(-(nu k^2)^{1/3} t - i t k y) omega0, in closed form.
    part 2: forced moment-zero run; its discrete forcing is the CN residual
            of the sampled part 1, i.e. the trapezoidal discretization of
            -(nu k^2 - (nu k^2)^{1/3}) w1 + nu d2 w1 (difference O(dt^2)),
            which makes the three-part sum satisfy the direct CN recurrence
            identically.
    part 3: unforced run, zero initial data, moment targets opposite to
            part 1's moments.

    Returns (ledgers dict, additivity error in relative L-inf L2).
    """
    if case.bc != "non_slip" or case.forcing is not None:
        raise ValueError("splitting is defined for unforced non_slip runs")
    nu, k, dt = case.nu, case.k, case.dt
    mu = (nu * k**2) ** (1 / 3)
    y = grid.nodes
    w0 = np.asarray(case.omega0, dtype=complex)

    def part1(t):
        return np.exp(-mu * t - 1j * t * k * y) * w0

    stepper = CrankNicolson(nu, k, "non_slip", dt, grid, ops)
    acc1 = _Accumulator(case, grid, ops, stepper)
    acc2 = _Accumulator(case, grid, ops, stepper)
    acc3 = _Accumulator(case, grid, ops, stepper)
    accd = _Accumulator(case, grid, ops, stepper)
    mom = stepper._mom if case.bc == "non_slip" else None

    w_d = w0.copy()
    w2 = np.zeros_like(w0)
    w3 = np.zeros_like(w0)
    w1 = part1(0.0)
    for a, wv in ((acc1, w1), (acc2, w2), (acc3, w3), (accd, w_d)):
        a.take(0.0, wv)
    t = 0.0
    nsteps = int(round(case.t_end / dt))
    add_err = 0.0
    ref = l2_norm(grid, w_d)
    for j in range(nsteps):
        t_next = t + dt
        w1_next = part1(t_next)
        # CN residual of the closed-form part: (M+ w1_next - M- w1)/dt
        m_plus_w1n = w1_next + 0.5 * dt * (
            nu * (k**2 * w1_next - ops.d2 @ w1_next) + 1j * k * y * w1_next)
        m_minus_w1 = stepper.m_minus @ w1
        rhs2 = -(m_plus_w1n - m_minus_w1) / dt
        w2 = stepper.step(w2, rhs_mid=rhs2, moment_targets=(0.0, 0.0))
        tgt = -(mom @ w1_next)
        w3 = stepper.step(w3, rhs_mid=None, moment_targets=tuple(tgt))
        w_d = stepper.step(w_d)
        w1 = w1_next
        t = t_next
        if (j + 1) % store_every == 0 or j == nsteps - 1:
            for a, wv in ((acc1, w1), (acc2, w2), (acc3, w3), (accd, w_d)):
                a.take(t, wv)
            ref = max(ref, l2_norm(grid, w_d))
            add_err = max(add_err, l2_norm(grid, w1 + w2 + w3 - w_d))
    return (dict(part1=acc1.led, part2=acc2.led, part3=acc3.led, direct=accd.led),
            add_err / ref)


def semigroup_norm(nu, k, bc, ts, grid, ops):
    """Weighted operator norm of the CN-free exact propagator at the given
    times, by dense matrix exponentials of the interior generator."""
    from .harness import evolution_generator

    a = evolution_generator(nu, k, bc, grid, ops)
    sq = np.sqrt(grid.quad_weights[1:-1])
    out = []
    for t in ts:
        e = sla.expm(-t * a)
        out.append(float(np.linalg.norm(e * (sq[:, None] / sq[None, :]), 2)))
    return out
