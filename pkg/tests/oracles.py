"""Independent high-precision oracles used only by the tests.

The Airy oracle sums the ascending (Maclaurin) series in mpmath arbitrary
precision, with the working precision padded by the known cancellation
~ 2|zeta| digits so 50 correct digits always survive.  It shares no code
with the production evaluator.
"""

import mpmath as mp


def _pad_dps(z):
    zeta = (2.0 / 3.0) * abs(complex(z)) ** 1.5
    return 50 + int(1.0 * zeta) + 10


def airy_maclaurin(z, derivative=False):
    """Ai(z) (or Ai'(z)) by the ascending series at >= 50 correct digits."""
    z = complex(z)
    with mp.workdps(_pad_dps(z)):
        zz = mp.mpc(z)
        c1 = mp.mpf(3) ** mp.mpf("-2/3") / mp.gamma(mp.mpf(2) / 3)
        c2 = mp.mpf(3) ** mp.mpf("-1/3") / mp.gamma(mp.mpf(1) / 3)
        f = fp = mp.mpc(0)
        g = gp = mp.mpc(0)
        a = mp.mpc(1)          # f-series term
        c = zz                 # g-series term
        f += a
        g += c
        gp += zz               # (3k+1) c_k at k = 0; divided by z at the end
        w3 = zz**3
        for k in range(0, 600):
            a = a * w3 / ((3 * k + 2) * (3 * k + 3))
            c = c * w3 / ((3 * k + 3) * (3 * k + 4))
            f += a
            g += c
            kk = k + 1
            fp += 3 * kk * a
            gp += (3 * kk + 1) * c
            if abs(a) + abs(c) < mp.mpf(10) ** (-mp.mp.dps) * (abs(f) + abs(g) + 1):
                break
        ai = c1 * f - c2 * g
        if not derivative:
            return complex(ai)
        if zz == 0:
            return complex(-c2)
        aip = c1 * (fp / zz) - c2 * (gp / zz)
        return complex(aip)


def a0_quadrature(z):
    """Slanted primitive by adaptive mpmath quadrature along the rotated ray."""
    z = complex(z)
    w = mp.e ** (1j * mp.pi / 6) * z
    val = mp.quad(lambda t: mp.airyai(w + t), [0, 4, 12, 30, 60])
    return complex(val)


def exp_quadrature_exact():
    """Closed form of the integral of e^{2y} over (-1, 1)."""
    return float(mp.sinh(2))


def c1_sinh_closed_form(k):
    """-int_(-1)^1 sinh^2(k(1+y))/sinh(2k) dy in closed form."""
    k = mp.mpf(k)
    return float(-(mp.sinh(4 * k) / (4 * k) - 1) / mp.sinh(2 * k))
