"""Airy-kernel constants: the log-derivative supremum and damping bounds.

The headline number: the supremum over the real line of the real part of
the slanted-primitive log-derivative is -0.4843..., safely below -1/3, which
is what makes every wall coefficient integrable.  Run:

    python demos/01_airy_constants.py
"""

import math

import numpy as np

from couettelab.airy import DELTA1, a0, airy, damping, log_derivative_sup

print("Airy values at the origin")
b = airy(0.0)
print(f"  Ai(0)  = {b.ai.real:.17f}")
print(f"  Ai'(0) = {b.ai_prime.real:.17f}")
print(f"  slanted primitive at 0 = {a0(0.0).a0.real:.15f}  (exactly 1/3)")

print("\nLog-derivative supremum a(delta) on the band")
for delta in (0.0, 0.05, 0.10, DELTA1):
    val = log_derivative_sup(delta)
    flag = "ok, below -1/3" if val < -1 / 3 else "ABOVE -1/3"
    print(f"  a({delta:4.2f}) = {val:+.6f}   {flag}")

print("\nDamping factor |omega(z, x)| against exp(-x/3)")
for z in (-2.0, 0.0, 1.0 + 0.1j):
    row = []
    for x in (1.0, 3.0, 6.0):
        om = abs(damping(z, x).omega)
        row.append(f"x={x:3.1f}: {om:.3e} <= {math.exp(-x/3):.3e}")
    print(f"  z = {z}:  " + ";  ".join(row))

print("\nEmpirical super-exponential constant c in |omega| <= exp(-c x^{3/2})")
cs = []
for x in np.linspace(2.0, 10.0, 9):
    cs.append(-math.log(abs(damping(0.0, float(x)).omega)) / x**1.5)
print(f"  c over x in [2, 10]: min {min(cs):.3f}, max {max(cs):.3f}")
