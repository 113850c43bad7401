#!/usr/bin/env python3
"""A tour of the scalar kernels behind the expansion constants.

Every constant in the closed-form expansions is built from four special
functions -- Clausen's Cl2, the complex dilogarithm, log|eta| of the
Dedekind eta function, and the complex digamma -- plus Euler's gamma,
Catalan's constant, and two Gamma values.  This script exercises the
classical identities tying them together.
"""

import cmath
import math

from latticesum import (
    CATALAN,
    EULER_GAMMA,
    GAMMA_QUARTER,
    QuadraticForm,
    clausen_cl2,
    digamma_complex,
    dilog_complex,
    kummer_omega,
    log_abs_eta,
)

print("Clausen function:")
print(f"  Cl2(pi/2)        = {clausen_cl2(math.pi / 2)!r}")
print(f"  Catalan constant = {CATALAN!r}")
print(f"  Cl2(2pi/3) - (2/3) Cl2(pi/3) = "
      f"{clausen_cl2(2 * math.pi / 3) - 2 / 3 * clausen_cl2(math.pi / 3):.2e}")
print()

print("Dilogarithm on the unit circle (imaginary part is Cl2):")
for th in (0.8, 2.0):
    li = dilog_complex(cmath.exp(1j * th))
    print(f"  im Li2(e^{{{th}i}}) - Cl2({th}) = {li.imag - clausen_cl2(th):.2e}")
print()

print("Kummer's decomposition of im Li2(r e^{i t}):")
r, th = math.sqrt(0.5), 2.2
w = kummer_omega(r, th)
lhs = dilog_complex(r * cmath.exp(1j * th)).imag
rhs = w * math.log(r) + 0.5 * (
    clausen_cl2(2 * th) + clausen_cl2(2 * w) - clausen_cl2(2 * th + 2 * w)
)
print(f"  direct {lhs:.15f} vs Clausen form {rhs:.15f}")
print()

print("Dedekind eta:")
print(f"  log|eta(i)|                  = {log_abs_eta(1j):.15f}")
print(f"  log(Gamma(1/4)/(2 pi^(3/4))) = "
      f"{math.log(GAMMA_QUARTER / (2 * math.pi ** 0.75)):.15f}")
tau = QuadraticForm(2, 1, 3).mu
print(f"  modular check at mu of (2,1,3): "
      f"|log|eta(-1/mu)| - log|mu|/2 - log|eta(mu)|| = "
      f"{abs(log_abs_eta(-1 / tau) - 0.5 * math.log(abs(tau)) - log_abs_eta(tau)):.2e}")
print()

print("Digamma:")
print(f"  psi(1) + gamma = {digamma_complex(1 + 0j).real + EULER_GAMMA:.2e}")
z = 3.7 + 2.1j
refl = digamma_complex(1 - z) - digamma_complex(z)
w = math.pi * z
cot = cmath.cos(w) / cmath.sin(w)
print(f"  reflection residual at 3.7+2.1i = {abs(refl - math.pi * cot):.2e}")
