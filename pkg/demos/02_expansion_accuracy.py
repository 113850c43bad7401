#!/usr/bin/env python3
"""The closed-form expansions against brute force.

Two expansions are on display:

* G_n (reciprocal quadratic-form double sum): five closed-form terms,
  claimed error O(log n / n^4).
* F_n(f_1) (the quadratic-form lattice sum): three terms with a
  parity-dependent constant, claimed error O(log n / n^2).

For each, the residual is multiplied by the claimed power of n; if the
claim is right the scaled residuals stay bounded while n doubles.  The
last column is the free-exponent power-law fit over the whole ladder.
"""

import math

from latticesum import (
    QuadraticForm,
    SQUARE,
    TRIANGULAR,
    fn_direct,
    fn_f1_expansion,
    gn_direct,
    gn_expansion,
    residual_order_fit,
)

form = QuadraticForm(2, 1, 3)
expansion = gn_expansion(form)
print("G_n for the form 2j^2 + jk + 3k^2")
print(f"{'n':>6} {'G_n':>20} {'expansion':>20} {'resid*n^4/log n':>16}")
samples = []
for n in (100, 200, 400, 800, 1600):
    exact = gn_direct(form, n).value
    approx = expansion.evaluate(n)
    samples.append((n, exact - approx))
    print(f"{n:>6} {exact:>20.12f} {approx:>20.12f} "
          f"{abs(exact - approx) * n**4 / math.log(n):>16.4f}")
fit = residual_order_fit(samples, "logn_over_n4")
print(f"fitted |residual| ~ n^{fit.fitted_exponent:.2f} "
      f"(log n)^{fit.fitted_log_power}; claimed n^-4 log n -> "
      f"{'confirmed' if fit.passed else 'NOT confirmed'}\n")

for spec in (SQUARE, TRIANGULAR):
    record = fn_f1_expansion(spec)
    print(f"F_n(f_1) for the {spec.name} lattice (parity matters)")
    print(f"{'n':>6} {'residual':>14} {'resid*n^2/log n':>16}")
    samples = []
    for n in (101, 200, 401, 800):
        resid = fn_direct(spec, n, m=1).value - record.evaluate(n)
        samples.append((n, resid))
        print(f"{n:>6} {resid:>14.3e} {abs(resid) * n * n / math.log(n):>16.4f}")
    fit = residual_order_fit(samples, "logn_over_n2")
    print(f"fitted exponent {fit.fitted_exponent:+.2f} vs claimed -2 -> "
          f"{'confirmed' if fit.passed else 'NOT confirmed'}\n")
