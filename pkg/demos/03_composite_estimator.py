#!/usr/bin/env python3
"""Estimating F_n without summing n^2 terms.

The identity F_n(f) - I_n(f) + I_n(f_1) - F_n(f_1) = O(log n) lets the
full sum be replaced by one adaptive 2-D integral (I_n(f)), one exact
closed form (I_n(f_1)), and one three-term expansion (F_n(f_1)).  The
direct sum costs O(n^2) kernel evaluations; the integral's cost grows
only logarithmically with n, so for large n the composite wins while
keeping an O(log n) absolute error on a quantity of size n^2 log n.
"""

import math
import time

from latticesum import SQUARE, UNIONJACK, composite_fn_estimate, fn_direct

print(f"{'lattice':>10} {'n':>6} {'direct':>20} {'composite':>20} "
      f"{'abs gap':>10} {'gap/log n':>10}")
for spec in (SQUARE, UNIONJACK):
    for n in (64, 256, 1024):
        t0 = time.time()
        direct = fn_direct(spec, n).value
        t_direct = time.time() - t0
        t0 = time.time()
        est = composite_fn_estimate(spec, n, tol=1e-9)
        t_est = time.time() - t0
        gap = est.value - direct
        print(f"{spec.name:>10} {n:>6} {direct:>20.6f} {est.value:>20.6f} "
              f"{gap:>10.4f} {gap / math.log(n):>10.4f}")
    print()

print("The gap per log n settles to a lattice-dependent constant; the")
print("estimator's reported err_estimate is a deliberately loose heuristic")
print("(10 x leading coefficient x log n).")
