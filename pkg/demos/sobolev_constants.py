"""Multiplication constants in the H1 metric on (0, pi).

Lower bound: maximize ||f^2|| / ||f||^2 over an explicit kink family.
Upper bound: the algebra inequality ||fg|| <= ||f|| ||g||, spot-checked
on random sine polynomials and anchored by the convolution constant
C(k) = 1/(4+k^2).
"""

import numpy as np

from evocontrol import sobolev

lam_star, ratio_star = sobolev.best_ratio()
print(f"family ratio maximized at lambda = {lam_star:.4f}: {ratio_star:.5f}")
print("(any value of the ratio is a valid lower bound on the sharp constant)")

print()
for lam in (0.5, 1.0, lam_star, 3.0, 6.0):
    print(f"  lambda {lam:7.4f}: ratio {sobolev.ratio_lower_bound(lam):.5f}")

print()
print(f"{'k':>4} {'quadrature':>14} {'1/(4+k^2)':>14}")
for k in (0, 1, 3, 10):
    got = sobolev.convolution_constant(k)
    print(f"{k:4d} {got:14.10f} {1.0 / (4.0 + k * k):14.10f}")

print()
report = sobolev.algebra_property_test(seed=0, trials=10_000)
print(f"random product checks: {report.trials} trials, "
      f"{report.violations} violations, max ratio {report.max_ratio:.4f}")
