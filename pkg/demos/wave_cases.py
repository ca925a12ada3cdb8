"""The solvable transport example: how sharp is the norm guarantee?

The lifespan is exact here, so the guarantee t_N can be compared against
the truth theta case by case. Sign structure decides everything: for
even powers only the positive part of the datum can blow up.
"""

import math

import numpy as np

from evocontrol import wave

cases = [
    ("i   (odd power)", wave.WaveDatum(sup_pos=0.4, sup_abs=1.0, p=3)),
    ("i   (sup attained)", wave.WaveDatum(sup_pos=1.0, sup_abs=1.0, p=2)),
    ("ii  (positive part 1/2)", wave.WaveDatum(sup_pos=0.5, sup_abs=1.0, p=2)),
    ("iii (nonpositive)", wave.WaveDatum(sup_pos=0.0, sup_abs=1.0, p=2)),
]

print(f"{'case':<26} {'t_N':>8} {'theta':>8}")
for name, datum in cases:
    tn, theta = wave.wave_tn(datum), wave.wave_theta(datum)
    t_text = "inf" if math.isinf(theta) else f"{theta:8.4f}"
    print(f"{name:<26} {tn:8.4f} {t_text:>8}")

print()
print("sampled datum: the exact solution stays under the certified radius")
x = np.linspace(-3.0, 3.0, 257)
values = 0.9 * np.sin(x) * np.exp(-x * x)
datum = wave.WaveDatum.from_samples(values, p=2)
tn = wave.wave_tn(datum)
for t in (0.0, 0.5 * tn, 0.9 * tn):
    sup = wave.exact_solution_sup(values, 2, t)
    bound = wave.wave_growth_bound(datum, t)
    print(f"  t = {t:7.4f}: sup |u| = {sup:.4f} <= R = {bound:.4f}")
