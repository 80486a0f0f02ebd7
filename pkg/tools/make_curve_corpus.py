"""Regenerate src/nymanlab/data/curve_corpus.csv.

Genuine rows: every genus-1 L-polynomial 1 - aT + qT^2 with a^2 <= 4q for
q in {2, 3, 5, 7}.  Synthetic rows break the Hasse bound while keeping the
functional-equation shape; a = q + 1 is skipped because (1 - T)(1 - qT) only
has roots where the zeta denominator vanishes.
"""

import csv
import math
import sys

SYNTHETIC = [(2, 4), (2, -3), (3, 5), (3, -4), (5, 5), (5, -5), (7, 6), (7, -6)]

w = csv.writer(sys.stdout, lineterminator="\n")
w.writerow(["q", "label", "coefficients"])
w.writerow([2, "curve", "1"])
for q in (2, 3, 5, 7):
    amax = math.isqrt(4 * q)
    for a in range(-amax, amax + 1):
        w.writerow([q, "curve", f"1 {-a} {q}"])
for q, a in SYNTHETIC:
    assert a * a > 4 * q and a != q + 1
    w.writerow([q, "synthetic", f"1 {-a} {q}"])
