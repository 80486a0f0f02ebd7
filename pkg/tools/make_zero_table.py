"""Regenerate the bundled table of zeta zero ordinates (requires mpmath).

Usage: python tools/make_zero_table.py 120 > src/nymanlab/data/zeta_zeros.txt
"""
import sys

import mpmath

mpmath.mp.dps = 25


def main(count):
    print(f"# imaginary parts of the first {count} nontrivial zeros of zeta(s)")
    for n in range(1, count + 1):
        print(mpmath.nstr(mpmath.zetazero(n).imag, 15, strip_zeros=False))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 120)
