#!/usr/bin/env python3
"""Walk the Monna-map bridge from Q_p wavelets to Haar wavelets on [0, 1].

For every wavelet supported inside Z_p up to a chosen depth, push it through
the digit-reversing map, locate the matching generalized Haar wavelet, and
print the representative phase relating the two.  Then tabulate how the
monomial expansion coefficients realize the scaling eigenvalue p^(a(1-n)).
"""

import argparse
from fractions import Fraction

from padic_wavelets.exact import Cyc
from padic_wavelets.haar import (
    HaarIndex,
    haar_index_for,
    haar_step,
    monna_pushforward,
    monomial_coefficient,
    pushforward_phase,
    rho_exponent,
    step_equal,
)
from padic_wavelets.wavelets import KozyrevIndex, enumerate_m_digits


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime", type=int, default=2)
    ap.add_argument("--min-scale", type=int, default=-2)
    ap.add_argument("--degree", type=int, default=2)
    args = ap.parse_args()
    p = args.prime

    print(f"p = {p}: pushforwards of wavelets supported in Z_p")
    print(f"{'label':<18} {'haar (L,t)':<12} {'phase':<12} "
          f"{'match':<6} rho exponent")
    for n in range(args.min_scale, 1):
        for m in enumerate_m_digits(p, -n):
            idx = KozyrevIndex(n, m, 1)
            if idx.n + idx.m_depth > 0:
                continue
            hidx = haar_index_for(p, idx)
            phase = pushforward_phase(p, idx)
            match = step_equal(
                monna_pushforward(p, idx), haar_step(p, hidx).scaled(phase)
            )
            enc = phase.single_term()
            phase_text = f"{enc[2].numerator}/{enc[2].denominator}"
            label = f"({idx.n},{','.join(map(str, m)) or '0'},1)"
            print(f"{label:<18} ({hidx.level},{hidx.translate})"
                  f"{'':<6} {phase_text:<12} {str(match):<6} "
                  f"{rho_exponent(p, idx)}")

    degree = args.degree
    n = degree + 1
    print(f"\nmonomial x^{degree}: coefficient ratio across levels "
          f"(expected p^(1/2-n) = p^{Fraction(1, 2) - n})")
    for level in range(3):
        lo = monomial_coefficient(p, degree, HaarIndex(level, 0))
        hi = monomial_coefficient(p, degree, HaarIndex(level + 1, 0))
        ratio = abs(complex(hi)) / abs(complex(lo))
        eigen = complex(Cyc.half_power(p, 1 - 2 * n))
        print(f"  level {level} -> {level + 1}: ratio {ratio:.12g} "
              f"(target {eigen.real:.12g})")


if __name__ == "__main__":
    main()
