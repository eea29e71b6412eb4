#!/usr/bin/env python3
"""Sweep the symmetry-algebra relation suites and print residual summaries.

Covers the sl(2) relations, the ladder-operator Witt bracket, the deformed
commutator over a grid of exponents, the semigroup law of the derivative,
and translation commutation in both spectral and kernel form.
"""

import argparse
import random
from fractions import Fraction

from padic_wavelets.functions import LocallyConstantFn, ball_reps
from padic_wavelets.operators import (
    deformed_results,
    semigroup_results,
    sl2_results,
    translation_kernel_residual,
    translation_spectral_results,
    witt_results,
)
from padic_wavelets.wavelets import Window


def summarize(name, results):
    worst = max((r.residual for r in results), default=0.0)
    exact = sum(1 for r in results if r.exact)
    print(f"{name:<28} instances={len(results):5d}  exact={exact:5d}  "
          f"max residual={worst:.3e}")
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime", type=int, default=2)
    ap.add_argument("--n-min", type=int, default=-6)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--witt-range", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    p = args.prime
    window = Window(args.n_min, args.n_max, 1)
    alphas = [Fraction(1, 2), Fraction(1), Fraction(2), 0.3, 1.7]

    worst = 0.0
    worst = max(worst, summarize("sl2", sl2_results(p, window)))
    worst = max(worst, summarize(
        "witt", witt_results(p, window, k_range=args.witt_range)))
    worst = max(worst, summarize("deformed", deformed_results(p, window, alphas)))
    pairs = [(a, b) for a in alphas[:3] for b in alphas[:3]]
    worst = max(worst, summarize("semigroup", semigroup_results(p, window, pairs)))
    worst = max(worst, summarize("translation (spectral)", translation_spectral_results(
        p, Window(args.n_min, args.n_max, 2), Fraction(1, p), alphas[:3])))

    rng = random.Random(args.seed)
    table = {rep: complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
             for rep in ball_reps(p, 1, 2)}
    f = LocallyConstantFn(p, 1, 2, table)
    res = translation_kernel_residual(1.0, f, Fraction(1, p), exact=False)
    kernel_worst = max((abs(complex(v)) for v in res.table.values()), default=0.0)
    print(f"{'translation (kernel)':<28} instances={len(res.table):5d}  "
          f"exact=    0  max residual={kernel_worst:.3e}")
    worst = max(worst, kernel_worst)

    print(f"\noverall worst residual: {worst:.3e}")
    raise SystemExit(0 if worst <= 1e-10 else 2)


if __name__ == "__main__":
    main()
