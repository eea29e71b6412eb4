#!/usr/bin/env python3
"""Export the cell data behind the wavelet schematic as CSV.

One row per coset cell of the mother wavelet, its p-scalings and a depth-1
translated wavelet: which sphere |x|_p = p^k the cell sits on, the value's
magnitude, and its phase as a fraction of a full turn.
"""

import argparse
import csv
import sys

from padic_wavelets.wavelets import KozyrevIndex, materialize


def rows_for(p, idx):
    fn = materialize(p, idx)
    for cell, value in fn.cells():
        digits = cell.digits(fn.support_exponent)
        label = "".join(map(str, digits)) or "0"
        if cell.rep == 0:
            sphere = "<=" + str(fn.support_exponent - len(digits))
        else:
            lead = next(i for i, d in enumerate(digits) if d != 0)
            sphere = str(fn.support_exponent - lead)
        polar = value.polar_exact()
        phase_num = polar[2].numerator if polar else ""
        phase_den = polar[2].denominator if polar else ""
        mag = abs(complex(value))
        yield (f"{idx.n}:{','.join(map(str, idx.m_digits))}:{idx.j}",
               label, sphere, f"{mag:.17g}", phase_num, phase_den)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime", type=int, default=2)
    ap.add_argument("--output", default="-")
    args = ap.parse_args()
    p = args.prime

    indices = [
        KozyrevIndex(0),            # mother
        KozyrevIndex(1),            # scaled up by p
        KozyrevIndex(-1),           # scaled down by p
        KozyrevIndex(0, (p - 1,)),  # translated by (p-1)/p
    ]
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ("index", "cell_label", "norm_exponent", "magnitude", "phase_num", "phase_den")
    )
    for idx in indices:
        for row in rows_for(p, idx):
            writer.writerow(row)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
