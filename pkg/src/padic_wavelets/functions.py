"""Locally constant complex functions on Q_p as sparse coset-cell tables.

A function is stored on the ball |x|_p <= p^M at resolution K: it is constant
on each coset r + p^K Z_p and zero outside the ball.  Cells are keyed by the
canonical representative r (the rational whose base-p digits live strictly
below exponent K), so tables with different declared supports compare
directly.  Missing keys mean exact zero.

Cell values are exact `Cyc` amplitudes or floating complex; sums are taken in
deterministic sorted-cell order so results do not depend on table layout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import EnumerationCapError, InvalidInputError, PrimeMismatchError
from .exact import Cyc, CycSum, amp_equal, conj
from .padic import (
    PAdicNumber,
    RationalPhase,
    check_prime,
    frac_valp,
    int_to_digits,
    digits_to_int,
    rational_character_phase,
    valp,
)

DEFAULT_CELL_CAP = 10**6


@lru_cache(maxsize=1 << 18)
def reduce_rep(q: Fraction, p: int, resolution: int) -> Fraction:
    """Canonical representative of q + p^K Z_p: digits below exponent K."""
    if q == 0:
        return Fraction(0)
    s = valp(q.denominator, p) if q.denominator % p == 0 else 0
    if q.denominator != p**s:
        raise InvalidInputError("cell representatives need p-power denominators")
    span = resolution + s
    if span <= 0:
        return Fraction(0)
    return Fraction(q.numerator % p**span, p**s)


def rep_digits(q: Fraction, p: int, support_exponent: int, resolution: int) -> list[int]:
    """Digits of the representative at exponents -M .. K-1."""
    scaled = q * Fraction(p) ** support_exponent
    count = support_exponent + resolution
    if scaled.denominator != 1 or count < 0:
        raise InvalidInputError("representative does not fit the support ball")
    n = scaled.numerator
    if not 0 <= n < p**count:
        raise InvalidInputError("representative does not fit the support ball")
    return list(int_to_digits(n, p, count))


def rep_from_digits(digits, p: int, support_exponent: int) -> Fraction:
    return Fraction(digits_to_int(digits, p)) * Fraction(p) ** (-support_exponent)


@dataclass(frozen=True)
class CosetCell:
    """The ball rep + p^K Z_p, of Haar measure p^(-K)."""

    prime: int
    resolution: int
    rep: Fraction

    @property
    def measure(self) -> Fraction:
        return Fraction(self.prime) ** (-self.resolution)

    def digits(self, support_exponent: int) -> list[int]:
        return rep_digits(self.rep, self.prime, support_exponent, self.resolution)

    def contains(self, q: Fraction) -> bool:
        return reduce_rep(q, self.prime, self.resolution) == self.rep


def ball_reps(p: int, support_exponent: int, resolution: int,
              cap: int = DEFAULT_CELL_CAP) -> list[Fraction]:
    """Canonical representatives of the p^(M+K) cells covering |x| <= p^M."""
    count_exp = support_exponent + resolution
    if count_exp < 0:
        raise InvalidInputError("support_exponent + resolution must be >= 0")
    count = p**count_exp
    if count > cap:
        raise EnumerationCapError(count, cap)
    unit = Fraction(p) ** (-support_exponent)
    return [i * unit for i in range(count)]


def enumerate_cells(p: int, support_exponent: int, resolution: int,
                    cap: int = DEFAULT_CELL_CAP) -> list[CosetCell]:
    check_prime(p)
    return [
        CosetCell(p, resolution, rep)
        for rep in ball_reps(p, support_exponent, resolution, cap)
    ]


@dataclass
class LocallyConstantFn:
    """Table function: support ball exponent M, resolution exponent K.

    Treat instances as immutable; operations always build new tables.
    """

    prime: int
    support_exponent: int
    resolution: int
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        check_prime(self.prime)

    def cells(self):
        for rep in sorted(self.table):
            yield CosetCell(self.prime, self.resolution, rep), self.table[rep]

    def value_at(self, q: Fraction):
        if q != 0 and frac_valp(q, self.prime) < -self.support_exponent:
            return Cyc.zero(self.prime)
        key = reduce_rep(q, self.prime, self.resolution)
        return self.table.get(key, Cyc.zero(self.prime))

    def is_exact(self) -> bool:
        return all(isinstance(v, Cyc) for v in self.table.values())

    def refine_to(self, resolution: int, cap: int = DEFAULT_CELL_CAP) -> "LocallyConstantFn":
        """Split every cell to the finer resolution; values are unchanged."""
        if resolution < self.resolution:
            raise InvalidInputError("refinement cannot lower the resolution")
        if resolution == self.resolution:
            return self
        p = self.prime
        splits = p ** (resolution - self.resolution)
        if splits * max(len(self.table), 1) > cap:
            raise EnumerationCapError(splits * len(self.table), cap)
        step = Fraction(p) ** self.resolution
        out = {}
        for rep, v in self.table.items():
            for j in range(splits):
                out[rep + j * step] = v
        return LocallyConstantFn(p, self.support_exponent, resolution, out)

    def with_support(self, support_exponent: int) -> "LocallyConstantFn":
        if support_exponent < self.support_exponent:
            raise InvalidInputError("cannot shrink the declared support ball")
        return LocallyConstantFn(self.prime, support_exponent, self.resolution, dict(self.table))

    def scaled(self, factor) -> "LocallyConstantFn":
        if isinstance(factor, int):
            factor = Fraction(factor)
        return LocallyConstantFn(
            self.prime,
            self.support_exponent,
            self.resolution,
            {r: v * factor for r, v in self.table.items()},
        )

    def __add__(self, other: "LocallyConstantFn") -> "LocallyConstantFn":
        if not isinstance(other, LocallyConstantFn):
            return NotImplemented
        if other.prime != self.prime:
            raise PrimeMismatchError("functions over different primes")
        res = max(self.resolution, other.resolution)
        f = self.refine_to(res)
        g = other.refine_to(res)
        table = dict(f.table)
        for r, v in g.table.items():
            if r in table:
                total = table[r] + v
                if amp_equal(total, Cyc.zero(self.prime)) and isinstance(total, Cyc):
                    del table[r]
                else:
                    table[r] = total
            else:
                table[r] = v
        return LocallyConstantFn(
            self.prime,
            max(self.support_exponent, other.support_exponent),
            res,
            table,
        )

    def __sub__(self, other: "LocallyConstantFn") -> "LocallyConstantFn":
        return self + other.scaled(Fraction(-1))


def indicator_fn(p: int, ball_exponent: int = 0) -> LocallyConstantFn:
    """Indicator of the ball |x|_p <= p^ball_exponent (one cell of that size)."""
    return LocallyConstantFn(
        p, ball_exponent, -ball_exponent, {Fraction(0): Cyc.one(p)}
    )


def translate(f: LocallyConstantFn, shift) -> LocallyConstantFn:
    """x -> f(x - b).  A `PAdicNumber` shift is read as the exact rational
    its digits denote."""
    p = f.prime
    if isinstance(shift, PAdicNumber):
        if shift.prime != p:
            raise PrimeMismatchError("translation over a different prime")
        b = shift.to_rational()
    else:
        b = Fraction(shift)
    if b == 0:
        return f
    support = max(f.support_exponent, -frac_valp(b, p))
    table = {reduce_rep(r + b, p, f.resolution): v for r, v in f.table.items()}
    return LocallyConstantFn(p, support, f.resolution, table)


def scale_arg(f: LocallyConstantFn, e: int) -> LocallyConstantFn:
    """x -> f(p^e x); the support ball grows to p^(M+e), resolution drops to K-e."""
    p = f.prime
    unit = Fraction(p) ** (-e)
    table = {r * unit: v for r, v in f.table.items()}
    return LocallyConstantFn(p, f.support_exponent + e, f.resolution - e, table)


def integrate(f: LocallyConstantFn):
    """Haar integral: sum of cell values times the cell measure p^(-K)."""
    acc = CycSum(f.prime)
    for rep in sorted(f.table):
        acc.add(f.table[rep])
    return acc.result() * (Fraction(f.prime) ** (-f.resolution))


def inner_product(f: LocallyConstantFn, g: LocallyConstantFn):
    """Hermitian pairing <f, g> = integral of conj(f) * g.

    The first slot is conjugated; with complex cell values this is what makes
    the wavelet family orthonormal rather than merely bilinear-orthogonal.
    """
    if f.prime != g.prime:
        raise PrimeMismatchError("functions over different primes")
    p = f.prime
    if f.resolution >= g.resolution:
        fine, coarse, conj_fine = f, g, True
    else:
        fine, coarse, conj_fine = g, f, False
    coarse_res = coarse.resolution
    lookup = coarse.table.get
    products = []
    for rep in sorted(fine.table):
        v_coarse = lookup(reduce_rep(rep, p, coarse_res))
        if v_coarse is None:
            continue
        v_fine = fine.table[rep]
        if conj_fine:
            products.append(conj(v_fine) * v_coarse)
        else:
            products.append(conj(v_coarse) * v_fine)
    if not products:
        return Cyc.zero(p)
    acc = CycSum(p)
    for term in products:
        acc.add(term)
    return acc.result() * (Fraction(p) ** (-fine.resolution))


@lru_cache(maxsize=65536)
def _char_root(p: int, num: int, den: int) -> Cyc:
    from .padic import RationalPhase

    return Cyc.root_of_unity(p, RationalPhase(num, den))


def character_amp(p: int, q: Fraction) -> Cyc:
    """chi(q) = exp(2 pi i {q}_p) as an exact amplitude."""
    ph = rational_character_phase(q, p)
    return _char_root(p, ph.numerator, ph.denominator)


def fourier(f: LocallyConstantFn, cap: int = DEFAULT_CELL_CAP) -> LocallyConstantFn:
    """Fourier transform; the output lives on |w| <= p^K at resolution M.

    On that ball the cellwise-constant integrand makes the finite sum exact;
    values outside it are not represented.
    """
    return _fourier_impl(f, -1, cap)


def inverse_fourier(f: LocallyConstantFn, cap: int = DEFAULT_CELL_CAP) -> LocallyConstantFn:
    return _fourier_impl(f, +1, cap)


def _fourier_impl(f: LocallyConstantFn, sign: int, cap: int) -> LocallyConstantFn:
    p = f.prime
    out_support, out_res = f.resolution, f.support_exponent
    measure = Fraction(p) ** (-f.resolution)
    total_exp = f.support_exponent + f.resolution
    if total_exp < 0:
        raise InvalidInputError("support_exponent + resolution must be >= 0")
    count = p**total_exp
    if count > cap:
        raise EnumerationCapError(count, cap)
    out_unit = Fraction(p) ** (-out_support)
    if not f.is_exact():
        return _fourier_float(f, sign, out_support, out_res, out_unit, count)

    # integerized exact path: for w = iw*p^(-K) and r = ir*p^(-M) the phase
    # of chi(w*r) is (iw*ir mod p^(M+K)) / p^(M+K); work at a common
    # cyclotomic level over integer coefficients (one common denominator)
    # and normalize once per output cell
    in_scale = Fraction(p) ** f.support_exponent
    items = []
    level = total_exp
    den = 1
    for r in sorted(f.table):
        v = f.table[r]
        items.append((int(r * in_scale), v))
        level = max(level, v.level)
        for a, b in v.terms.values():
            den = den * a.denominator // gcd(den, a.denominator)
            den = den * b.denominator // gcd(den, b.denominator)
    modulus = p**level
    lift_root = p ** (level - total_exp)
    lifted = [
        (
            ir,
            [
                (
                    e * (p ** (level - v.level)),
                    int(a * den),
                    int(b * den),
                )
                for e, (a, b) in v.terms.items()
            ],
        )
        for ir, v in items
    ]
    scale = measure / den
    out = {}
    use_arrays = modulus <= 1 << 20
    for iw in range(count):
        if use_arrays:
            acc_a = [0] * modulus
            acc_b = [0] * modulus
            touched = set()
            for ir, terms in lifted:
                shift = (sign * iw * ir % count) * lift_root
                for e, a, b in terms:
                    key = shift + e
                    if key >= modulus:
                        key -= modulus
                    acc_a[key] += a
                    acc_b[key] += b
                    touched.add(key)
            terms = {
                e: (Fraction(acc_a[e]), Fraction(acc_b[e]))
                for e in touched
                if acc_a[e] or acc_b[e]
            }
        else:
            raw_a: dict = {}
            raw_b: dict = {}
            for ir, terms in lifted:
                shift = (sign * iw * ir % count) * lift_root
                for e, a, b in terms:
                    key = (shift + e) % modulus
                    raw_a[key] = raw_a.get(key, 0) + a
                    raw_b[key] = raw_b.get(key, 0) + b
            terms = {
                e: (Fraction(raw_a[e]), Fraction(raw_b.get(e, 0)))
                for e in raw_a
            }
        total = Cyc(p, level, terms) * scale
        if not total.is_zero:
            out[iw * out_unit] = total
    return LocallyConstantFn(p, out_support, out_res, out)


def _fourier_float(f: LocallyConstantFn, sign: int, out_support: int,
                   out_res: int, out_unit: Fraction, count: int) -> LocallyConstantFn:
    import cmath

    p = f.prime
    in_scale = Fraction(p) ** f.support_exponent
    items = [(int(r * in_scale), complex(v)) for r, v in sorted(f.table.items())]
    roots = [cmath.exp(2j * cmath.pi * k / count) for k in range(count)]
    measure = float(p) ** (-f.resolution)
    out = {}
    for iw in range(count):
        total = 0j
        for ir, v in items:
            total += roots[sign * iw * ir % count] * v
        out[iw * out_unit] = total * measure
    return LocallyConstantFn(p, out_support, out_res, out)


def fn_equal(f: LocallyConstantFn, g: LocallyConstantFn, tol: float = 0.0) -> bool:
    """Pointwise equality; exact when both tables are exact."""
    if f.prime != g.prime:
        return False
    res = max(f.resolution, g.resolution)
    a = f.refine_to(res)
    b = g.refine_to(res)
    zero = Cyc.zero(f.prime)
    for rep in set(a.table) | set(b.table):
        if not amp_equal(a.table.get(rep, zero), b.table.get(rep, zero), tol):
            return False
    return True


def support_measure(f: LocallyConstantFn, tol: float = 0.0) -> Fraction:
    """Total Haar measure of the cells carrying a nonzero value."""
    count = sum(1 for v in f.table.values() if not amp_equal(v, Cyc.zero(f.prime), tol))
    return count * Fraction(f.prime) ** (-f.resolution)


# -- JSON encoding of cell values and whole functions -----------------------


def amp_to_json(v) -> dict:
    if isinstance(v, Cyc):
        term = v.as_phase_multiple()
        if term is not None:
            a, b, phase = term
            if b == 0:
                mag = a
                if mag < 0:
                    mag = -mag
                    phase = phase + RationalPhase(1, 2)
                return {
                    "mag_num": mag.numerator,
                    "mag_den": mag.denominator,
                    "phase_num": phase.numerator,
                    "phase_den": phase.denominator,
                }
    z = complex(v)
    return {"re": z.real, "im": z.imag}


def amp_from_json(p: int, obj: dict):
    if "mag_num" in obj:
        mag = Fraction(obj["mag_num"], obj["mag_den"])
        phase = RationalPhase(obj["phase_num"], obj["phase_den"])
        try:
            return Cyc.root_of_unity(p, phase) * mag
        except InvalidInputError:
            return mag * phase.value()
    return complex(obj["re"], obj["im"])


def fn_to_json(f: LocallyConstantFn) -> dict:
    cells = []
    for cell, v in f.cells():
        entry = {"digits": cell.digits(f.support_exponent)}
        entry.update(amp_to_json(v))
        cells.append(entry)
    return {
        "prime": f.prime,
        "support_exponent": f.support_exponent,
        "resolution_exponent": f.resolution,
        "cells": cells,
    }


def fn_from_json(data: dict) -> LocallyConstantFn:
    try:
        p = data["prime"]
        m = data["support_exponent"]
        k = data["resolution_exponent"]
        cells = data["cells"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed function record: missing {exc}") from exc
    table = {}
    for i, entry in enumerate(cells):
        try:
            rep = rep_from_digits(entry["digits"], p, m)
            table[rep] = amp_from_json(p, entry)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed cell record at index {i}: {exc}") from exc
    return LocallyConstantFn(p, m, k, table)
