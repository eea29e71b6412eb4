"""The Kozyrev wavelet family on Q_p.

A wavelet label (n, m, j) has scale n, translation m in Q_p/Z_p stored by
its fractional digits (m_1, ..., m_k) with m = sum m_i p^(-i), and phase
index j in [1, p-1].  The wavelet itself is

    psi_{n,m,j}(x) = p^(-n/2) * chi(j p^(n-1) x) * [ |p^n x - m|_p <= 1 ],

supported on the coset p^(-n)(m + Z_p) and constant on cosets of
p^(1-n) Z_p.  Alongside evaluation and materialization as cell tables, this
module carries independent piecewise constructors (`closed_form_*`) built
straight from the case tables of the scaled/translated wavelets; those serve
as cross-checks for the evaluation path, never as its implementation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InsufficientPrecisionError,
    InvalidInputError,
    UnsupportedCaseError,
    WindowClipError,
)
from .exact import Cyc
from .functions import (
    DEFAULT_CELL_CAP,
    LocallyConstantFn,
    amp_from_json,
    amp_to_json,
    ball_reps,
    character_amp,
    inner_product,
    reduce_rep,
)
from .padic import PAdicNumber, check_prime, int_to_digits, valp


@dataclass(frozen=True, order=True)
class KozyrevIndex:
    """Wavelet label (n, m, j); trailing zero m-digits are stripped."""

    n: int
    m_digits: tuple = ()
    j: int = 1

    def __post_init__(self):
        digits = tuple(self.m_digits)
        while digits and digits[-1] == 0:
            digits = digits[:-1]
        object.__setattr__(self, "m_digits", digits)
        if self.j < 1:
            raise InvalidInputError("phase index j must be >= 1")

    @property
    def m_depth(self) -> int:
        return len(self.m_digits)


def m_value(idx: KozyrevIndex, p: int) -> Fraction:
    """The canonical coset representative sum m_i p^(-i)."""
    total = Fraction(0)
    for i, d in enumerate(idx.m_digits, start=1):
        total += Fraction(d, p**i)
    return total


def validate_index(p: int, idx: KozyrevIndex) -> KozyrevIndex:
    check_prime(p)
    if not 1 <= idx.j <= p - 1:
        raise InvalidInputError(f"j={idx.j} outside [1, {p - 1}]")
    if any(not 0 <= d < p for d in idx.m_digits):
        raise InvalidInputError("m digits must lie in [0, p-1]")
    return idx


def fractional_digits(q: Fraction, p: int) -> tuple:
    """Digits (m_1, ..., m_t) of the p-adic fractional part of a rational."""
    if q == 0:
        return ()
    b = q.denominator
    t = valp(b, p) if b % p == 0 else 0
    if t == 0:
        return ()
    u = b // p**t
    mod = p**t
    a = (q.numerator * pow(u, -1, mod)) % mod
    return tuple(reversed(int_to_digits(a, p, t)))


def label_translate(idx: KozyrevIndex, b: Fraction, p: int) -> KozyrevIndex:
    """Translation acting on labels: m -> m + b mod Z_p, scale untouched."""
    return KozyrevIndex(idx.n, fractional_digits(m_value(idx, p) + b, p), idx.j)


@dataclass(frozen=True)
class Window:
    """Inclusive scale bounds and maximum fractional depth for m."""

    n_min: int
    n_max: int
    m_depth: int = 1

    def __post_init__(self):
        if self.n_min > self.n_max or self.m_depth < 0:
            raise InvalidInputError("empty window")

    def contains(self, idx: KozyrevIndex) -> bool:
        return self.n_min <= idx.n <= self.n_max and idx.m_depth <= self.m_depth


def enumerate_m_digits(p: int, max_depth: int):
    """All canonical m-digit tuples of depth <= max_depth, sorted by depth."""
    result = [()]
    for depth in range(1, max_depth + 1):
        for i in range(p**depth):
            m = int_to_digits(i, p, depth)
            if m[-1] != 0:
                result.append(m)
    return sorted(result, key=lambda t: (len(t), t))


def enumerate_indices(p: int, window: Window):
    return [
        KozyrevIndex(n, m, j)
        for n in range(window.n_min, window.n_max + 1)
        for m in enumerate_m_digits(p, window.m_depth)
        for j in range(1, p)
    ]


@dataclass
class WaveletExpansion:
    """Sparse coefficient map over wavelet labels inside a window."""

    prime: int
    window: Window
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        check_prime(self.prime)
        for idx in self.coefficients:
            if not self.window.contains(idx):
                raise WindowClipError(idx, f"index {idx} outside window {self.window}")

    def norm_squared(self) -> float:
        return sum(abs(complex(v)) ** 2 for v in self.coefficients.values())


def basis_vector(p: int, window: Window, idx: KozyrevIndex, amp=None) -> WaveletExpansion:
    validate_index(p, idx)
    return WaveletExpansion(p, window, {idx: Cyc.one(p) if amp is None else amp})


# -- evaluation --------------------------------------------------------------


def _digit_at(xi: PAdicNumber, e: int):
    """Digit of xi at exponent e; None when outside the stored window."""
    if xi.is_zero:
        if xi.exact:
            return 0
        return 0 if e < xi.valuation else None
    if e < xi.valuation:
        return 0
    i = e - xi.valuation
    if i < xi.precision:
        return xi.digits[i]
    return None


def evaluate(idx: KozyrevIndex, xi: PAdicNumber) -> Cyc:
    """Exact wavelet value at a finite-precision point.

    The indicator needs the digits of xi below exponent -n and the character
    one more digit (exponent -n); if those are not all stored and the
    indicator is not already decidably false, the point is underdetermined.
    """
    p = xi.prime
    validate_index(p, idx)
    n, j, m = idx.n, idx.j, idx.m_digits
    depth = len(m)

    lo = -n - max(depth, 1)
    if not xi.is_zero:
        lo = min(lo, xi.valuation)
    undecided = False
    for e in range(lo, -n):
        i = -(e + n)  # m digit index at this exponent
        want = m[i - 1] if 1 <= i <= depth else 0
        got = _digit_at(xi, e)
        if got is None:
            undecided = True
        elif got != want:
            return Cyc.zero(p)
    if undecided:
        raise InsufficientPrecisionError(
            f"digits of xi below exponent {-n} are needed to place it against m"
        )
    lead = _digit_at(xi, -n)
    if lead is None:
        raise InsufficientPrecisionError(
            f"the digit of xi at exponent {-n} is needed for the character"
        )
    phase_arg = Fraction(j) * (m_value(idx, p) + lead) / p
    return Cyc.half_power(p, -n) * character_amp(p, phase_arg)


def evaluate_at_rational(p: int, idx: KozyrevIndex, q: Fraction) -> Cyc:
    """Wavelet value at an exact rational point."""
    validate_index(p, idx)
    n, j = idx.n, idx.j
    arg = Fraction(p) ** n * q - m_value(idx, p)
    if arg != 0 and arg.denominator % p == 0:
        return Cyc.zero(p)
    return Cyc.half_power(p, -n) * character_amp(p, Fraction(j) * Fraction(p) ** (n - 1) * q)


def natural_support_exponent(idx: KozyrevIndex) -> int:
    return idx.n + idx.m_depth


def natural_resolution(idx: KozyrevIndex) -> int:
    return 1 - idx.n


def materialize(p: int, idx: KozyrevIndex, extra_depth: int = 0,
                cap: int = DEFAULT_CELL_CAP) -> LocallyConstantFn:
    """Cell table of the wavelet at its natural support and resolution.

    The support ball exponent is n + depth(m): for m != 0 the support is the
    single coset p^(-n)(m + Z_p) sitting on the sphere |x| = p^(n+depth).
    """
    validate_index(p, idx)
    if extra_depth < 0:
        raise InvalidInputError("extra_depth must be >= 0")
    support = natural_support_exponent(idx)
    resolution = natural_resolution(idx) + extra_depth
    table = {}
    for rep in ball_reps(p, support, resolution, cap):
        v = evaluate_at_rational(p, idx, rep)
        if not v.is_zero:
            table[rep] = v
    return LocallyConstantFn(p, support, resolution, table)


def mother(p: int, j: int = 1, extra_depth: int = 0) -> LocallyConstantFn:
    return materialize(p, KozyrevIndex(0, (), j), extra_depth)


# -- analysis / synthesis ----------------------------------------------------


def analyze(f: LocallyConstantFn, window: Window,
             cap: int = DEFAULT_CELL_CAP) -> WaveletExpansion:
    """Project onto every wavelet in the window; clipping is silent."""
    p = f.prime
    coeffs = {}
    for idx in enumerate_indices(p, window):
        c = inner_product(materialize(p, idx, cap=cap), f)
        if isinstance(c, Cyc):
            if not c.is_zero:
                coeffs[idx] = c
        elif c != 0:
            coeffs[idx] = c
    return WaveletExpansion(p, window, coeffs)


def synthesize(expansion: WaveletExpansion, resolution: int | None = None,
               cap: int = DEFAULT_CELL_CAP) -> LocallyConstantFn:
    """Sum coeff * wavelet over the expansion at a common resolution."""
    p = expansion.prime
    finest = 1 - expansion.window.n_min
    if resolution is None:
        resolution = finest
    if resolution < finest:
        raise InvalidInputError(
            f"resolution {resolution} is coarser than the window's finest {finest}"
        )
    support = max(
        [natural_support_exponent(i) for i in expansion.coefficients],
        default=max(0, -resolution),
    )
    support = max(support, -resolution)
    total = LocallyConstantFn(p, support, resolution, {})
    for idx in sorted(expansion.coefficients):
        term = materialize(p, idx, cap=cap).refine_to(resolution, cap).scaled(
            expansion.coefficients[idx]
        )
        total = total + term
    return total


def expansion_to_json(e: WaveletExpansion) -> dict:
    coeffs = []
    for idx in sorted(e.coefficients):
        entry = {"n": idx.n, "m_digits": list(idx.m_digits), "j": idx.j}
        entry.update(amp_to_json(e.coefficients[idx]))
        coeffs.append(entry)
    w = e.window
    return {
        "prime": e.prime,
        "window": {"n_min": w.n_min, "n_max": w.n_max, "m_depth": w.m_depth},
        "coefficients": coeffs,
    }


def expansion_from_json(data: dict) -> WaveletExpansion:
    try:
        p = data["prime"]
        w = data["window"]
        window = Window(w["n_min"], w["n_max"], w["m_depth"])
        coeffs = {}
        for entry in data["coefficients"]:
            idx = KozyrevIndex(entry["n"], tuple(entry["m_digits"]), entry["j"])
            coeffs[idx] = amp_from_json(p, entry)
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed expansion record: {exc}") from exc
    return WaveletExpansion(p, window, coeffs)


# -- closed-form piecewise constructions ------------------------------------
#
# These build the scaled/translated wavelets directly from their case tables
# (which sphere, which digit conditions, which root of unity) and are used as
# independent cross-checks against evaluate/materialize + translate/scale_arg.


def closed_form_scaled(p: int, n: int, j: int = 1) -> LocallyConstantFn:
    """The n-scaled mother wavelet, built from its piecewise display:
    p^(-n/2) on |x| < p^n and p^(-n/2) * w_p^(j x0) on the sphere |x| = p^n
    (x0 the leading digit).  The two cases overlap as usually printed; the
    inner one is taken strict, matching the defining formula."""
    check_prime(p)
    if not 1 <= j <= p - 1:
        raise InvalidInputError("j outside [1, p-1]")
    mag = Cyc.half_power(p, -n)
    unit = Fraction(p) ** (-n)
    table = {Fraction(0): mag}
    for c in range(1, p):
        table[c * unit] = mag * character_amp(p, Fraction(j * c, p))
    return LocallyConstantFn(p, n, 1 - n, table)


def closed_form_label_translated(p: int, n: int, m_digits, j: int = 1) -> LocallyConstantFn:
    """The wavelet with label (n, m, j), m != 0, built from its case table.

    Support is the subset of the sphere |x| = p^(n+k) whose leading digits
    reproduce m; on the sub-cell whose first free digit is d the value is
    p^(-n/2) * e(j*(m+d)/p).  For depth-1 m this is the familiar display
    w_{p^2}^(j m0) * w_p^(j x1) with x0 = m0 forced.
    """
    idx = validate_index(p, KozyrevIndex(n, tuple(m_digits), j))
    if not idx.m_digits:
        raise UnsupportedCaseError("label translation by 0: use closed_form_scaled")
    mhat = m_value(idx, p)
    scale = Fraction(p) ** (-n)
    mag = Cyc.half_power(p, -n)
    table = {}
    for d in range(p):
        rep = (mhat + d) * scale
        table[rep] = mag * character_amp(p, Fraction(j) * (mhat + d) / p)
    return LocallyConstantFn(p, n + idx.m_depth, 1 - n, table)


def closed_form_scaled_translated(p: int, n: int, m0: int, j: int = 1,
                                  int_digits: tuple = ()) -> LocallyConstantFn:
    """The n-scaled wavelet translated in its argument by b = m0/p + (integer
    digits), built from the case tables.

    n = 1: w_p^(-j m0) * p^(-1/2) on |x| <= 1, p^(-1/2) * w_p^(j(x0-m0)) on
    the sphere |x| = p; i.e. the scaled wavelet times the global phase
    w_p^(-j m0).

    n >= 2: identical to the scaled wavelet.  The translation phase is
    chi(-j * m0 * p^(n-2)) = 1, so no case picks up a phase; a printed
    version of this table that keeps w_p^(-j m0) on the inner region is
    inconsistent with its own sphere case and with direct evaluation.

    n < 0: supported on the sphere |x| = p where the digits x_0..x_{|n|}
    match b; the value is p^(|n|/2), twisted by w_p^(j(x_{|n|+1}-b_{|n|+1}))
    when the first digit past the matching window differs.
    """
    check_prime(p)
    if not 1 <= j <= p - 1:
        raise InvalidInputError("j outside [1, p-1]")
    if not 1 <= m0 <= p - 1:
        raise UnsupportedCaseError("translation must have a nonzero depth-1 digit")
    if n == 0:
        raise UnsupportedCaseError(
            "n = 0 argument translation is not in the case table; "
            "use closed_form_label_translated for the label-translated wavelet"
        )
    if n >= 1:
        scaled = closed_form_scaled(p, n, j)
        if n >= 2:
            return scaled
        # n = 1: global phase w_p^(-j m0) on every case
        phase = character_amp(p, Fraction(-j * m0, p))
        table = {rep: v * phase for rep, v in scaled.table.items()}
        return LocallyConstantFn(p, scaled.support_exponent, scaled.resolution, table)

    # n < 0: need the integer digits of b up to exponent |n|
    size = -n + 1
    b_int = tuple(int_digits) + (0,) * max(0, size - len(int_digits))
    if any(not 0 <= d < p for d in b_int):
        raise InvalidInputError("integer digits of the translation out of range")
    mag = Cyc.half_power(p, -n)
    resolution = 1 - n
    table = {}
    match = (m0,) + b_int[: -n]  # digits at exponents -1 .. |n|-1
    for d in range(p):
        digits = match + (d,)
        rep = sum(Fraction(di) * Fraction(p) ** (e - 1) for e, di in enumerate(digits))
        delta = (d - b_int[-n]) % p
        v = mag if delta == 0 else mag * character_amp(p, Fraction(j * delta, p))
        table[reduce_rep(rep, p, resolution)] = v
    return LocallyConstantFn(p, 1, resolution, table)
