"""Finite-precision p-adic numbers.

A nonzero element of Q_p is stored as a valuation N together with K base-p
digits (d0, d1, ...), d0 != 0, standing for

    p^N * (d0 + d1*p + d2*p^2 + ... + d_{K-1}*p^{K-1}) + O(p^{N+K}).

Digits beyond the stored window are unknown; digits below the valuation are
exactly zero.  All values are immutable and all operations are pure, so they
may be shared freely between threads.  Negative rationals are represented by
their complement digits (15 = -1 mod 2^4 and so on), not by a sign flag.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InvalidInputError, PrimeMismatchError

_PRIMES: set[int] = set()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n in _PRIMES:
        return True
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    _PRIMES.add(n)
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidInputError(f"{p!r} is not a prime")
    return p


def valp(n: int, p: int) -> int:
    """Exponent of the largest power of p dividing the nonzero integer n."""
    if n == 0:
        raise InvalidInputError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def frac_valp(q: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    return valp(q.numerator, p) - valp(q.denominator, p)


def int_to_digits(n: int, p: int, count: int) -> tuple[int, ...]:
    """Base-p digits of n, least significant first, padded to `count`."""
    out = []
    for _ in range(count):
        n, r = divmod(n, p)
        out.append(r)
    return tuple(out)


def digits_to_int(digits, p: int) -> int:
    n = 0
    for d in reversed(digits):
        n = n * p + d
    return n


@dataclass(frozen=True, order=True)
class RationalPhase:
    """An element k/d of Q/Z, denoting the unit complex number e^(2*pi*i*k/d).

    Stored reduced with 0 <= k < d; addition is the group law of Q/Z, which
    mirrors multiplication of the corresponding roots of unity.
    """

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise InvalidInputError("phase denominator must be positive")
        num = self.numerator % self.denominator
        g = gcd(num, self.denominator)
        object.__setattr__(self, "numerator", num // g)
        object.__setattr__(self, "denominator", self.denominator // g)

    @classmethod
    def from_fraction(cls, q: Fraction) -> "RationalPhase":
        return cls(q.numerator, q.denominator)

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def value(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.numerator / self.denominator)

    def __add__(self, other: "RationalPhase") -> "RationalPhase":
        return RationalPhase.from_fraction(self.as_fraction() + other.as_fraction())

    def __neg__(self) -> "RationalPhase":
        return RationalPhase(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalPhase") -> "RationalPhase":
        return self + (-other)

    def times(self, k: int) -> "RationalPhase":
        return RationalPhase(self.numerator * k, self.denominator)


@dataclass(frozen=True)
class PAdicNumber:
    """A finite-precision element of Q_p.

    For zero values `digits` is empty; `exact` distinguishes a true zero from
    one produced by full digit cancellation, in which case `valuation` only
    records a lower bound on the true valuation.
    """

    prime: int
    valuation: int
    digits: tuple[int, ...]
    exact: bool = True

    def __post_init__(self):
        check_prime(self.prime)
        if self.digits:
            if self.digits[0] == 0:
                raise InvalidInputError("leading digit must be nonzero")
            if any(not (0 <= d < self.prime) for d in self.digits):
                raise InvalidInputError("digits must lie in [0, p-1]")

    @classmethod
    def zero(cls, p: int) -> "PAdicNumber":
        return cls(p, 0, ())

    @property
    def is_zero(self) -> bool:
        return not self.digits

    @property
    def precision(self) -> int:
        return len(self.digits)

    def norm(self) -> Fraction:
        """The p-adic absolute value p^(-valuation); |0| = 0."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.prime) ** (-self.valuation)

    def unit_int(self) -> int:
        return digits_to_int(self.digits, self.prime)

    def to_rational(self) -> Fraction:
        """The exact rational denoted by the stored digits."""
        p = self.prime
        return sum(
            (Fraction(d) * Fraction(p) ** (self.valuation + i) for i, d in enumerate(self.digits)),
            Fraction(0),
        )

    def fractional_part(self) -> Fraction:
        """Sum of the digits sitting at negative powers of p; lies in [0, 1)."""
        p = self.prime
        total = Fraction(0)
        for i, d in enumerate(self.digits):
            e = self.valuation + i
            if e < 0:
                total += Fraction(d) * Fraction(p) ** e
        return total

    def character_phase(self) -> RationalPhase:
        """Phase of the additive character: exp(2*pi*i*{x}_p)."""
        return RationalPhase.from_fraction(self.fractional_part())

    def monna(self) -> Fraction:
        """Digit-reversing Monna image: sum d_m p^m maps to sum d_m p^(-m-1)."""
        p = self.prime
        total = Fraction(0)
        for i, d in enumerate(self.digits):
            e = self.valuation + i
            total += Fraction(d) * Fraction(p) ** (-e - 1)
        return total

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "valuation": self.valuation,
            "digits": list(self.digits),
            "precision": self.precision,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PAdicNumber":
        return cls(data["prime"], data["valuation"], tuple(data["digits"]))

    def __str__(self) -> str:
        p, n = self.prime, self.valuation
        if self.is_zero:
            return "0" if self.exact else f"0 ~ O({p}^{n})"
        parts = []
        for i, d in enumerate(self.digits):
            if i == 0:
                parts.append(str(d))
            elif d == 0:
                continue
            elif i == 1:
                parts.append(f"{d}*{p}")
            else:
                parts.append(f"{d}*{p}^{i}")
        body = " + ".join(parts)
        return f"{p}^{n} * ({body}) ~ O({p}^{n + self.precision})"

    def _require_same_prime(self, other: "PAdicNumber") -> None:
        if self.prime != other.prime:
            raise PrimeMismatchError(
                f"cannot combine p={self.prime} with p={other.prime}"
            )

    def __add__(self, other: "PAdicNumber") -> "PAdicNumber":
        if not isinstance(other, PAdicNumber):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other: "PAdicNumber") -> "PAdicNumber":
        if not isinstance(other, PAdicNumber):
            return NotImplemented
        return add(self, neg(other))

    def __mul__(self, other: "PAdicNumber") -> "PAdicNumber":
        if not isinstance(other, PAdicNumber):
            return NotImplemented
        return mul(self, other)

    def __neg__(self) -> "PAdicNumber":
        return neg(self)


def from_rational(num: int, den: int, p: int, precision: int) -> PAdicNumber:
    """K-digit expansion of num/den; valuation = ord_p(num) - ord_p(den).

    The denominator's unit part is inverted modulo p^K, so negative and
    non-terminating rationals come out as complement digits.
    """
    check_prime(p)
    if den == 0:
        raise InvalidInputError("denominator must be nonzero")
    if precision < 1:
        raise InvalidInputError("precision must be >= 1")
    if num == 0:
        return PAdicNumber.zero(p)
    vn, vd = valp(num, p), valp(den, p)
    u = num // p**vn
    v = den // p**vd
    modulus = p**precision
    unit = (u * pow(v, -1, modulus)) % modulus
    return PAdicNumber(p, vn - vd, int_to_digits(unit, p, precision))


def norm(x: PAdicNumber) -> Fraction:
    return x.norm()


def neg(x: PAdicNumber) -> PAdicNumber:
    if x.is_zero:
        return x
    p, k = x.prime, x.precision
    unit = (-x.unit_int()) % p**k
    return PAdicNumber(p, x.valuation, int_to_digits(unit, p, k))


def add(x: PAdicNumber, y: PAdicNumber) -> PAdicNumber:
    x._require_same_prime(y)
    p = x.prime
    if x.is_zero and y.is_zero:
        if x.exact and y.exact:
            return PAdicNumber.zero(p)
        bound = min(v for v, ex in ((x.valuation, x.exact), (y.valuation, y.exact)) if not ex)
        return PAdicNumber(p, bound, (), exact=False)
    if x.is_zero or y.is_zero:
        z, w = (x, y) if x.is_zero else (y, x)
        if z.exact:
            return w
        # w + O(p^bound): digits of w at exponents >= bound are unknown
        keep = z.valuation - w.valuation
        if keep <= 0:
            return PAdicNumber(p, z.valuation, (), exact=False)
        if keep >= w.precision:
            return w
        return PAdicNumber(p, w.valuation, w.digits[:keep])
    base = min(x.valuation, y.valuation)
    limit = min(x.valuation + x.precision, y.valuation + y.precision)
    span = limit - base
    total = (
        x.unit_int() * p ** (x.valuation - base)
        + y.unit_int() * p ** (y.valuation - base)
    ) % p**span
    if total == 0:
        return PAdicNumber(p, limit, (), exact=False)
    w = valp(total, p)
    return PAdicNumber(p, base + w, int_to_digits(total // p**w, p, span - w))


def mul(x: PAdicNumber, y: PAdicNumber) -> PAdicNumber:
    x._require_same_prime(y)
    p = x.prime
    if x.is_zero or y.is_zero:
        if (x.is_zero and x.exact) or (y.is_zero and y.exact):
            return PAdicNumber.zero(p)
        bound = x.valuation + y.valuation
        return PAdicNumber(p, bound, (), exact=False)
    k = min(x.precision, y.precision)
    unit = (x.unit_int() * y.unit_int()) % p**k
    return PAdicNumber(p, x.valuation + y.valuation, int_to_digits(unit, p, k))


def rational_character_phase(q: Fraction, p: int) -> RationalPhase:
    """Phase of the additive character at an exact rational argument.

    Splits the denominator as p^t * u and reads off the p-adic fractional
    part (a * u^{-1} mod p^t) / p^t, which is exact for every rational.
    """
    if q == 0:
        return RationalPhase(0)
    a, b = q.numerator, q.denominator
    t = valp(b, p) if b % p == 0 else 0
    if t == 0:
        return RationalPhase(0)
    modulus = p**t
    u = b // modulus
    if u == 1:
        return RationalPhase(a % modulus, modulus)
    return RationalPhase((a * pow(u, -1, modulus)) % modulus, modulus)


def monna_rational(q: Fraction, p: int) -> Fraction:
    """Monna image of a nonnegative rational with finite base-p expansion."""
    if q < 0:
        raise InvalidInputError("Monna map implemented for nonnegative reps")
    if q == 0:
        return Fraction(0)
    s = valp(q.denominator, p)
    scaled = q * p**s
    if scaled.denominator != 1:
        raise InvalidInputError("denominator must be a power of p")
    n = scaled.numerator
    total = Fraction(0)
    e = -s
    while n:
        n, d = divmod(n, p)
        total += Fraction(d) * Fraction(p) ** (-e - 1)
        e += 1
    return total


@dataclass(frozen=True)
class AffineElement:
    """Element g(a, b) of the p-adic 'ax+b' group, a with nonzero norm."""

    a: PAdicNumber
    b: PAdicNumber

    def __post_init__(self):
        self.a._require_same_prime(self.b)
        if self.a.is_zero:
            raise InvalidInputError("scaling part must have nonzero norm")

    @property
    def prime(self) -> int:
        return self.a.prime


def affine_identity(p: int, precision: int) -> AffineElement:
    return AffineElement(from_rational(1, 1, p, precision), PAdicNumber.zero(p))


def affine_compose(g1: AffineElement, g2: AffineElement) -> AffineElement:
    """Group law (a1, b1)(a2, b2) = (a1*a2, b1 + a1*b2)."""
    if g1.prime != g2.prime:
        raise PrimeMismatchError("affine elements over different primes")
    return AffineElement(mul(g1.a, g2.a), add(g1.b, mul(g1.a, g2.b)))
