"""Vladimirov derivative, ladder operators and commutation-relation checks.

Operators act on `WaveletExpansion` coefficient maps.  They are words of
four primitive actions:

    ScaleShift(s)   n -> n + s, coefficient unchanged
    Diagonal(a)     coefficient *= p^(a*(1-n))      (the derivative D^a)
    LogDiagonal     coefficient *= (1 - n)          (log_p D)
    Scalar(c)       coefficient *= c

A word is applied left to right; composition is concatenation.  Shifts that
would leave the window raise `WindowClipError` rather than truncating, so
relation checks restrict themselves to interior basis vectors where every
intermediate index stays inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import InvalidInputError, UnsupportedCaseError, WindowClipError
from .exact import Cyc, CycSum, _q_inv, _q_mul, p_power_amp
from .functions import (
    DEFAULT_CELL_CAP,
    LocallyConstantFn,
    ball_reps,
    reduce_rep,
    translate,
)
from .padic import PAdicNumber, frac_valp
from .wavelets import (
    KozyrevIndex,
    WaveletExpansion,
    Window,
    basis_vector,
    enumerate_m_digits,
    label_translate,
)


@dataclass(frozen=True)
class ScaleShift:
    step: int

    def __post_init__(self):
        if self.step not in (-1, 1):
            raise InvalidInputError("shift step must be +1 or -1")


@dataclass(frozen=True)
class Diagonal:
    alpha: object = 1


@dataclass(frozen=True)
class LogDiagonal:
    pass


@dataclass(frozen=True)
class Scalar:
    factor: object = 1


@dataclass(frozen=True)
class BasisOperator:
    """A word of primitive actions, applied left to right."""

    word: tuple = ()

    def then(self, other: "BasisOperator") -> "BasisOperator":
        return BasisOperator(self.word + other.word)

    def __matmul__(self, other: "BasisOperator") -> "BasisOperator":
        """Operator product: (A @ B)(e) = A(B(e))."""
        return BasisOperator(other.word + self.word)

    def shift_extent(self) -> tuple[int, int]:
        """Extremes of the running scale shift over all prefixes."""
        lo = hi = total = 0
        for prim in self.word:
            if isinstance(prim, ScaleShift):
                total += prim.step
                lo = min(lo, total)
                hi = max(hi, total)
        return lo, hi


def identity_op() -> BasisOperator:
    return BasisOperator()


def scalar_op(c) -> BasisOperator:
    return BasisOperator((Scalar(c),))


def vladimirov(alpha) -> BasisOperator:
    return BasisOperator((Diagonal(alpha),))


def log_vladimirov_op() -> BasisOperator:
    return BasisOperator((LogDiagonal(),))


def ladder_op(step: int) -> BasisOperator:
    return BasisOperator((ScaleShift(step),))


def j_op(step: int) -> BasisOperator:
    """J_(+-) = shift after log_p D, so J_s psi_n = (1-n) psi_(n+s)."""
    return BasisOperator((LogDiagonal(), ScaleShift(step)))


def ell_op(k: int) -> BasisOperator:
    """ell_k = |k| uniform-sign shifts after log_p D; ell_0 = log_p D."""
    word: tuple = (LogDiagonal(),)
    step = 1 if k > 0 else -1
    word += tuple(ScaleShift(step) for _ in range(abs(k)))
    return BasisOperator(word)


def _diagonal_multiplier(p: int, alpha, n: int):
    if isinstance(alpha, Rational):
        return p_power_amp(p, Fraction(alpha) * (1 - n))
    return p_power_amp(p, alpha * (1 - n))


def apply_operator(op: BasisOperator, e: WaveletExpansion) -> WaveletExpansion:
    p = e.prime
    coeffs = dict(e.coefficients)
    for prim in op.word:
        new: dict = {}
        for idx, c in coeffs.items():
            if isinstance(prim, ScaleShift):
                target = KozyrevIndex(idx.n + prim.step, idx.m_digits, idx.j)
                if not e.window.contains(target):
                    raise WindowClipError(target)
                new_idx, value = target, c
            elif isinstance(prim, Diagonal):
                new_idx, value = idx, c * _diagonal_multiplier(p, prim.alpha, idx.n)
            elif isinstance(prim, LogDiagonal):
                new_idx, value = idx, c * Fraction(1 - idx.n)
            elif isinstance(prim, Scalar):
                new_idx, value = idx, c * prim.factor
            else:
                raise InvalidInputError(f"unknown primitive {prim!r}")
            if new_idx in new:
                value = new[new_idx] + value
            if isinstance(value, Cyc) and value.is_zero:
                new.pop(new_idx, None)
            else:
                new[new_idx] = value
        coeffs = new
    return WaveletExpansion(p, e.window, coeffs)


# -- spectral-form operator actions ------------------------------------------


def vladimirov_spectral(alpha, e: WaveletExpansion) -> WaveletExpansion:
    """D^alpha acting diagonally: eigenvalue p^(alpha*(1-n)) at scale n."""
    return apply_operator(vladimirov(alpha), e)


def log_vladimirov(e: WaveletExpansion) -> WaveletExpansion:
    """log_p D: eigenvalue (1-n) at scale n."""
    return apply_operator(log_vladimirov_op(), e)


def ladder(step: int, e: WaveletExpansion) -> WaveletExpansion:
    return apply_operator(ladder_op(step), e)


def j_shift(step: int, e: WaveletExpansion) -> WaveletExpansion:
    return apply_operator(j_op(step), e)


def ell(k: int, e: WaveletExpansion) -> WaveletExpansion:
    return apply_operator(ell_op(k), e)


# -- expansion arithmetic ------------------------------------------------------


def expansion_sub(e1: WaveletExpansion, e2: WaveletExpansion) -> WaveletExpansion:
    coeffs = dict(e1.coefficients)
    for idx, c in e2.coefficients.items():
        total = coeffs.get(idx, Cyc.zero(e1.prime)) - c
        if isinstance(total, Cyc) and total.is_zero:
            coeffs.pop(idx, None)
        else:
            coeffs[idx] = total
    return WaveletExpansion(e1.prime, e1.window, coeffs)


def expansion_scale(e: WaveletExpansion, factor) -> WaveletExpansion:
    return WaveletExpansion(
        e.prime, e.window, {i: c * factor for i, c in e.coefficients.items()}
    )


def expansion_max_abs(e: WaveletExpansion) -> float:
    return max((abs(complex(c)) for c in e.coefficients.values()), default=0.0)


def expansion_is_zero(e: WaveletExpansion, tol: float = 0.0) -> bool:
    return all(
        c.is_zero if isinstance(c, Cyc) else abs(complex(c)) <= tol
        for c in e.coefficients.values()
    )


def translate_expansion(e: WaveletExpansion, b) -> WaveletExpansion:
    """Translation on labels: m -> m + b mod Z_p with n, j fixed."""
    p = e.prime
    if isinstance(b, PAdicNumber):
        b = b.to_rational()
    else:
        b = Fraction(b)
    coeffs = {}
    for idx, c in e.coefficients.items():
        target = label_translate(idx, b, p)
        if not e.window.contains(target):
            raise WindowClipError(target, f"translated label {target} left the window")
        coeffs[target] = coeffs.get(target, Cyc.zero(p)) + c
    return WaveletExpansion(p, e.window, coeffs)


# -- commutators ----------------------------------------------------------------


def check_commutator(a: BasisOperator, b: BasisOperator, e: WaveletExpansion,
                     expected: BasisOperator | None = None) -> WaveletExpansion:
    """Residual of [a, b] - expected applied to e; all-zero on success."""
    ab = apply_operator(a, apply_operator(b, e))
    ba = apply_operator(b, apply_operator(a, e))
    residual = expansion_sub(ab, ba)
    if expected is not None:
        residual = expansion_sub(residual, apply_operator(expected, e))
    return residual


def check_deformed(alpha, step: int, e: WaveletExpansion) -> WaveletExpansion:
    """Residual of p^(s a/2) D^a J_s - p^(-s a/2) J_s D^a on e."""
    p = e.prime
    if isinstance(alpha, Rational):
        plus = p_power_amp(p, Fraction(alpha) * Fraction(step, 2))
        minus = p_power_amp(p, -Fraction(alpha) * Fraction(step, 2))
    else:
        plus = float(p) ** (step * alpha / 2)
        minus = float(p) ** (-step * alpha / 2)
    lhs = expansion_scale(apply_operator(vladimirov(alpha), j_shift(step, e)), plus)
    rhs = expansion_scale(j_shift(step, apply_operator(vladimirov(alpha), e)), minus)
    return expansion_sub(lhs, rhs)


def interior_scales(window: Window, *ops: BasisOperator) -> range:
    """Scales from which every prefix of every word stays inside the window."""
    lo = min((op.shift_extent()[0] for op in ops), default=0)
    hi = max((op.shift_extent()[1] for op in ops), default=0)
    return range(window.n_min - lo, window.n_max - hi + 1)


@dataclass
class RelationResult:
    relation: str
    index: KozyrevIndex
    alpha: object
    residual: float
    exact: bool

    def passed(self, tol: float) -> bool:
        return self.residual == 0.0 if self.exact else self.residual <= tol


def _residual_result(relation, idx, alpha, residual: WaveletExpansion) -> RelationResult:
    exact = all(isinstance(c, Cyc) for c in residual.coefficients.values())
    return RelationResult(relation, idx, alpha, expansion_max_abs(residual), exact)


def _interior_basis(p: int, window: Window, m_depth: int, *ops: BasisOperator):
    for n in interior_scales(window, *ops):
        for m in enumerate_m_digits(p, m_depth):
            for j in range(1, p):
                yield KozyrevIndex(n, m, j)


def sl2_results(p: int, window: Window, m_depth: int = 1) -> list[RelationResult]:
    """[J+, J-] = 2 log_p D and [log_p D, J_s] = -s J_s on interior vectors."""
    out = []
    jp, jm, logd = j_op(+1), j_op(-1), log_vladimirov_op()
    plus_minus = scalar_op(Fraction(2)) @ logd
    for idx in _interior_basis(p, window, m_depth, jp, jm):
        e = basis_vector(p, window, idx)
        out.append(_residual_result(
            "sl2:[J+,J-]-2logD", idx, None, check_commutator(jp, jm, e, plus_minus)))
    for step, name in ((+1, "sl2:[logD,J+]+J+"), (-1, "sl2:[logD,J-]-J-")):
        js = j_op(step)
        expected = scalar_op(Fraction(-step)) @ js
        for idx in _interior_basis(p, window, m_depth, js):
            e = basis_vector(p, window, idx)
            out.append(_residual_result(
                name, idx, None, check_commutator(logd, js, e, expected)))
    return out


def witt_results(p: int, window: Window, k_range: int = 3,
                 m_depth: int = 1) -> list[RelationResult]:
    """[ell_a, ell_b] = (a-b) ell_(a+b) for |a|, |b| <= k_range."""
    out = []
    for a in range(-k_range, k_range + 1):
        for b in range(-k_range, k_range + 1):
            la, lb = ell_op(a), ell_op(b)
            expected = scalar_op(Fraction(a - b)) @ ell_op(a + b)
            for idx in _interior_basis(p, window, m_depth, la, lb, ell_op(a + b)):
                e = basis_vector(p, window, idx)
                out.append(_residual_result(
                    f"witt:[l{a},l{b}]", idx, None,
                    check_commutator(la, lb, e, expected)))
    return out


def deformed_results(p: int, window: Window, alphas, m_depth: int = 1) -> list[RelationResult]:
    """The deformed identity plus [D^a, J_s] = (1-p^(s a)) D^a J_s and
    [D^a, log_p D] = 0."""
    out = []
    logd = log_vladimirov_op()
    for alpha in alphas:
        dal = vladimirov(alpha)
        for step in (+1, -1):
            js = j_op(step)
            for idx in _interior_basis(p, window, m_depth, js):
                e = basis_vector(p, window, idx)
                out.append(_residual_result(
                    f"deformed:s={step:+d}", idx, alpha, check_deformed(alpha, step, e)))
                if isinstance(alpha, Rational):
                    factor = 1 - p_power_amp(p, Fraction(alpha) * step)
                else:
                    factor = 1 - float(p) ** (step * alpha)
                expected = scalar_op(factor) @ dal @ js
                out.append(_residual_result(
                    f"commutator:[D^a,J{step:+d}]", idx, alpha,
                    check_commutator(dal, js, e, expected)))
        for idx in _interior_basis(p, window, m_depth):
            e = basis_vector(p, window, idx)
            out.append(_residual_result(
                "commutator:[D^a,logD]", idx, alpha,
                check_commutator(dal, logd, e)))
    return out


def semigroup_results(p: int, window: Window, alpha_pairs,
                      m_depth: int = 1) -> list[RelationResult]:
    """D^a1 D^a2 = D^(a1+a2), checked coefficientwise."""
    out = []
    for a1, a2 in alpha_pairs:
        for idx in _interior_basis(p, window, m_depth):
            e = basis_vector(p, window, idx)
            lhs = vladimirov_spectral(a1, vladimirov_spectral(a2, e))
            rhs = vladimirov_spectral(a1 + a2, e)
            out.append(_residual_result(
                "semigroup", idx, (a1, a2), expansion_sub(lhs, rhs)))
    return out


def translation_spectral_results(p: int, window: Window, shift: Fraction,
                                 alphas, m_depth: int = 1) -> list[RelationResult]:
    """D^a (label-translate) - (label-translate) D^a on basis vectors."""
    out = []
    for alpha in alphas:
        for idx in _interior_basis(p, window, m_depth):
            e = basis_vector(p, window, idx)
            try:
                lhs = vladimirov_spectral(alpha, translate_expansion(e, shift))
                rhs = translate_expansion(vladimirov_spectral(alpha, e), shift)
            except WindowClipError:
                continue
            out.append(_residual_result(
                "translation:spectral", idx, alpha, expansion_sub(lhs, rhs)))
    return out


# -- kernel form of the Vladimirov derivative ---------------------------------


def _check_kernel_alpha(alpha):
    if isinstance(alpha, complex):
        raise UnsupportedCaseError(
            "kernel form needs real alpha > 0; use the spectral form instead"
        )
    if not float(alpha) > 0:
        raise UnsupportedCaseError(
            "kernel form needs alpha > 0; use the spectral form instead"
        )


def _half_exponent(x: Fraction) -> int | None:
    twice = x * 2
    return int(twice) if twice.denominator == 1 else None


def _qpow(p: int, exponent: Fraction):
    """p**exponent as an (a, b) pair in Q(sqrt p); exponent must be half-integral."""
    half = _half_exponent(exponent)
    q, r = divmod(half, 2)
    if r == 0:
        return (Fraction(p) ** q, Fraction(0))
    return (Fraction(0), Fraction(p) ** q)


def vladimirov_kernel_apply(alpha, f: LocallyConstantFn, exact: bool | None = None,
                            cap: int = DEFAULT_CELL_CAP) -> LocallyConstantFn:
    """D^alpha f on f's cell grid via the difference-kernel integral.

    The integrand is cellwise constant away from the evaluation cell, the
    evaluation cell itself contributes nothing, and the tail beyond the
    support ball is the closed-form geometric sum
    -f(x) (1-1/p) p^(-(M+1) alpha) / (1 - p^(-alpha)).  With half-integral
    alpha the whole computation stays exact.
    """
    _check_kernel_alpha(alpha)
    p = f.prime
    if exact is None:
        exact = (
            isinstance(alpha, Rational)
            and _half_exponent(Fraction(alpha)) is not None
            and f.is_exact()
        )
    m_exp, res = f.support_exponent, f.resolution
    reps = ball_reps(p, m_exp, res, cap)
    zero = Cyc.zero(p)
    if exact:
        a = Fraction(alpha)
        c_alpha = _q_mul(
            _q_sub((Fraction(1), Fraction(0)), _qpow(p, a)),
            _q_inv(_q_sub((Fraction(1), Fraction(0)), _qpow(p, -1 - a)), p),
            p,
        )
        tail = _q_mul(
            _qpow(p, -a * (m_exp + 1)),
            _q_inv(_q_sub((Fraction(1), Fraction(0)), _qpow(p, -a)), p),
            p,
        )
        tail = _q_mul(tail, (Fraction(1) - Fraction(1, p), Fraction(0)), p)
        measure = Fraction(p) ** (-res)
        out = {}
        for r0 in reps:
            v0 = f.table.get(r0, zero)
            acc = CycSum(p)
            for r in reps:
                if r == r0:
                    continue
                v = f.table.get(r, zero)
                diff = v - v0
                if diff.is_zero:
                    continue
                w = frac_valp(r - r0, p)
                acc.add(diff.scale_quad(_qpow(p, (1 + a) * w)))
            total = acc.result() * measure
            total = total - v0.scale_quad(tail)
            total = total.scale_quad(c_alpha)
            if not total.is_zero:
                out[r0] = total
        return LocallyConstantFn(p, m_exp, res, out)

    a = float(alpha)
    pa = float(p)
    c_alpha = (1.0 - pa**a) / (1.0 - pa ** (-1.0 - a))
    tail = (1.0 - 1.0 / pa) * pa ** (-(m_exp + 1) * a) / (1.0 - pa**-a)
    measure = pa**-res
    values = {r: complex(f.table.get(r, zero)) for r in reps}
    out = {}
    for r0 in reps:
        v0 = values[r0]
        total = 0j
        for r in reps:
            if r == r0:
                continue
            diff = values[r] - v0
            if diff == 0:
                continue
            w = frac_valp(r - r0, p)
            total += diff * pa ** ((1.0 + a) * w)
        out[r0] = c_alpha * (total * measure - v0 * tail)
    return LocallyConstantFn(p, m_exp, res, out)


def _q_sub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def vladimirov_kernel(alpha, f: LocallyConstantFn, cell, exact: bool | None = None):
    """Kernel-form D^alpha f evaluated on one cell of f's grid."""
    if hasattr(cell, "rep"):
        rep = cell.rep
    else:
        rep = reduce_rep(Fraction(cell), f.prime, f.resolution)
    result = vladimirov_kernel_apply(alpha, f, exact=exact)
    return result.table.get(rep, Cyc.zero(f.prime))


def translation_kernel_residual(alpha, f: LocallyConstantFn, shift,
                                exact: bool | None = None) -> LocallyConstantFn:
    """D^alpha(translate f) - translate(D^alpha f) on the common ball."""
    p = f.prime
    if isinstance(shift, PAdicNumber):
        b = shift.to_rational()
    else:
        b = Fraction(shift)
    support = f.support_exponent
    if b != 0:
        support = max(support, -frac_valp(b, p))
    base = f.with_support(support)
    lhs = vladimirov_kernel_apply(alpha, translate(base, b), exact=exact)
    rhs = translate(vladimirov_kernel_apply(alpha, base, exact=exact), b)
    return lhs - rhs


def log_limit_residual_norm(e: WaveletExpansion, alpha: float) -> float:
    """L2 size of ((D^alpha - 1)/(alpha ln p) - log_p D) applied to e."""
    p = e.prime
    lnp = math.log(p)
    total = 0.0
    for idx, c in e.coefficients.items():
        mult = (float(p) ** (alpha * (1 - idx.n)) - 1.0) / (alpha * lnp) - (1 - idx.n)
        total += abs(complex(c) * mult) ** 2
    return math.sqrt(total)
