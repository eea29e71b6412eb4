"""Batch command-line front end.

Subcommands: `wavelet table`, `wavelet eval`, `analyze`, `synthesize`,
`fourier`, `check algebra`, `expand-monomial`, `haar sample`, `monna-map`.
Exit codes: 0 success, 1 usage/parse error, 2 numeric or invariant failure,
3 enumeration cap exceeded.

Output is deterministic: cells and labels are emitted in sorted order and
floating values are printed with 17 significant digits; exact rationals are
printed verbatim.
"""

from __future__ import annotations

import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

import click

from .errors import (
    EnumerationCapError,
    InvalidInputError,
    PadicError,
)
from .functions import (
    DEFAULT_CELL_CAP,
    LocallyConstantFn,
    amp_to_json,
    fn_from_json,
    fn_to_json,
    fourier as fourier_fn,
    inverse_fourier,
)
from .haar import HaarIndex, haar_step, monomial_coefficient, scaling_constant
from .operators import (
    RelationResult,
    deformed_results,
    semigroup_results,
    scalar_op,
    sl2_results,
    translation_kernel_residual,
    translation_spectral_results,
    witt_results,
)
from .padic import from_rational, is_prime
from .wavelets import (
    KozyrevIndex,
    Window,
    analyze as analyze_fn,
    evaluate,
    expansion_from_json,
    expansion_to_json,
    materialize,
    synthesize as synthesize_fn,
    validate_index,
)


class CheckFailure(PadicError):
    """A relation residual exceeded its tolerance."""


@dataclass
class RunConfig:
    prime: int = 2
    precision: int = 12
    n_min: int = -2
    n_max: int = 2
    m_depth: int = 1
    tolerance: float = 1e-10
    convention: str = "orthonormal"
    cap: int = DEFAULT_CELL_CAP
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if not is_prime(self.prime):
            raise InvalidInputError(f"--prime {self.prime} is not prime")
        if self.precision < 1:
            raise InvalidInputError("--precision must be >= 1")
        if self.tolerance <= 0:
            raise InvalidInputError("--tolerance must be > 0")
        if self.cap < 1:
            raise InvalidInputError("--cap must be >= 1")
        if self.n_min > self.n_max:
            raise InvalidInputError("--window bounds are inverted")

    @property
    def window(self) -> Window:
        return Window(self.n_min, self.n_max, self.m_depth)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_window(spec: str):
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise click.UsageError(f"--window '{spec}' is not NMIN:NMAX[:MDEPTH]")
    try:
        n_min, n_max = int(parts[0]), int(parts[1])
        m_depth = int(parts[2]) if len(parts) == 3 else 1
    except ValueError as exc:
        raise click.UsageError(f"--window '{spec}': {exc}") from exc
    return n_min, n_max, m_depth


def parse_index(spec: str) -> KozyrevIndex:
    """Parse 'n:m1,m2,...:j' (empty middle part for m = 0)."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise click.UsageError(f"--index '{spec}' is not n:m_digits:j")
    try:
        n = int(parts[0])
        m = tuple(int(d) for d in parts[1].split(",") if d != "")
        j = int(parts[2])
        return KozyrevIndex(n, m, j)
    except (ValueError, InvalidInputError) as exc:
        raise click.UsageError(f"--index '{spec}': {exc}") from exc


def parse_rational(spec: str) -> Fraction:
    try:
        return Fraction(spec)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"'{spec}' is not a rational number") from exc


def write_output(text: str, output: str | None) -> None:
    if output in (None, "-"):
        click.echo(text, nl=False)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def csv_lines(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


@click.group()
@click.option("--prime", default=2, show_default=True, help="The prime p.")
@click.option("--precision", default=12, show_default=True,
              help="Digits carried by p-adic inputs.")
@click.option("--window", "window_spec", default="-2:2:1", show_default=True,
              help="Scale window NMIN:NMAX[:MDEPTH].")
@click.option("--tolerance", default=1e-10, show_default=True,
              help="Tolerance for floating-mode comparisons.")
@click.option("--convention", type=click.Choice(["orthonormal", "paper"]),
              default="orthonormal", show_default=True)
@click.option("--cap", default=DEFAULT_CELL_CAP, show_default=True,
              help="Cell enumeration cap.")
@click.option("--format", "output_format", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
@click.option("--seed", default=0, show_default=True,
              help="Seed for randomized sweeps.")
@click.pass_context
def cli(ctx, prime, precision, window_spec, tolerance, convention, cap,
        output_format, seed):
    """Wavelet analysis on the p-adic line."""
    n_min, n_max, m_depth = parse_window(window_spec)
    ctx.obj = RunConfig(
        prime=prime,
        precision=precision,
        n_min=n_min,
        n_max=n_max,
        m_depth=m_depth,
        tolerance=tolerance,
        convention=convention,
        cap=cap,
        output_format=output_format,
        seed=seed,
    )


@cli.group()
def wavelet():
    """Evaluate wavelets and export their cell tables."""


@wavelet.command("table")
@click.option("--index", "indices", multiple=True,
              help="Wavelet label n:m_digits:j; repeatable.")
@click.option("--extra-depth", default=0, show_default=True)
@click.option("--output", default="-", show_default=True)
@click.pass_obj
def wavelet_table(config: RunConfig, indices, extra_depth, output):
    """Per-cell rows (cell label, |x|_p exponent, magnitude, phase)."""
    parsed = [parse_index(s) for s in indices]
    for idx in parsed:
        validate_index(config.prime, idx)
    if config.output_format == "csv":
        rows = []
        for idx in parsed:
            fn = materialize(config.prime, idx, extra_depth, cap=config.cap)
            for cell, value in fn.cells():
                digits = cell.digits(fn.support_exponent)
                label = "".join(str(d) for d in digits) or "0"
                norm_exp = (
                    "-inf" if cell.rep == 0
                    else fn.support_exponent - next(
                        i for i, d in enumerate(digits) if d != 0
                    )
                )
                polar = value.polar_exact() if hasattr(value, "polar_exact") else None
                if polar is not None:
                    phase_num, phase_den = polar[2].numerator, polar[2].denominator
                else:
                    phase_num = phase_den = ""
                rows.append((
                    f"{idx.n}:{','.join(map(str, idx.m_digits))}:{idx.j}",
                    label, norm_exp, fmt(abs(complex(value))),
                    phase_num, phase_den,
                ))
        text = csv_lines(
            ("index", "cell_label", "norm_exponent", "magnitude",
             "phase_num", "phase_den"),
            rows,
        )
    else:
        payload = []
        for idx in parsed:
            fn = materialize(config.prime, idx, extra_depth, cap=config.cap)
            record = {"n": idx.n, "m_digits": list(idx.m_digits), "j": idx.j}
            record["cells"] = fn_to_json(fn)["cells"]
            payload.append(record)
        text = json.dumps(payload, indent=2) + "\n"
    write_output(text, output)


@wavelet.command("eval")
@click.option("--index", required=True, help="Wavelet label n:m_digits:j.")
@click.option("--xi", required=True, help="Evaluation point as a rational num/den.")
@click.pass_obj
def wavelet_eval(config: RunConfig, index, xi):
    """Evaluate one wavelet at a rational point carried to --precision digits."""
    idx = parse_index(index)
    q = parse_rational(xi)
    point = from_rational(q.numerator, q.denominator, config.prime, config.precision)
    value = evaluate(idx, point)
    z = complex(value)
    out = {"re": z.real, "im": z.imag}
    encoded = amp_to_json(value)
    if "mag_num" in encoded:
        out["exact"] = {
            "magnitude": f"{encoded['mag_num']}/{encoded['mag_den']}",
            "phase": f"{encoded['phase_num']}/{encoded['phase_den']}",
        }
    click.echo(json.dumps(out, indent=2))


@cli.command("analyze")
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--output", default="-", show_default=True)
@click.pass_obj
def analyze_cmd(config: RunConfig, input_file, output):
    """Project a JSON table function onto the window's wavelets.

    The part the window cannot carry (a nonzero mean in particular) is
    reported on stderr alongside the round-trip residual."""
    from .functions import inner_product, integrate

    fn = _load_function(input_file)
    if fn.prime != config.prime:
        raise InvalidInputError(
            f"input is over p={fn.prime}, command over p={config.prime}"
        )
    expansion = analyze_fn(fn, config.window, cap=config.cap)
    write_output(json.dumps(expansion_to_json(expansion), indent=2) + "\n", output)
    mean = complex(integrate(fn))
    resolution = max(fn.resolution, 1 - config.window.n_min)
    rebuilt = synthesize_fn(expansion, resolution=resolution, cap=config.cap)
    residual = fn - rebuilt
    res_norm2 = complex(inner_product(residual, residual)).real
    click.echo(f"mean component: {fmt(mean.real)}{mean.imag:+.17g}j", err=True)
    click.echo(f"round-trip residual norm^2: {fmt(res_norm2)}", err=True)


@cli.command("synthesize")
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--output", default="-", show_default=True)
@click.pass_obj
def synthesize_cmd(config: RunConfig, input_file, output):
    """Rebuild the table function of a JSON expansion."""
    with open(input_file) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{input_file}: {exc}") from exc
    expansion = expansion_from_json(data)
    fn = synthesize_fn(expansion, cap=config.cap)
    write_output(json.dumps(fn_to_json(fn), indent=2) + "\n", output)


@cli.command("fourier")
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--inverse", is_flag=True, help="Apply the inverse transform.")
@click.option("--output", default="-", show_default=True)
@click.pass_obj
def fourier_cmd(config: RunConfig, input_file, inverse, output):
    """Fourier-transform a JSON table function."""
    fn = _load_function(input_file)
    result = inverse_fourier(fn, config.cap) if inverse else fourier_fn(fn, config.cap)
    write_output(json.dumps(fn_to_json(result), indent=2) + "\n", output)


def _load_function(path: str) -> LocallyConstantFn:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return fn_from_json(data)


@cli.group()
def check():
    """Verification suites."""


_RELATIONS = ("sl2", "witt", "deformed", "semigroup", "translation")


@check.command("algebra")
@click.option("--relation", "relations", multiple=True,
              type=click.Choice(_RELATIONS + ("all",)), default=("all",))
@click.option("--alpha", "alphas", multiple=True, type=float,
              help="Exponents for D^alpha checks; repeatable.")
@click.option("--corrupt", is_flag=True, hidden=True,
              help="Negative-control hook: perturb one expected operator.")
@click.pass_obj
def check_algebra(config: RunConfig, relations, alphas, corrupt):
    """Run the commutation-relation suites; exit 2 on any violation."""
    p = config.prime
    window = config.window
    alphas = list(alphas) or [0.5, 1.0, 2.0]
    exact_alphas = [_exactify(a) for a in alphas]
    wanted = set(relations)
    if "all" in wanted:
        wanted = set(_RELATIONS)
    results: list[RelationResult] = []
    if "sl2" in wanted:
        results += sl2_results(p, window, m_depth=config.m_depth)
    if "witt" in wanted:
        results += witt_results(p, window, k_range=3, m_depth=config.m_depth)
    if "deformed" in wanted:
        results += deformed_results(p, window, exact_alphas, m_depth=config.m_depth)
    if "semigroup" in wanted:
        pairs = [(a1, a2) for a1 in exact_alphas for a2 in exact_alphas]
        results += semigroup_results(p, window, pairs, m_depth=config.m_depth)
    if "translation" in wanted:
        shift = Fraction(1, p)
        results += translation_spectral_results(
            p, window, shift, exact_alphas, m_depth=config.m_depth
        )
        rng = random.Random(config.seed)
        fn = _random_function(p, rng)
        for alpha in alphas:
            residual = translation_kernel_residual(alpha, fn, shift, exact=False)
            worst = max(
                (abs(complex(v)) for v in residual.table.values()), default=0.0
            )
            results.append(RelationResult(
                "translation:kernel", KozyrevIndex(0), alpha, worst, False))
    if corrupt and results:
        # tamper with one relation so the failure path is exercised end to end
        from .operators import basis_vector, check_commutator, j_op, log_vladimirov_op, expansion_max_abs

        idx = KozyrevIndex(0)
        e = basis_vector(p, window, idx)
        bad = check_commutator(j_op(+1), j_op(-1), e, scalar_op(Fraction(3)) @ log_vladimirov_op())
        results.append(RelationResult("sl2:corrupted", idx, None,
                                      expansion_max_abs(bad), True))

    by_relation: dict[str, float] = {}
    for r in results:
        by_relation[r.relation] = max(by_relation.get(r.relation, 0.0), r.residual)
    for name in sorted(by_relation):
        click.echo(f"{name}: max residual {fmt(by_relation[name])}")
    failing = [r for r in results if not r.passed(config.tolerance)]
    if failing:
        first = failing[0]
        raise CheckFailure(
            f"{first.relation} violated at index {first.index}, alpha={first.alpha}: "
            f"residual {fmt(first.residual)}"
        )
    click.echo(f"all {len(results)} relation instances passed")


def _exactify(a: float):
    """Half-integer exponents are carried exactly; anything else stays float."""
    fr = Fraction(a).limit_denominator(10**6)
    if (2 * fr).denominator == 1 and abs(float(fr) - a) < 1e-12:
        return fr
    return a


def _random_function(p: int, rng: random.Random) -> LocallyConstantFn:
    fn_table = {}
    support, res = 1, 2
    for i in range(p ** (support + res)):
        if rng.random() < 0.5:
            fn_table[Fraction(i, p**support)] = complex(
                rng.uniform(-1, 1), rng.uniform(-1, 1)
            )
    return LocallyConstantFn(p, support, res, fn_table)


@cli.command("expand-monomial")
@click.option("--degree", required=True, type=int)
@click.option("--max-level", default=3, show_default=True)
@click.option("--output", default="-", show_default=True)
@click.pass_obj
def expand_monomial(config: RunConfig, degree, max_level, output):
    """Wavelet coefficients of x^degree on [0, 1].

    CSV rows are (level, translate, re, im); the scaling-function constant
    (the monomial's mean) is the row with level -1."""
    if degree < 0:
        raise InvalidInputError("--degree must be >= 0")
    p = config.prime
    rows = [(-1, 0, fmt(float(scaling_constant(degree))), fmt(0.0))]
    records = [{"level": -1, "translate": 0,
                "re": float(scaling_constant(degree)), "im": 0.0,
                "kind": "scaling"}]
    for level in range(max_level + 1):
        for t in range(p**level):
            c = complex(monomial_coefficient(
                p, degree, HaarIndex(level, t, config.convention)))
            rows.append((level, t, fmt(c.real), fmt(c.imag)))
            records.append({"level": level, "translate": t,
                            "re": c.real, "im": c.imag, "kind": "wavelet"})
    if config.output_format == "csv":
        text = csv_lines(("level", "translate", "re", "im"), rows)
    else:
        text = json.dumps(records, indent=2) + "\n"
    write_output(text, output)


@cli.group()
def haar():
    """Generalized Haar wavelets on [0, 1]."""


@haar.command("sample")
@click.option("--points", default=64, show_default=True)
@click.option("--level", default=0, show_default=True)
@click.option("--translate", default=0, show_default=True)
@click.option("--output", default="-", show_default=True)
@click.pass_obj
def haar_sample(config: RunConfig, points, level, translate, output):
    """Sample a wavelet on an even grid; rows are (x, re, im)."""
    if points < 1:
        raise InvalidInputError("--points must be >= 1")
    step_fn = haar_step(config.prime, HaarIndex(level, translate, config.convention))
    rows = []
    records = []
    for i in range(points):
        x = Fraction(i, points)
        z = complex(step_fn.value_at(x))
        rows.append((fmt(float(x)), fmt(z.real), fmt(z.imag)))
        records.append({"x": float(x), "re": z.real, "im": z.imag})
    if config.output_format == "csv":
        text = csv_lines(("x", "re", "im"), rows)
    else:
        text = json.dumps(records, indent=2) + "\n"
    write_output(text, output)


@cli.command("monna-map")
@click.option("--xi", required=True, help="Rational num/den to map.")
@click.pass_obj
def monna_map(config: RunConfig, xi):
    """Monna image of a p-adic number given as a rational."""
    q = parse_rational(xi)
    point = from_rational(q.numerator, q.denominator, config.prime, config.precision)
    image = point.monna()
    click.echo(json.dumps({
        "prime": config.prime,
        "input": str(q),
        "image": str(image),
        "image_float": float(image),
    }, indent=2))


def main(argv=None) -> int:
    no_args_help = getattr(click.exceptions, "NoArgsIsHelpError", ())
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as exc:
        if no_args_help and isinstance(exc, no_args_help):
            click.echo(exc.format_message())
            return 0
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except (InvalidInputError, json.JSONDecodeError) as exc:
        click.echo(f"input error: {exc}", err=True)
        return 1
    except EnumerationCapError as exc:
        click.echo(f"resource cap: {exc}", err=True)
        return 3
    except CheckFailure as exc:
        click.echo(f"check failed: {exc}", err=True)
        return 2
    except PadicError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
