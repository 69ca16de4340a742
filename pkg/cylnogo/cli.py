"""
cylnogo/cli.py

Command-line front end:

    bracket, mul, comm          algebra on parsed expressions
    quantize                    Q of a classical observable in a scheme
    apply, melem                ket actions and matrix elements
    solve                       linear constraints from an operator residual
    closure, member             finite-cutoff subalgebra exploration
    verify                      run the named checks and write a report

Errors from the engine print as "Error: ..." on stderr with exit code 2.
"""

import functools
import logging
import sys
from typing import Dict, Optional

import click
from tqdm import tqdm

from cylnogo import config
from cylnogo.checks import run_checks, select, succeeded
from cylnogo.classical import ClassicalElement, poisson_bracket
from cylnogo.constraints import extract_constraints, solve_linear
from cylnogo.errors import ConfigError, CylnogoError
from cylnogo.operators import OperatorElement, apply_ket, matrix_element, op_commutator, op_product
from cylnogo.parsing import parse, parse_scalar
from cylnogo.quantization import QuantScheme, SCHEME_PARAMETERS, build_scheme, extend_with
from cylnogo.reporting import build_report, render
from cylnogo.scalars import Scalar
from cylnogo.subalgebra import FilteredBasis, closure, member, preset_generators

logger = logging.getLogger(__name__)


def handle_errors(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CylnogoError as e:
            logger.debug(f"{command.__name__} failed: {str(e)}")
            click.echo(f"Error: {e}", err=True)
            sys.exit(2)

    return wrapper


def scheme_options(command):
    """--scheme, repeated --rule and one flag per scheme parameter."""
    for name in reversed(SCHEME_PARAMETERS):
        command = click.option(f"--{name}", f"param_{name}", default=None, help=f"Value of {name} (exact rational or 'formal').")(command)
    command = click.option("--rule", "rules", multiple=True, help="Von Neumann rule to install (repeatable).")(command)
    command = click.option("--scheme", "scheme_kind", default="type-i", show_default=True, help="type-i, type-ii or pos-rep.")(command)
    return command


def _scheme(scheme_kind: str, rules, params: Dict[str, Optional[str]]) -> QuantScheme:
    bindings = {
        key[len("param_"):]: config.parse_binding(value)
        for key, value in params.items()
        if key.startswith("param_") and value is not None
    }
    return extend_with(build_scheme(scheme_kind, bindings), rules)


def _schemes(scheme_kind: str, rules, params) -> Dict[str, QuantScheme]:
    """Scheme registry for Q{...} atoms; the configured scheme answers to its kind name."""
    scheme = _scheme(scheme_kind, rules, params)
    return {scheme_kind: scheme, scheme.name: scheme}


def _show(value) -> None:
    click.echo(value.to_text())
    if isinstance(value, ClassicalElement) and not value.is_zero():
        click.echo(f"trig: {value.to_trig_text()}")


@click.group()
@click.option("--log-level", default=config.LOG_LEVEL, show_default=True, help="Logging level.")
def cli(log_level: str):
    """Exact Poisson-bracket and quantization calculator for the cylinder."""
    # Configure logging
    logging.basicConfig(level=getattr(logging, log_level.upper(), logging.INFO))


@cli.command()
@click.argument("left")
@click.argument("right")
@handle_errors
def bracket(left: str, right: str):
    """Poisson bracket {LEFT, RIGHT} of two classical expressions."""
    _show(poisson_bracket(parse(left), parse(right)))


@cli.command()
@click.argument("left")
@click.argument("right")
@click.option("--kind", type=click.Choice(["classical", "operator"]), default="classical", show_default=True)
@scheme_options
@handle_errors
def mul(left: str, right: str, kind: str, scheme_kind: str, rules, **params):
    """Product LEFT*RIGHT, normal-ordered for operators."""
    schemes = _schemes(scheme_kind, rules, params) if kind == "operator" else None
    a, b = parse(left, kind, schemes), parse(right, kind, schemes)
    _show(a * b if kind == "classical" else op_product(a, b))


@cli.command()
@click.argument("expression")
@scheme_options
@handle_errors
def quantize(expression: str, scheme_kind: str, rules, **params):
    """Q(EXPRESSION) in the configured scheme."""
    scheme = _scheme(scheme_kind, rules, params)
    click.echo(scheme.quantize(parse(expression)).to_text())


@cli.command()
@click.argument("left")
@click.argument("right")
@scheme_options
@handle_errors
def comm(left: str, right: str, scheme_kind: str, rules, **params):
    """Commutator [LEFT, RIGHT] of two operator expressions."""
    schemes = _schemes(scheme_kind, rules, params)
    _show(op_commutator(parse(left, "operator", schemes), parse(right, "operator", schemes)))


@cli.command()
@click.argument("operator")
@click.option("--ket", type=int, required=True, help="Basis ket index n.")
@scheme_options
@handle_errors
def apply(operator: str, ket: int, scheme_kind: str, rules, **params):
    """OPERATOR |n>."""
    schemes = _schemes(scheme_kind, rules, params)
    click.echo(apply_ket(parse(operator, "operator", schemes), ket).to_text())


@cli.command()
@click.argument("operator")
@click.option("--bra", type=int, required=True)
@click.option("--ket", type=int, required=True)
@scheme_options
@handle_errors
def melem(operator: str, bra: int, ket: int, scheme_kind: str, rules, **params):
    """<bra| OPERATOR |ket>."""
    schemes = _schemes(scheme_kind, rules, params)
    click.echo(matrix_element(parse(operator, "operator", schemes), bra, ket).to_text())


@cli.command()
@click.argument("residual")
@click.option("--unknowns", required=True, help="Comma separated unknown parameters, e.g. b,c.")
@scheme_options
@handle_errors
def solve(residual: str, unknowns: str, scheme_kind: str, rules, **params):
    """Solve RESIDUAL = 0 word by word for the unknowns."""
    schemes = _schemes(scheme_kind, rules, params)
    operator = parse(residual, "operator", schemes)
    if not isinstance(operator, OperatorElement):
        raise click.BadParameter("the residual must not need an E-Xi exchange", param_hint="RESIDUAL")
    constraints = extract_constraints(operator)
    for constraint in constraints:
        click.echo(constraint.to_text())
    names = [name.strip() for name in unknowns.split(",") if name.strip()]
    click.echo(solve_linear(constraints, names).to_text())


def _generators(gens: str, maxdeg: int, maxharm: int, alpha: Scalar):
    cutoff = (maxdeg, maxharm)
    if gens.startswith("preset:"):
        return preset_generators(gens[len("preset:"):], cutoff, alpha)
    try:
        with open(gens, "r") as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise ConfigError(f"cannot read generators from {gens}: {e}")
    return [parse(line) for line in lines if line.strip() and not line.startswith("#")]


def closure_options(command):
    command = click.option("--products", is_flag=True, help="Also close under pairwise products.")(command)
    command = click.option("--maxharm", type=int, default=5, show_default=True)(command)
    command = click.option("--maxdeg", type=int, default=3, show_default=True)(command)
    command = click.option("--alpha", default="1/3", show_default=True, help="Exact value of alpha.")(command)
    command = click.option("--gens", default="preset:Walpha", show_default=True, help="preset:B, preset:P1, preset:Walpha or a file with one expression per line.")(command)
    return command


def _closure(gens: str, alpha: str, maxdeg: int, maxharm: int, products: bool) -> FilteredBasis:
    value = parse_scalar(alpha)
    generators = _generators(gens, maxdeg, maxharm, value)
    assignment = {"alpha": value}
    return closure(generators, (maxdeg, maxharm), assignment, products=products)


@cli.command(name="closure")
@closure_options
@handle_errors
def closure_command(gens: str, alpha: str, maxdeg: int, maxharm: int, products: bool):
    """Subalgebra generated by GENS inside the cutoff box."""
    basis = _closure(gens, alpha, maxdeg, maxharm, products)
    click.echo(f"dimension: {basis.dimension} of {basis.box_dimension}")
    click.echo("pivots: " + " ".join(f"({r},{m})" for r, m in basis.pivots))


@cli.command(name="member")
@click.option("--expr", "expression", required=True, help="Classical expression to test.")
@closure_options
@handle_errors
def member_command(expression: str, gens: str, alpha: str, maxdeg: int, maxharm: int, products: bool):
    """Membership of EXPR in the closure; a negative answer holds at this cutoff only."""
    basis = _closure(gens, alpha, maxdeg, maxharm, products)
    result = member(parse(expression), basis, {"alpha": parse_scalar(alpha)})
    click.echo(f"{result.status.value}: {result.to_text()}")


@cli.command()
@click.option("--only", default=None, help="Comma separated check names (default: all).")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--jobs", type=int, default=None, help="Concurrent checks; 1 runs them serially.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write the report to this file.")
@click.option("--progress/--no-progress", default=True, help="Show a progress bar on stderr.")
@handle_errors
def verify(only: Optional[str], fmt: str, jobs: Optional[int], output: Optional[str], progress: bool):
    """Run the verification registry and report each check's status."""
    names = [name.strip() for name in only.split(",") if name.strip()] if only else None
    selected = select(names)
    manifest = config.load_manifest()
    jobs = jobs or config.default_jobs()

    with tqdm(total=len(selected), desc="checks", unit="check", file=sys.stderr, disable=not progress) as bar:

        def advance(result):
            bar.set_postfix_str(result.name)
            bar.update(1)

        results = run_checks([check.name for check in selected], jobs=jobs, manifest=manifest, on_result=advance)

    document = render(build_report(manifest.version, results), fmt)
    if output:
        with open(output, "w") as f:
            f.write(document + "\n")
        logger.info(f"Report written to {output}")
    else:
        click.echo(document)

    failed = [result.name for result in results if not succeeded(result)]
    if failed:
        logger.error(f"Checks not at their expected status: {', '.join(failed)}")
        sys.exit(1)


def main():
    cli()


if __name__ == "__main__":
    main()
