"""
Command handlers and argument parsing for the cskit command line.

Every handler takes the parsed arguments and a ``CommandContext`` and
returns an exit code. Handlers only call library functions and render their
results; errors are mapped onto exit codes in ``run_command``.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from rich.console import Console
from rich.table import Table

from src.algebra.laurent import laurent_eval_at_root
from src.algebra.matrices import ComplexMatrix
from src.cli.suite import SuiteRunner
from src.config.settings import ToolkitConfig
from src.fusion.graphs import SPINE_KINDS, count_colorings, parse_graph, spine_graph
from src.fusion.verlinde import integrality_defect, verlinde_dim, verlinde_table
from src.knots.diagram import braid_closure_pd, format_braid, parse_braid, parse_pd
from src.knots.jones import jones
from src.temperley_lieb.algebra import markov_trace_jones
from src.toeplitz.quadrature import QuadratureSpec
from src.toeplitz.weyl import weyl_qg_compare
from src.torus.calibration import (
    CalibrationRecord,
    calibrate_conventions,
    consistency_survey,
    load_or_calibrate,
    provenance_notes,
)
from src.torus.correspondence import (
    NOMINAL_SLOPE_BAND,
    correspondence_check,
    decay_ratios,
    decays,
    in_nominal_band,
    loglog_slope,
)
from src.torus.curves import CurveObservable
from src.torus.goldman import goldman_torus
from src.torus.nctorus import phi
from src.torus.operators import chebyshev_check, colored_curve_operator, colored_difference_check, cs
from src.utils.errors import (
    EXIT_INPUT,
    EXIT_MATH,
    EXIT_OK,
    CalibrationError,
    InputError,
    exit_code_for,
)
from src.utils.formatting import format_complex, format_float, jsonable, matrix_rows, matrix_to_json

logger = logging.getLogger(__name__)

BRACKET_METHODS = ("state-sum", "memoized")
DEFAULT_REPORT = Path("report.json")


@dataclass
class CommandContext:
    """Shared state handed to every command."""

    config: ToolkitConfig = field(default_factory=ToolkitConfig)
    console: Console = field(default_factory=Console)
    json_output: bool = False
    calibration_override: Optional[Path] = None

    @property
    def calibration_path(self) -> Path:
        return self.config.calibration_path(self.calibration_override)

    def calibration(self) -> CalibrationRecord:
        """
        The persisted calibration record, built and saved first when absent.

        Raises:
            CalibrationError: if the record is corrupt or inconsistent.
        """
        settings = self.config.calibration
        return load_or_calibrate(
            self.calibration_path,
            settings.levels,
            settings.matrix_bound,
            settings.nc_bound,
            settings.kappa_ladder,
        )

    def emit(self, payload: Dict[str, Any], *renderables: Any) -> None:
        """Print ``payload`` as JSON or the renderables through rich."""
        if self.json_output:
            sys.stdout.write(json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n")
            return
        for renderable in renderables:
            self.console.print(renderable)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        logger.error("Cannot read %s: %s", path, e)
        raise InputError(f"cannot read {path}: {e}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}")


def _key_value_table(title: str, rows: Sequence[Sequence[str]]) -> Table:
    table = Table(title=title, show_header=False)
    table.add_column("quantity", style="cyan")
    table.add_column("value")
    for row in rows:
        table.add_row(*row)
    return table


def _matrix_table(title: str, matrix: ComplexMatrix) -> Table:
    table = Table(title=title, show_header=False)
    for _ in range(matrix.shape[1]):
        table.add_column(justify="right")
    for row in matrix_rows(matrix):
        table.add_row(*row)
    return table


def cmd_jones(args: argparse.Namespace, context: CommandContext) -> int:
    """Jones polynomial of a PD file or a braid word; braids use both computation paths."""
    payload: Dict[str, Any] = {}
    rows = []
    code = EXIT_OK
    if args.pd:
        value = jones(parse_pd(_read_text(args.pd)), args.method)
        payload.update(source=args.pd, jones=str(value))
        rows.append(("V(t)", str(value)))
    else:
        braid = parse_braid(args.braid)
        value = jones(braid_closure_pd(braid), args.method)
        via_trace = markov_trace_jones(braid)
        agree = value == via_trace
        payload.update(
            braid=format_braid(braid), jones=str(value), state_sum=str(value),
            markov_trace=str(via_trace), agree=agree,
        )
        rows.extend([
            ("braid", format_braid(braid)),
            (f"closure {args.method}", str(value)),
            ("Markov trace", str(via_trace)),
            ("paths agree", "yes" if agree else "NO"),
        ])
        if not agree:
            logger.error("State sum %s and Markov trace %s disagree", value, via_trace)
            code = EXIT_MATH
    if args.at_root is not None:
        at_root = laurent_eval_at_root(value, args.at_root)
        payload["at_root"] = {"r": args.at_root, "value": at_root}
        rows.append((f"V(e^(2 pi i/{args.at_root}))", format_complex(at_root)))
    context.emit(payload, _key_value_table("Jones polynomial", rows))
    return code


def cmd_verlinde(args: argparse.Namespace, context: CommandContext) -> int:
    """Verlinde dimension, an integer table, or a coloring cross-check."""
    if args.table:
        gmax, rmax = args.table
        values = verlinde_table(gmax, rmax)
        table = Table(title="Verlinde dimensions")
        table.add_column("g", style="cyan")
        levels = list(range(2, rmax + 1))
        for r in levels:
            table.add_column(f"r={r}", justify="right")
        for g in range(1, gmax + 1):
            table.add_row(str(g), *(str(values[(g, r)]) for r in levels))
        table_payload = {"table": {str(g): {str(r): values[(g, r)] for r in levels} for g in range(1, gmax + 1)}}
        context.emit(table_payload, table)
        return EXIT_OK

    if args.level is None or (args.genus is None and not args.graph):
        raise InputError("--level and one of --genus or --graph are required unless --table is given")
    graph = parse_graph(_read_text(args.graph)) if args.graph else None
    genus = graph.genus() if graph is not None else args.genus
    dimension = verlinde_dim(genus, args.level)
    defect = integrality_defect(genus, args.level)
    payload: Dict[str, Any] = {"genus": genus, "level": args.level, "dimension": dimension, "float_defect": defect}
    rows = [
        ("genus", str(genus)), ("level", str(args.level)), ("dimension", str(dimension)),
        ("float sum defect", format_float(defect)),
    ]
    code = EXIT_OK
    if args.with_colorings or graph is not None:
        graph = graph if graph is not None else spine_graph(genus, args.spine)
        colorings = count_colorings(graph, args.level)
        agree = colorings == dimension
        payload.update(colorings=colorings, agree=agree, spine=args.graph or args.spine)
        rows.append(("colorings", f"{colorings} {'==' if agree else '!='} {dimension}"))
        if not agree:
            logger.error("Coloring count %d differs from the Verlinde dimension %d", colorings, dimension)
            code = EXIT_MATH
    context.emit(payload, _key_value_table("Verlinde dimension", rows))
    return code


def cmd_csop(args: argparse.Namespace, context: CommandContext) -> int:
    """The operator C(p,q) (or a colored curve) with its Chebyshev checks."""
    curve = CurveObservable(args.p, args.q)
    if args.color is not None:
        matrix = colored_curve_operator(curve, args.color, args.r)
        title = f"V^{args.color}-colored {curve.primitive()} at r={args.r}"
    else:
        matrix = cs(args.p, args.q, args.r)
        title = f"C({args.p},{args.q}) at r={args.r}"
    tolerance = context.config.tolerances.matrix
    checks: Dict[str, float] = {"colored_difference": colored_difference_check(curve, args.r)}
    if curve.multiplicity() > 1:
        checks["chebyshev"] = chebyshev_check(curve.primitive(), curve.multiplicity(), args.r)
    failed = [name for name, value in checks.items() if value > tolerance]
    payload = {
        "p": args.p, "q": args.q, "r": args.r, "color": args.color,
        "matrix": matrix_to_json(matrix), "checks": checks, "tolerance": tolerance,
    }
    summary = _key_value_table(
        "Checks", [(name, format_float(value)) for name, value in sorted(checks.items())]
    )
    context.emit(payload, _matrix_table(title, matrix), summary)
    if failed:
        logger.error("C(%d,%d) at r=%d fails %s", args.p, args.q, args.r, failed)
        return EXIT_MATH
    return EXIT_OK


def cmd_ncheck(args: argparse.Namespace, context: CommandContext) -> int:
    """Re-check the calibrated conventions: matrix product-to-sum and the phi homomorphism."""
    record = context.calibration()
    levels = _int_list(args.levels) if args.levels else record.r_set
    bound = args.bound if args.bound is not None else context.config.calibration.nc_bound
    surveys = [consistency_survey(record, r, bound) for r in levels]
    table = Table(title=f"Homomorphism check, c={record.c}, s={record.s:+d}")
    for name in ("r", "instances", "phi failures", "matrix deviation"):
        table.add_column(name, justify="right")
    for survey in surveys:
        table.add_row(
            str(survey.r), str(survey.instances), str(len(survey.phi_failures)),
            format_float(survey.max_matrix_deviation),
        )
    payload: Dict[str, Any] = {
        "c": float(record.c), "s": record.s, "bound": bound,
        "levels": [
            {
                "r": survey.r,
                "instances": survey.instances,
                "phi_failures": [list(item) for item in survey.phi_failures],
                "max_matrix_deviation": survey.max_matrix_deviation,
                "passed": survey.passed,
            }
            for survey in surveys
        ],
    }
    renderables: List[Any] = [table]
    if args.curve:
        curve = CurveObservable.parse(args.curve)
        image = phi(curve, levels[0], record.s)
        payload["phi"] = {"curve": [curve.p, curve.q], "r": levels[0], "image": str(image)}
        renderables.append(f"phi{curve} at r={levels[0]}: {image}")
    context.emit(payload, *renderables)
    if not all(survey.passed for survey in surveys):
        logger.error("Calibrated conventions fail the homomorphism check")
        return EXIT_MATH
    return EXIT_OK


def cmd_goldman(args: argparse.Namespace, context: CommandContext) -> int:
    """Goldman bracket of two torus curves and, optionally, the correspondence decay."""
    record = context.calibration()
    alpha = CurveObservable.parse(args.alpha)
    beta = CurveObservable.parse(args.beta)
    bracket = goldman_torus(alpha, beta, record.sigma)
    payload: Dict[str, Any] = {
        "alpha": [alpha.p, alpha.q], "beta": [beta.p, beta.q],
        "sigma": record.sigma, "bracket": str(bracket),
    }
    renderables: List[Any] = [f"{{I{alpha}, I{beta}}} = {bracket}"]
    code = EXIT_OK
    if args.correspondence:
        rows = correspondence_check(alpha, beta, _int_list(args.correspondence), record.kappa, record.sigma)
        ratios = decay_ratios(rows)
        slope = loglog_slope(rows)
        passed = decays(rows)
        table = Table(title=f"Correspondence error, kappa={format_float(record.kappa)}")
        for name in ("r", "E(r)", "E(r)/E(previous)"):
            table.add_column(name, justify="right")
        for index, row in enumerate(rows):
            previous = rows[index - 1].error if index else 0.0
            ratio = format_float(row.error / previous) if previous > 0 else ""
            table.add_row(str(row.r), format_float(row.error), ratio)
        payload["correspondence"] = {
            "kappa": record.kappa,
            "rows": [{"r": row.r, "error": row.error} for row in rows],
            "ratios": ratios,
            "slope": slope,
            "slope_band": list(NOMINAL_SLOPE_BAND),
            "slope_in_band": in_nominal_band(slope),
            "decays": passed,
        }
        band = "inside" if in_nominal_band(slope) else "outside"
        renderables.extend([table, f"log-log slope {format_float(slope)}, {band} {list(NOMINAL_SLOPE_BAND)}"])
        if not passed:
            logger.error("Correspondence error does not decay: ratios %s", ratios)
            code = EXIT_MATH
    context.emit(payload, *renderables)
    return code


def cmd_weyl(args: argparse.Namespace, context: CommandContext) -> int:
    """Compare the Toeplitz quantisation of (p, q) with C(p,q)."""
    config = context.config
    overrides: Dict[str, Any] = {}
    if args.grid is not None:
        overrides["grid"] = args.grid
    if args.weight_scale is not None:
        overrides["weight_scale"] = args.weight_scale
    if args.non_strict:
        overrides["strict"] = False
    spec = QuadratureSpec.from_config(config.quadrature, config.tolerances, **overrides)
    comparison = weyl_qg_compare(CurveObservable(args.p, args.q), args.r, spec)
    tolerance = config.tolerances.weyl
    payload = comparison.to_json()
    rows = [
        ("grid", str(comparison.grid)),
        ("maxAbsDiff", format_float(comparison.max_abs_diff)),
        ("bestScalarDiff", format_float(comparison.best_scalar_diff)),
        ("fittedScalar", format_complex(comparison.fitted_scalar)),
        ("gramCondition", format_float(comparison.gram_condition)),
        ("drift", format_float(comparison.drift)),
    ]
    context.emit(payload, _key_value_table(f"Weyl vs C({args.p},{args.q}) at r={args.r}", rows))
    if comparison.best_scalar_diff > tolerance:
        logger.error("bestScalarDiff %.3g exceeds %.3g", comparison.best_scalar_diff, tolerance)
        return EXIT_MATH
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace, context: CommandContext) -> int:
    """Rebuild the calibration record, persist it and print it."""
    settings = context.config.calibration
    levels = _int_list(args.levels) if args.levels else settings.levels
    record = calibrate_conventions(levels, settings.matrix_bound, settings.nc_bound, settings.kappa_ladder)
    path = context.calibration_path
    record.save(path)
    rows = [
        ("c", str(record.c)),
        ("s", f"{record.s:+d}"),
        ("sigma", f"{record.sigma:+d}"),
        ("kappa", format_float(record.kappa)),
        ("levels", ",".join(str(r) for r in record.r_set)),
        ("max deviation", format_float(record.max_deviation)),
        ("path", str(path)),
    ]
    notes = provenance_notes(record)
    context.emit(
        dict(record.to_json(), path=str(path), notes=notes),
        _key_value_table("Calibration", rows),
        *notes,
    )
    return EXIT_OK


def cmd_verify_all(args: argparse.Namespace, context: CommandContext) -> int:
    """Run the verification suite and write the report."""
    record = context.calibration()
    runner = SuiteRunner(context.config, record, args.level_max)
    outcome = runner.run()
    out = Path(args.out)
    outcome.report.write(out)
    table = Table(title=f"Verification suite, report at {out}")
    for name in ("category", "passed", "failed", "seconds"):
        table.add_column(name, justify="right" if name != "category" else "left")
    for result in outcome.results:
        failed = sum(not entry.passed for entry in result.entries)
        table.add_row(
            result.name, str(len(result.entries) - failed), str(failed), f"{result.elapsed:.1f}"
        )
    context.emit(outcome.report.to_json(), table)
    return outcome.exit_code


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=argparse.SUPPRESS, help="configuration YAML file")
    common.add_argument("--calibration", type=Path, default=argparse.SUPPRESS, help="calibration record path")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print plain JSON")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS, help="debug logging")
    common.add_argument("-q", "--quiet", action="store_true", default=argparse.SUPPRESS, help="warnings only")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one sub-command per handler."""
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="cskit",
        description="Jones polynomials, Verlinde dimensions and torus quantisation checks.",
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", required=True)

    jones_parser = commands.add_parser("jones", parents=[common], help="Jones polynomial")
    source = jones_parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--pd", help="PD code file")
    source.add_argument("--braid", help='braid word, e.g. "n=2 +1 +1 +1"')
    jones_parser.add_argument("--at-root", type=int, dest="at_root", help="evaluate at t = e^(2 pi i/r)")
    jones_parser.add_argument("--method", choices=BRACKET_METHODS, default="state-sum")
    jones_parser.set_defaults(handler=cmd_jones)

    verlinde_parser = commands.add_parser("verlinde", parents=[common], help="Verlinde dimensions")
    verlinde_parser.add_argument("--genus", type=_positive_int)
    verlinde_parser.add_argument("--level", type=int)
    verlinde_parser.add_argument("--table", nargs=2, type=_positive_int, metavar=("GMAX", "RMAX"))
    verlinde_parser.add_argument("--with-colorings", action="store_true", dest="with_colorings")
    verlinde_parser.add_argument("--spine", choices=SPINE_KINDS, default="chain")
    verlinde_parser.add_argument("--graph", help="trivalent graph file to color instead of a spine")
    verlinde_parser.set_defaults(handler=cmd_verlinde)

    csop_parser = commands.add_parser("csop", parents=[common], help="curve operator C(p,q)")
    csop_parser.add_argument("--p", type=int, required=True)
    csop_parser.add_argument("--q", type=int, required=True)
    csop_parser.add_argument("--r", type=int, required=True)
    csop_parser.add_argument("--color", type=int, help="print the V^n-colored primitive curve instead")
    csop_parser.set_defaults(handler=cmd_csop)

    ncheck_parser = commands.add_parser("ncheck", parents=[common], help="noncommutative torus check")
    ncheck_parser.add_argument("--levels", help="comma-separated levels (default: calibration levels)")
    ncheck_parser.add_argument("--bound", type=_positive_int)
    ncheck_parser.add_argument("--curve", help="also print phi of this curve, as p,q")
    ncheck_parser.set_defaults(handler=cmd_ncheck)

    goldman_parser = commands.add_parser("goldman", parents=[common], help="Goldman bracket")
    goldman_parser.add_argument("--alpha", required=True, help="curve p,q")
    goldman_parser.add_argument("--beta", required=True, help="curve m,n")
    goldman_parser.add_argument("--correspondence", help="ascending levels, e.g. 8,16,32")
    goldman_parser.set_defaults(handler=cmd_goldman)

    weyl_parser = commands.add_parser("weyl", parents=[common], help="Toeplitz versus C(p,q)")
    weyl_parser.add_argument("--p", type=int, required=True)
    weyl_parser.add_argument("--q", type=int, required=True)
    weyl_parser.add_argument("--r", type=int, required=True)
    weyl_parser.add_argument("--grid", type=int)
    weyl_parser.add_argument("--weight-scale", type=float, dest="weight_scale")
    weyl_parser.add_argument("--non-strict", action="store_true", dest="non_strict")
    weyl_parser.set_defaults(handler=cmd_weyl)

    calibrate_parser = commands.add_parser("calibrate", parents=[common], help="rebuild the calibration")
    calibrate_parser.add_argument("--levels", help="comma-separated levels (default: configured levels)")
    calibrate_parser.set_defaults(handler=cmd_calibrate)

    verify_parser = commands.add_parser("verify-all", parents=[common], help="run the verification suite")
    verify_parser.add_argument("--level-max", type=_positive_int, dest="level_max")
    verify_parser.add_argument("--out", default=str(DEFAULT_REPORT))
    verify_parser.set_defaults(handler=cmd_verify_all)
    return parser


Handler = Callable[[argparse.Namespace, CommandContext], int]


def run_command(handler: Handler, args: argparse.Namespace, context: CommandContext) -> int:
    """
    Run ``handler`` and translate library errors into exit codes.

    Returns:
        int: 0 on success, 2 for input errors, 3 for mathematical failures,
        4 for calibration problems.
    """
    try:
        return handler(args, context)
    except CalibrationError as e:
        logger.error("Calibration failed: %s", e)
        for line in e.describe():
            logger.error("  %s", line)
        return exit_code_for(e)
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_INPUT
    except (ValueError, ArithmeticError, RuntimeError) as e:
        code = exit_code_for(e)
        logger.error("%s: %s", type(e).__name__, e)
        return code
