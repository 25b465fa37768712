"""
Command-line entry point.

Reads a problem description from a file (or ``-`` for stdin), runs one
command on it and prints a report. Exit codes: 0 success, 1 failed check,
2 parse error, 3 resource limit or inconclusive computation.
"""

import argparse
import dataclasses
import sys
from typing import Optional

from algebra_core.cache import GroebnerCache
from algebra_core.errors import InconclusiveError, ParseError, ResourceLimitError
from algebra_core.groebner import set_session_cache
from algebra_core.scalars import field_from_name, field_name
from cli.emit import JSON, TEXT, emit
from cli.parser import parse
from cli.report import EXIT_FAILED, EXIT_INCONCLUSIVE, EXIT_PARSE, RunOptions
from cli.runner import needs_input, run
from cli.suites import SUITES
from config.config import CACHE_DIR, DEFAULT_LIMITS, FIELD, SEED
from filtered_derived.scenarios import SCENARIOS, STRATIFICATION, TORSION_VERSUS_PUSHFORWARD
from graded.ring import DegreeWindow


def _window(text: str) -> DegreeWindow:
    try:
        return DegreeWindow.from_text(text)
    except (RuntimeError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact computations on blowups, Rees algebras and filtered modules")
    parser.add_argument("--field", help=f"Coefficient field, QQ or FP<p> (default: {FIELD})")
    parser.add_argument("--window", type=_window, help="Degree window lo..hi")
    parser.add_argument("--max-terms", type=_positive, help="Largest polynomial size during reduction")
    parser.add_argument("--max-sat-steps", type=_positive, help="Largest saturation exponent tried")
    parser.add_argument("--json", action="store_true", help="Print the report as JSON")
    parser.add_argument("--cache-dir", default=CACHE_DIR, help="Directory for cached Groebner bases")
    parser.add_argument("--seed", type=int, default=SEED, help="Seed for randomized suites")
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("input", nargs="?", help="Problem file, or - for standard input")
        return sub

    command("rees", "Presentation of the Rees algebra")
    command("extrees", "Presentation of the extended Rees algebra and its pieces")
    command("grring", "Associated graded ring of the ideal")
    command("charts", "Affine charts of the blowup")

    sections_parser = command("sections", "Twisted global sections")
    sections_parser.add_argument("--twist", type=_window, default=DegreeWindow(0, 4), help="Twists a..b")
    sections_parser.add_argument("--module", help="Pull back a declared module instead of the structure sheaf")

    cohomology_parser = command("cohomology", "Sheaf cohomology table")
    cohomology_parser.add_argument("--twist", type=_window, default=DegreeWindow(0, 4), help="Twists a..b")
    cohomology_parser.add_argument("--max-h", type=int, default=1, help="Highest cohomological index")
    cohomology_parser.add_argument("--module", help="Pull back a declared module instead of the structure sheaf")

    bound_parser = command("bound", "Effective bound for the powers of the ideal")
    bound_parser.add_argument("--limit", type=int, default=4, help="Largest twist scanned")

    rho_parser = command("rho-cert", "Certificate that rho lands in the refined blowup")
    rho_parser.add_argument("--level", type=int, default=0, help="Refinement level n")
    rho_parser.add_argument("--depth", type=int, help="Highest pushforward term (default: number of charts - 1)")
    rho_parser.add_argument("--module", help="Use the rank of a declared free module")

    semiorth_parser = command("semiorth", "Ext-vanishing certificate for a decomposition pattern")
    semiorth_parser.add_argument("--scenario", choices=sorted(SCENARIOS), help="Built-in scenario instead of input")
    semiorth_parser.add_argument("--pattern", choices=[STRATIFICATION, TORSION_VERSUS_PUSHFORWARD],
                                 default=STRATIFICATION, help="Families to compare")

    verify_parser = subparsers.add_parser("verify", help="Run verification suites")
    verify_parser.add_argument("--suite", choices=["all"] + sorted(SUITES), default="all", help="Suite to run")
    verify_parser.add_argument("--include-slow", action="store_true", help="Also run long suites with 'all'")
    return parser


def _read_input(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _options(args: argparse.Namespace) -> RunOptions:
    limits = DEFAULT_LIMITS
    if args.max_terms:
        limits = dataclasses.replace(limits, max_terms=args.max_terms)
    if args.max_sat_steps:
        limits = dataclasses.replace(limits, max_sat_steps=args.max_sat_steps)
    options = RunOptions(window=args.window, limits=limits, seed=args.seed, field=args.field)
    for name in ("twist", "max_h", "limit", "level", "depth", "module", "scenario", "pattern", "suite",
                 "include_slow"):
        if getattr(args, name, None) is not None:
            setattr(options, "twists" if name == "twist" else name, getattr(args, name))
    return options


def main(args: Optional[list] = None) -> int:
    """
    Parse arguments, run the command and print its report.

    Args:
        args: Optional command line arguments. If None, sys.argv[1:] is used.
    """
    parser = build_parser()
    args = parser.parse_args(args)
    if not args.command:
        parser.print_help()
        return EXIT_FAILED

    try:
        options = _options(args)
        spec = None
        if needs_input(args.command, options):
            spec = parse(_read_input(args.input))
            if args.field:
                spec = dataclasses.replace(spec, field=field_name(field_from_name(args.field)))
        if args.cache_dir:
            field = field_from_name(spec.field if spec is not None else args.field or FIELD)
            set_session_cache(GroebnerCache(args.cache_dir, field))
        report = run(spec, args.command, options)
        print(emit(report, JSON if args.json else TEXT))
        return report.exit_code

    except ParseError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (ResourceLimitError, InconclusiveError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except Exception as e:
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_FAILED
    finally:
        set_session_cache(None)


if __name__ == "__main__":
    sys.exit(main())
