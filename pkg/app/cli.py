########################
# Command-Line Front End #
########################

"""
This module implements the `lification` command-line front end on top of
argparse, the CommandFactory and the LificationWorkbench.

Key Features:
1. Subcommands:
   - build, sparse, verify, recover, refute-quartic, demo, history, random
   - plan and demo help text is generated from the registered strategies

2. Exit Codes:
   - 0 on success or a certificate that holds
   - 1 when a certificate fails or a computation error occurs
   - 2 on usage errors and invalid input

3. Output:
   - every message goes through ColorFormatter
   - the seed of randomized runs is echoed before the results
"""

import argparse
import logging
from typing import List, Optional

from app.commands import EXIT_FAILED, EXIT_USAGE, CommandFactory
from app.demos import DemoFactory
from app.exceptions import LificationError, ValidationError
from app.history import AutoSaveObserver, LoggingObserver
from app.lification_config import DEFAULT_GRID, LificationConfig
from app.plans import PlanFactory
from app.ui_color import ColorFormatter
from app.workbench import LificationWorkbench

STRUCTURES = "sym|skew|even|odd|palin|antipalin"
SEEDED_COMMANDS = ("verify", "refute-quartic", "demo", "random")


def _describe(names: List[str], create) -> str:
    width = max(len(name) for name in names)
    return "\n".join(f"  {name.ljust(width)}  {create(name).DESCRIPTION}" for name in names)


def plan_help() -> str:
    return "placement plans:\n" + _describe(PlanFactory.names(), PlanFactory.create_plan_strategy)


def demo_help() -> str:
    return "demos:\n" + _describe(DemoFactory.names(), DemoFactory.create_demo)


def _structure_options(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--structure", required=required, help=f"structure of P: {STRUCTURES}")
    parser.add_argument("--star", type=str.lower, choices=["t", "h"], default=None,
                        help="⋆ = transpose (t) or conjugate transpose (h)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lification",
        description="Structured strong ℓ-ifications of matrix polynomials",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    for name, text, default_plan in (("build", "build a structured ℓ-ification", None),
                                     ("sparse", "build with a sparse plan and count blocks", "sparse")):
        p = sub.add_parser(name, help=text, epilog=plan_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--input", required=True, help="polynomial JSON file")
        _structure_options(p)
        p.add_argument("--ell", required=True, type=int, help="grade ℓ of the result")
        p.add_argument("--plan", default=default_plan, help="plan name or plan JSON file")
        p.add_argument("--out", help="write L to this JSON file")
        p.add_argument("--pretty", action="store_true", help="print the block layout")
        p.add_argument("--strict", action="store_true", help="fail when P lacks the structure")

    p = sub.add_parser("verify", help="certify a strong ℓ-ification")
    p.add_argument("--lification", required=True, help="L JSON file")
    p.add_argument("--poly", required=True, help="P JSON file")
    p.add_argument("--ell", required=True, type=int)
    p.add_argument("--report", help="write the report to this JSON file")
    _structure_options(p, required=False)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("recover", help="recover P from a block-Kronecker L")
    p.add_argument("--lification", required=True, help="L JSON file")
    p.add_argument("--ell", required=True, type=int)
    _structure_options(p, required=False)
    p.add_argument("--mobius", help="A1, A2, A3, cayley+1, cayley-1 or a,b,c,d")
    p.add_argument("--sign", default="1", help="+1 or -1 with --mobius")
    p.add_argument("--n", type=int, help="block size, from the file by default")
    p.add_argument("--out", help="write P to this JSON file")
    p.add_argument("--poly", help="compare with this P JSON file")

    p = sub.add_parser("refute-quartic", help="search structured scalar quartic companion templates")
    _structure_options(p)
    p.add_argument("--grid", help=f"comma separated nonzero rationals (default {DEFAULT_GRID})")
    p.add_argument("--allow-products", action="store_true", help="allow one product slot on the l_1 diagonal")
    p.add_argument("--report", help="write the report to this JSON file")
    p.add_argument("--shuffle-seed", type=int, help="permute the enumeration order")
    p.add_argument("--partition", help="search one share of the space, as part/parts")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("demo", help="run a worked example", epilog=demo_help(),
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("name", choices=DemoFactory.names())
    p.add_argument("--seed", type=int)
    p.add_argument("--report", help="write the outcome to this JSON file")

    p = sub.add_parser("history", help="show the run history")
    p.add_argument("--clear", action="store_true", help="clear the run history")

    p = sub.add_parser("random", help="write a random structured polynomial")
    _structure_options(p)
    p.add_argument("--n", required=True, type=int, help="block size")
    p.add_argument("--grade", required=True, type=int)
    p.add_argument("--out", required=True, help="JSON file to write")
    p.add_argument("--field", choices=["rational", "gaussian", "float"])
    p.add_argument("--seed", type=int)
    return parser


def main(argv: Optional[List[str]] = None, config: Optional[LificationConfig] = None) -> int:
    """
    Parse arguments, run one command and return the exit code.

    Args:
        argv: Arguments without the program name; sys.argv by default.
        config: Settings; loaded from the environment when omitted.
    """
    formatter = ColorFormatter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    options = vars(args)
    name = options.pop("command")
    try:
        command = CommandFactory.create_command(name, **options)
        workbench = LificationWorkbench(config)
        workbench.add_observer(LoggingObserver())
        workbench.add_observer(AutoSaveObserver(workbench))
        if name in SEEDED_COMMANDS:
            print(formatter.info(f"seed: {command.run_seed(workbench)}"))
        result = workbench.execute_command(command)
    except ValidationError as e:
        print(formatter.error(f"{type(e).__name__}: {e}"))
        return EXIT_USAGE
    except LificationError as e:
        print(formatter.error(f"{type(e).__name__}: {e}"))
        return EXIT_FAILED
    except ValueError as e:
        logging.error(f"Usage error: {e}")
        print(formatter.error(str(e)))
        return EXIT_USAGE
    for line in formatter.lines(result.messages):
        print(line)
    return result.exit_code
