import argparse
import logging
import sys
from typing import List, Optional

from cellschur.cli.handlers import COMMANDS, CommandHandlers, RunConfig
from cellschur.cli.report import write_report
from cellschur.config import Config
from cellschur.core.enums import MonoidKind, Side, WitnessKind
from cellschur.core.errors import BoundExceededError, CellStructureError

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--r", type=int, required=True, help="rank of the monoid")
    parser.add_argument("--char", "--p", dest="characteristic", type=int, default=0,
                        help="field characteristic: 0 or a prime")
    parser.add_argument("--side", choices=[side.value for side in Side])
    parser.add_argument("--ordering", choices=["default", "nu"], default="default")
    parser.add_argument("--nu", type=int, nargs="+", default=[], help="parts of the ordering composition")
    parser.add_argument("--format", dest="output_format", choices=["json", "csv"], default="json")
    parser.add_argument("--output", default="", help="report path (default: $CELLSCHUR_OUTPUT_DIR or stdout)")
    parser.add_argument("--workers", type=int, help="parallelism for per-λ work")
    parser.add_argument("--verbose", action="store_true")


def _add_algebra(parser: argparse.ArgumentParser):
    kinds = [kind.value for kind in MonoidKind]
    target = parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--monoid", choices=kinds, help="monoid algebra R[M]")
    target.add_argument("--schur", choices=kinds, help="generalized Schur algebra of M")
    parser.add_argument("--n", type=int, help="number of composition parts (default r)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellschur",
        description="Cell structures on transformation monoid algebras and generalized Schur algebras.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="check the cell algebra axioms exhaustively")
    _add_algebra(verify)
    lambda0 = commands.add_parser("lambda0", help="Λ₀, simple dimensions and the theorem comparison")
    _add_algebra(lambda0)
    gram = commands.add_parser("gram", help="Gram matrices of every cell module (JSON)")
    _add_algebra(gram)
    witness = commands.add_parser("witness", help="bracket witnesses for every admissible λ")
    witness.add_argument("--kind", choices=[kind.value for kind in WitnessKind], required=True)
    count = commands.add_parser("count", help="count irreducible data against |Λ_p| and |Λ_{L,p}|")

    for sub in (verify, lambda0, gram, witness, count):
        _add_common(sub)
    return parser


def run_config_from_args(args: argparse.Namespace, config: Config) -> RunConfig:
    if args.workers is not None:
        config.workers = args.workers
    kind = getattr(args, "schur", None) or getattr(args, "monoid", None)
    return RunConfig(
        command=args.command,
        config=config,
        monoid=MonoidKind(kind) if kind else None,
        schur=bool(getattr(args, "schur", None)),
        r=args.r,
        n=getattr(args, "n", None),
        side=Side(args.side) if args.side else None,
        characteristic=args.characteristic,
        ordering=args.ordering,
        nu=tuple(args.nu),
        witness_kind=WitnessKind(args.kind) if getattr(args, "kind", None) else None,
        output_format=args.output_format,
        output=args.output,
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    # 1. Load Configuration
    try:
        config = Config.from_env()
    except ValueError as e:
        logger.error(f"Configuration Error: {e}")
        return EXIT_USAGE
    logging.getLogger().setLevel(logging.DEBUG if args.verbose else config.log_level)

    # 2. Validate the invocation
    try:
        if args.workers is not None and args.workers < 1:
            raise ValueError("--workers must be a positive integer")
        run = run_config_from_args(args, config)
        run.validate()
    except (BoundExceededError, ValueError) as e:
        logger.error(f"Usage Error: {e}")
        return EXIT_USAGE

    # 3. Run the command
    handlers = CommandHandlers(config)
    try:
        code, report = handlers.dispatch(run)
        write_report(report, run.output_format, run.output, config.output_dir)
    except CellStructureError as e:
        logger.error(f"Structure Error: {e}")
        return EXIT_MISMATCH
    except (BoundExceededError, ValueError) as e:
        logger.error(f"Usage Error: {e}")
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
