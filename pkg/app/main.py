import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from app.cli.schemas.run_config import RunConfig
from app.cli.services.commands import EXIT_OK, EXIT_USAGE, execute
from app.config import LOG_LEVEL
from app.errors import OstrowskiError

logger = logging.getLogger(__name__)

BOOL_FLAGS = {"midpoint", "median_point"}


# -----------------------------
# Argument parsing
# -----------------------------
def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--function", help="f(t, s), e.g. 't*s' or catalog:<name>")
    p.add_argument("--weight", help="const | linear | expr:<text in u> | catalog:<name> (default const)")
    p.add_argument("--mode", choices=["closed-form", "numeric"], help="mass/moment strategy for builtin weights")
    p.add_argument("--rect", help="a,b,c,d")
    p.add_argument("--subrect", help="alpha1,alpha2,beta1,beta2 (default: the whole rectangle)")
    p.add_argument("--point", help="x,y")
    p.add_argument("--midpoint", action="store_true", default=None, help="evaluate at the subrectangle midpoint")
    p.add_argument("--median-point", action="store_true", default=None, help="evaluate at the weighted medians")
    p.add_argument("--grid", help="nx,ny interior sweep points")
    p.add_argument("--target-error", type=float, help="cubature error target")
    p.add_argument("--max-cells", type=int, help="cubature cell budget")
    p.add_argument("--interval", help="lo,hi for the median command")
    p.add_argument("--case", choices=["w1-midpoint", "w1-subrect", "wu-midpoint"], help="closed-form constant")
    p.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
    p.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")
    p.add_argument("--sup-norm", type=float, help="override the estimated sup |d2f/dtds|")
    p.add_argument("--format", choices=["json", "csv", "xlsx"], help="report format (default json)")
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--workers", type=int, help="sweep worker threads")
    p.add_argument("--config", help="key=value file with the same keys as the flags")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ostrowski",
        description="Weighted Ostrowski-type inequality for double integrals: verify, sweep, certified cubature.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    shared = _shared_flags()
    sub.add_parser("verify", parents=[shared], help="defect and bound at one point")
    sub.add_parser("sweep", parents=[shared], help="verify on an interior grid")
    sub.add_parser("cubature", parents=[shared], help="certified adaptive cubature")
    sub.add_parser("median", parents=[shared], help="weighted median of a weight on an interval")
    sub.add_parser("constants", parents=[shared], help="compare a closed-form constant with the general bound")
    return parser


def merge_config(args: argparse.Namespace) -> dict:
    """Flags override the --config file; file keys are flag names without dashes."""
    values = {}
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise OstrowskiError(f"config file not found: {path}")
        for key, raw in dotenv_values(path).items():
            dest = key.strip().lstrip("-").replace("-", "_")
            if dest in ("config", "command"):
                continue
            if dest in BOOL_FLAGS:
                values[dest] = str(raw).strip().lower() in ("1", "true", "yes", "on")
            else:
                values[dest] = raw
    for key, value in vars(args).items():
        if key == "config" or value is None:
            continue
        values[key] = value
    return values


# -----------------------------
# Entry point
# -----------------------------
def run(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for usage errors
        return EXIT_OK if not e.code else EXIT_USAGE

    try:
        cfg = RunConfig(**merge_config(args))
        content, _, code = execute(cfg)
        if cfg.out:
            Path(cfg.out).write_bytes(content)
            logger.info(f"✅ [CLI] report written to {cfg.out}")
        else:
            sys.stdout.buffer.write(content)
            sys.stdout.flush()
    except ValidationError as e:
        logger.error(f"❌ [CLI] invalid arguments: {e}")
        return EXIT_USAGE
    except (OstrowskiError, OSError) as e:
        logger.error(f"❌ [CLI] {e}")
        return EXIT_USAGE
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
