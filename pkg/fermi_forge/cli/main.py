import argparse
import logging
import sys
from typing import Optional, Sequence

from fermi_forge.cgo import DECAY_PHASES
from fermi_forge.exceptions import ResourceError, UnderResolvedOscillationError

from .config import (
    CHECKS,
    DOMAIN_KINDS,
    TARGETS,
    ExperimentConfig,
    apply_overrides,
    load_config,
)
from .golden_check import golden_check
from .run import run

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3

# Flags that map one-to-one onto config fields, by destination.
CONFIG_FLAGS = (
    "domain",
    "inner_radius",
    "level",
    "family",
    "boundary",
    "data",
    "h_min",
    "h_max",
    "h_count",
    "eps",
    "tol",
    "grid",
    "z0",
    "seed",
    "out",
    "order",
    "phase",
    "p_norms",
    "target",
    "check",
    "n_modes",
    "width",
)


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", help="YAML experiment configuration.")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--out", help="Output directory.")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--domain", choices=DOMAIN_KINDS)
    parser.add_argument("--inner-radius", type=float)
    parser.add_argument("--level", type=int, help="Mesh refinement level.")
    parser.add_argument("--family", help="Metric family name.")
    parser.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Metric family parameter; repeatable.",
    )
    parser.add_argument("--n-modes", type=int)
    parser.add_argument("--tol", type=float, help="Newton tolerance.")
    parser.add_argument("--h-min", type=float)
    parser.add_argument("--h-max", type=float)
    parser.add_argument("--h-count", type=int)
    parser.add_argument("--grid", type=int, help="CGO grid cells per axis.")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="fermi-forge",
        description="Numerical experiments on minimal surfaces in Fermi "
        "coordinates and the related Calderon problem.",
    )
    commands = parser.add_subparsers(dest="subcommand", required=True)

    forward = commands.add_parser("forward", parents=[common])
    forward.add_argument(
        "--boundary",
        action="append",
        help="Boundary data spec, e.g. fourier:n=1,amp=0.05; repeatable.",
    )

    dnmap = commands.add_parser("dnmap", parents=[common])
    dnmap.add_argument("--boundary", action="append")

    identities = commands.add_parser("identities", parents=[common])
    identities.add_argument("--order", type=int, choices=(2, 3))
    identities.add_argument("--eps", type=float)
    identities.add_argument(
        "--data", action="append", help="Linearization data spec."
    )

    decay = commands.add_parser("cgo-decay", parents=[common])
    decay.add_argument("--phase", choices=DECAY_PHASES)
    decay.add_argument("--z0", help='Point "x,y".')
    decay.add_argument("--p-norms", type=float, nargs="+")

    recover = commands.add_parser("recover", parents=[common])
    recover.add_argument("--target", choices=TARGETS)
    recover.add_argument("--z0", help='Point "x,y".')
    recover.add_argument(
        "--profile",
        dest="width",
        type=float,
        help="Width of the Gaussian target profile.",
    )

    checks = commands.add_parser("calderon-checks", parents=[common])
    checks.add_argument("--check", choices=CHECKS)

    golden = commands.add_parser("golden", parents=[common])
    golden.add_argument("golden_dir", help="Directory of golden tables.")

    return parser


def _params(pairs: Sequence[str]) -> Optional[dict]:
    if not pairs:
        return None

    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ValueError(f"--param expects KEY=VALUE, got {pair!r}.")
        try:
            params[key] = float(value)
        except ValueError:
            params[key] = value

    return params


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Loads the config file, when given, and applies the command-line flags.
    """
    if args.config is not None:
        config = load_config(args.config, subcommand=args.subcommand)
    else:
        config = ExperimentConfig(subcommand=args.subcommand)

    overrides = {key: getattr(args, key, None) for key in CONFIG_FLAGS}
    overrides["params"] = _params(args.param)
    return apply_overrides(config, overrides)


def exit_code(err: Exception) -> int:
    """
    Maps an error to the exit code of the CLI: 3 for resource and
    resolution errors, 2 for invalid input or missing files and 1 for other
    failures.
    """
    if isinstance(err, (ResourceError, UnderResolvedOscillationError)):
        return EXIT_RESOURCE
    if isinstance(err, (ValueError, OSError)):
        return EXIT_INVALID
    return EXIT_FAILED


def _golden(args: argparse.Namespace) -> int:
    out = args.out or ExperimentConfig().out
    report = golden_check(out, args.golden_dir)

    for line in report.lines():
        print(line)

    report.raise_on_mismatch()
    return EXIT_PASS


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.INFO
    fmt = "%(levelname)s %(name)s: %(message)s"
    logging.basicConfig(level=level, format=fmt)

    try:
        if args.subcommand == "golden":
            return _golden(args)

        result = run(make_config(args))
    except (ValueError, RuntimeError, OSError) as err:
        logger.error(f"{type(err).__name__}: {err}")
        return exit_code(err)

    for check in result.checks:
        state = "pass" if check.passed else "FAIL"
        print(f"{state} {check.name} = {check.value:.6g}")

    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
