"""Command-line interface.

Exit codes: 0 ok, 1 a statistical test failed, 2 configuration error, 3 degenerate entropy
source, 4 I/O error, 5 stdout closed by the reader.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Any

from . import __version__
from .bitio import STDOUT
from .commands import COMMAND_REGISTRY
from .commands.common import resolve_config
from .constants import EXIT_FAILURE, EXIT_OK
from .exceptions import ConfigError, SoftSpongeError
from .logging_config import create_logger, new_run_id, setup_logging
from .reports import to_json

logger = create_logger(__name__)

# CLI dest -> RunConfig key
_CONFIG_FLAGS = {
    "device_seed": "device_seed",
    "noise_seed": "noise_seed",
    "sigma": "noise_sigma",
    "temp_offset": "temp_offset",
    "supply_scale": "supply_scale",
    "rc": "rc",
    "tcc": "tcc",
    "fixed_rc": "fixed_rc",
    "fixed_tcc": "fixed_tcc",
    "gpev_bounds": "gpev_bounds",
    "bits": "bits",
    "out": "out",
    "perms": "permutations",
    "perm_seed": "perm_seed",
    "pcc_pairs": "pcc_sampling",
    "workers": "workers",
    "report": "report_path",
    "trace": "trace_path",
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("run configuration")
    group.add_argument("--config", metavar="PATH", help="key = value config file")
    group.add_argument("--device-seed", type=int, help="simulated device identity")
    group.add_argument("--noise-seed", type=int, help="measurement noise seed")
    group.add_argument("--sigma", type=float, help="noise standard deviation in TDC counts")
    group.add_argument("--temp-offset", type=float, help="additive DC offset in TDC counts")
    group.add_argument("--supply-scale", type=float, help="multiplicative delay scale")
    group.add_argument(
        "--no-chaining", action="store_true", help="disable spread-factor chaining"
    )
    group.add_argument("--rc", metavar="rand|N", help="Range Constant: 'rand' or 128-191")
    group.add_argument("--tcc", metavar="rand|N", help="Trim Code Constant: 'rand' or 8-22 even")
    group.add_argument("--fixed-rc", type=int, help="RC for experiments holding it fixed")
    group.add_argument("--fixed-tcc", type=int, help="TCC for experiments holding it fixed")
    group.add_argument("--gpev-bounds", choices=("symmetric", "literal"))
    group.add_argument("--bits", type=int, help="bit budget, rounded up to whole cycles")
    group.add_argument("--out", metavar="PATH|-", help="packed bit output ('-' for stdout)")
    group.add_argument("--perms", type=int, help="IID permutation count (>= 100)")
    group.add_argument("--perm-seed", type=int, help="seed of shuffles and PCC pair draws")
    group.add_argument("--pcc-pairs", metavar="N|all|auto", help="PCC pair sampling")
    group.add_argument("--workers", type=int, help="worker processes for the IID test")
    group.add_argument("--report", metavar="PATH", help="JSON report path")
    group.add_argument("--trace", metavar="PATH", help="DVD_cs trace file")
    group.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="softsponge",
        description="Software PUF-based TRNG with a sponge post-processor and test suite.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("run", "pcc", "sfhist", "bench"):
        sub.add_parser(name, parents=[common], help=COMMAND_REGISTRY[name].description)

    analyze = sub.add_parser("analyze", parents=[common], help="run the test suites on a file")
    analyze.add_argument("bit_file", nargs="?", help="packed MSB-first bit file")
    analyze.add_argument("--suites", help="comma-separated: ais31,iid,estimators,nonce")

    rctcc = sub.add_parser("rctcc", parents=[common], help=COMMAND_REGISTRY["rctcc"].description)
    rctcc.add_argument("--boards", default=None, help="comma-separated device seeds")

    envsweep = sub.add_parser(
        "envsweep", parents=[common], help=COMMAND_REGISTRY["envsweep"].description
    )
    envsweep.add_argument(
        "--point",
        action="append",
        metavar="TEMP:SCALE",
        help="sweep point, repeatable (default: +/-10, 20, 50 counts; scale 0.95, 1.05)",
    )

    nonce = sub.add_parser(
        "export-nonce", parents=[common], help=COMMAND_REGISTRY["export-nonce"].description
    )
    nonce.add_argument("--count", type=int, default=None, help="boot-strap phases")

    sub.add_parser("serve", help="serve the commands over MCP (stdio); needs the mcp extra")
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    overrides = {key: getattr(args, dest, None) for dest, key in _CONFIG_FLAGS.items()}
    overrides["config_path"] = args.config
    if args.no_chaining:
        overrides["chaining_enabled"] = False
    return overrides


def _parse_points(points: list[str] | None) -> list[dict[str, float]] | None:
    if not points:
        return None
    parsed = []
    for point in points:
        temp, _, scale = point.partition(":")
        try:
            parsed.append({"temp_offset": float(temp or 0), "supply_scale": float(scale or 1)})
        except ValueError as e:
            raise ConfigError(f"sweep point must be TEMP:SCALE, got {point!r}", key="point") from e
    return parsed


def _command_arguments(args: argparse.Namespace) -> dict[str, Any]:
    match args.command:
        case "analyze":
            return {"bit_file": args.bit_file, "suites": args.suites}
        case "rctcc":
            return {"boards": args.boards}
        case "envsweep":
            return {"sweep": _parse_points(args.point)}
        case "export-nonce":
            return {} if args.count is None else {"count": args.count}
        case _:
            return {}


def _print_result(args: argparse.Namespace, result: dict[str, Any], streamed: bool) -> None:
    spec = COMMAND_REGISTRY[args.command]
    if streamed:
        # stdout carries the bits
        logger.info(f"{args.command} finished: {result.get('bits_emitted', 0)} bits streamed")
        return
    if spec.text_field and spec.text_field in result:
        sys.stdout.write("\n".join(str(x) for x in result[spec.text_field]) + "\n")
    else:
        sys.stdout.write(to_json(result) + "\n")
    sys.stdout.flush()


def _serve() -> int:
    from .server import main as serve

    try:
        serve()
    except ImportError:
        logger.error("the MCP server needs the 'mcp' extra: pip install softsponge-trng[mcp]")
        return EXIT_FAILURE
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run one command and return its exit code."""
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _serve()
    setup_logging(args.log_level)
    run_id = new_run_id()
    logger.debug(f"softsponge {__version__} run {run_id}: {args.command}")

    try:
        config = resolve_config(None, _overrides(args))
        if args.command == "run" and config.out is None:
            config = replace(config, out=STDOUT)
        spec = COMMAND_REGISTRY[args.command]
        result = spec.handler(config=config, **_command_arguments(args))
        _print_result(args, result, streamed=spec.streams and config.out == STDOUT)
    except SoftSpongeError as e:
        logger.error(f"{e.error_code}: {e.message}")
        return e.exit_code
    except KeyboardInterrupt:
        logger.warning("interrupted")
        return EXIT_FAILURE

    if result.get("passed") is False:
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
