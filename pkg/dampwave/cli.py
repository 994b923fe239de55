"""
Command-line entry point

    dampwave simulate        --config PATH [--out DIR] [--seed U64] [--quiet]
    dampwave sweep-m         ...
    dampwave multiplier-test ...
    dampwave decay-study     ...
    dampwave nakao           ...
    dampwave oracle-check    ...
    dampwave serve           MCP tools over stdio

Failures exit nonzero and write one JSON line
{"status": "error", "reason": ..., "message": ...} to stderr.
"""
import argparse
import asyncio
import json
import sys
import time
from typing import Callable, Optional, Sequence

from dampwave.errors import ConfigError, DampwaveError, ReasonCode
from dampwave.logger import run_logger, set_quiet
from dampwave.models.params import ExperimentConfig
from dampwave.services import decay_service, multiplier_service, oracle_service, simulation_service
from dampwave.tools.analysis_tools import (
    format_decay_study,
    format_multiplier_test,
    format_nakao,
    format_oracle_check,
)
from dampwave.tools.simulation_tools import format_simulate, format_sweep
from dampwave.utils.config_file import load_config

COMMANDS: dict[str, tuple[Callable[[ExperimentConfig], dict], Callable[[dict], str]]] = {
    "simulate": (simulation_service.run_simulate, format_simulate),
    "sweep-m": (simulation_service.run_convergence_sweep, format_sweep),
    "multiplier-test": (multiplier_service.run_multiplier_test, format_multiplier_test),
    "decay-study": (decay_service.run_decay_study, format_decay_study),
    "nakao": (decay_service.run_nakao, format_nakao),
    "oracle-check": (oracle_service.run_oracle_check, format_oracle_check),
}


class _Parser(argparse.ArgumentParser):
    """Usage errors become ConfigError so they carry a reason code"""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH", help="key = value experiment config")
    common.add_argument("--out", metavar="DIR", help="output directory (overrides run.output_dir)")
    common.add_argument("--seed", type=_seed, metavar="U64", help="seed (overrides run.seed)")
    common.add_argument("--quiet", action="store_true", help="no console output except the failure line")

    parser = _Parser(prog="dampwave", description="Damped energy-critical wave simulator and verification harness")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        commands.add_parser(name, parents=[common])
    serve = commands.add_parser("serve", help="serve the experiments as MCP tools over stdio")
    serve.add_argument("--quiet", action="store_true")
    return parser


def _fail(reason: ReasonCode, message: str) -> int:
    sys.stderr.write(json.dumps({"status": "error", "reason": reason.value, "message": message}) + "\n")
    return reason.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as e:
        return _fail(e.reason, str(e))

    set_quiet(args.quiet)
    run_logger.log_command(args.command, vars(args))
    if args.command == "serve":
        from dampwave.server import main as serve_main
        asyncio.run(serve_main())
        return 0

    run, render = COMMANDS[args.command]
    started = time.perf_counter()
    try:
        config = load_config(args.config, seed=args.seed, out_dir=args.out)
        result = run(config)
    except DampwaveError as e:
        run_logger.log_command_result(args.command, False, None, time.perf_counter() - started, error=str(e))
        run_logger.log_error(type(e).__name__, str(e), e.context)
        return _fail(e.reason, str(e))
    except Exception as e:
        run_logger.log_error("internal", str(e), {"command": args.command})
        return _fail(ReasonCode.INTERNAL_ERROR, f"{type(e).__name__}: {e}")

    reason = ReasonCode(result['reason'])
    run_logger.log_command_result(args.command, result['success'], result, time.perf_counter() - started)
    if not args.quiet:
        print(render(result))
    if reason is not ReasonCode.OK:
        return _fail(reason, f"{args.command} reported failed checks")
    return 0


if __name__ == "__main__":
    sys.exit(main())
