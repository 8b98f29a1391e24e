"""
Command-line entry point

用法：
    python mia_lab.py params --delta 0.3
    python mia_lab.py bounds --modes cv,tlc,ds --q 0.2 --temperature 0.05
    python mia_lab.py simulate --samples 1000000 --out curves.csv
    python mia_lab.py delta-factor --k 2 --q-grid 0:1:0.05 --temperatures 0.0001,0.05,0.2
    python mia_lab.py setsize --q-grid 0:1:0.05 --temperatures 0,0.05
    python mia_lab.py gen --hypothesis in --n 100000 --out in.csv
    python mia_lab.py fit out.csv --in-file in.csv --p-star 0.5
    python mia_lab.py sweep --param delta --values 0:0.5:0.05

結束碼：0 成功，1 計算錯誤，2 輸入或驗證錯誤。
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from errors import DomainError, IngestionError, LabError, SizeError, ValidationError
from logging_setup import configure_logging
from cli.config import DEFAULTS, SWEEPABLE, RunConfig, SweepSpec, load_config_file, parse_float_list
from cli.output import atomic_write, emit
from cli import commands

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_INPUT = 2

INPUT_ERRORS = (ValidationError, DomainError, IngestionError, SizeError, OSError)

DEFAULT_Q_GRID = "0:1:0.05"
DEFAULT_TEMPERATURES = "0.0001,0.02,0.05,0.1,0.2"


def _common_parser() -> argparse.ArgumentParser:
    """所有子命令共用的旗標；預設為 None，之後與設定檔合併"""
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--config", help="JSON config file mirroring the long flag names")
    g.add_argument("--seed", type=int, help="base seed (u64)")
    g.add_argument("--samples", type=int, help="Monte Carlo samples per hypothesis (CV/TLC)")
    g.add_argument("--alpha-points", type=int, help="interior alpha grid points")
    g.add_argument("--out", help="output file (default: stdout)")
    g.add_argument("--format", choices=["csv", "json"], help="output format")
    g.add_argument("--threads", help="worker threads or 'auto'")
    g.add_argument("-v", "--verbose", action="count", default=0, help="more logging")
    g.add_argument("--quiet", action="store_true", help="errors only")

    p = common.add_argument_group("profile")
    p.add_argument("--k", type=int, help="class count K")
    p.add_argument("--delta", type=float, help="relative calibration error")
    p.add_argument("--eps-a", type=float, help="aleatoric uncertainty")
    p.add_argument("--eps-e", type=float, help="epistemic uncertainty")
    p.add_argument("--modes", help="comma list of cv,tlc,ds")
    p.add_argument("--q", type=float, help="decision-set threshold")
    p.add_argument("--temperature", type=float, help="decision-set temperature (0 = hard)")
    p.add_argument("--n-mc", type=int, help="Dirichlet draws for decision-set statistics")
    p.add_argument("--margin", type=float, help="simplex support margin for delta factor (default: min(20*T, 2e-3))")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="mia_lab",
        description="Likelihood-ratio membership inference under calibration, aleatoric and epistemic uncertainty",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("params", parents=[common], help="Dirichlet parameters of a profile")

    bounds = sub.add_parser("bounds", parents=[common], help="advantage upper bounds per mode")
    bounds.add_argument("--beta-lb", action="store_true", help="emit the beta lower-bound curves instead")

    sub.add_parser("simulate", parents=[common], help="simulated trade-off curves")

    delta = sub.add_parser("delta-factor", parents=[common], help="decision-set contraction factor grid")
    delta.add_argument("--q-grid", default=None, help="q values: list or start:stop:step")
    delta.add_argument("--temperatures", default=None, help="temperature list")

    setsize = sub.add_parser("setsize", parents=[common], help="average decision-set size")
    setsize.add_argument("--q-grid", default=None)
    setsize.add_argument("--temperatures", default=None)

    fit = sub.add_parser("fit", parents=[common], help="fit Dirichlet/Beta models to confidence CSV")
    fit.add_argument("input", help="confidence CSV (out-hypothesis file in pair mode)")
    fit.add_argument("--in-file", help="in-hypothesis CSV (pair mode)")
    fit.add_argument("--model", choices=["dirichlet", "beta"], default=None)
    fit.add_argument("--p-star", type=float, help="ground-truth true-label probability for profile inference")
    fit.add_argument("--tol", type=float, default=None)
    fit.add_argument("--max-iter", type=int, default=None)
    fit.add_argument("--clamp", type=float, default=None)
    fit.add_argument("--no-renormalize", action="store_true")

    gen = sub.add_parser("gen", parents=[common], help="synthetic confidence CSV")
    gen.add_argument("--hypothesis", choices=["out", "in"], default=None)
    gen.add_argument("--n", type=int, default=None)

    sweep = sub.add_parser("sweep", parents=[common], help="bounds and simulation over one parameter")
    sweep.add_argument("--param", choices=SWEEPABLE, default=None)
    sweep.add_argument("--values", default=None, help="list or start:stop:step")

    return parser


def merge_options(args: argparse.Namespace) -> Dict[str, Any]:
    """內建預設 < 設定檔 < 旗標"""
    options: Dict[str, Any] = dict(DEFAULTS)
    options.update(load_config_file(args.config))
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "command", "verbose", "quiet"):
            options[key] = value
    return options


def _option(options: Dict[str, Any], key: str, default: Any) -> Any:
    value = options.get(key)
    return default if value is None else value


def run(args: argparse.Namespace) -> int:
    options = merge_options(args)
    config = RunConfig.from_options(options)
    embedded = config.embedded()
    command = args.command

    if command == "params":
        table = commands.cmd_params(config)
    elif command == "bounds":
        table = commands.cmd_bounds(config, with_beta_lb=args.beta_lb)
    elif command == "simulate":
        table = commands.cmd_simulate(config)
    elif command == "delta-factor":
        q_grid = parse_float_list(_option(options, "q_grid", DEFAULT_Q_GRID))
        temperatures = parse_float_list(_option(options, "temperatures", DEFAULT_TEMPERATURES))
        table = commands.cmd_delta_factor(q_grid, temperatures, config.profile.k, config.margin)
        embedded = {"k": config.profile.k, "margin": config.margin}
    elif command == "setsize":
        q_grid = parse_float_list(_option(options, "q_grid", DEFAULT_Q_GRID))
        temperatures = parse_float_list(_option(options, "temperatures", "0,0.05"))
        table = commands.cmd_setsize(config, q_grid, temperatures)
    elif command == "fit":
        table = commands.cmd_fit(
            args.input,
            model=_option(options, "model", "dirichlet"),
            in_path=args.in_file,
            p_star=options.get("p_star"),
            tol=float(_option(options, "tol", 1e-8)),
            max_iter=int(_option(options, "max_iter", 1000)),
            clamp=float(_option(options, "clamp", 1e-6)),
            renormalize=not args.no_renormalize,
        )
        embedded = {"input": args.input, "in_file": args.in_file, "p_star": options.get("p_star")}
    elif command == "gen":
        hypothesis = _option(options, "hypothesis", "out")
        text = commands.cmd_gen(config, hypothesis, int(_option(options, "n", 10_000)))
        if config.output_path:
            atomic_write(Path(config.output_path), text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    elif command == "sweep":
        parameter = _option(options, "param", "delta")
        values = _option(options, "values", None)
        if values is None:
            raise ValidationError("sweep needs --values")
        spec = SweepSpec(parameter=parameter, values=parse_float_list(values), base=config)
        table = commands.cmd_sweep(spec)
        embedded = {**embedded, "sweep": {"parameter": parameter, "values": list(spec.values)}}
    else:
        raise ValidationError(f"unknown command {command!r}")

    emit(table, embedded, config.format, config.output_path)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(-1 if args.quiet else args.verbose)

    try:
        return run(args)
    except INPUT_ERRORS as exc:
        logger.error(f"[CLI] {exc}")
        return EXIT_INPUT
    except LabError as exc:
        logger.error(f"[CLI] {exc}")
        return EXIT_COMPUTATION
    except Exception:
        logger.exception("[CLI] unexpected failure")
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
