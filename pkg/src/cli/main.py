"""
Command-line front end for the strip lab.
Builds a RunConfig from flags, an optional key=value file and defaults, then dispatches.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from models.domain import (
    AnalyticFnSpec,
    FunctionKind,
    GaugeConvention,
    GridSpec,
    OutputFormat,
    RunConfig,
    Subcommand,
)
from models.reports import VerificationResult
from strip.errors import StripLabError, UsageError
from utils.config import ConfigFileError, optional_config
from utils.crypto import compute_config_hash
from utils.line_io import json_text, write_text
from utils.verifier import DEFAULT_TOLERANCES, format_table

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.5
DEFAULT_N = 2048
DEFAULT_SPACING = 0.04
DEFAULT_FORMAT = "json"
DEFAULT_SEED = 42
DEFAULT_OUTPUT = "strip_output"
DEFAULT_FUNCTION = "identity"
DEFAULT_BAND_FRACTION = 0.5
DEFAULT_GAUGE = "center"
DEFAULT_BETA_INDEX = 4
# dense operator matrices are 2n × 2n
OPERATOR_N = 256
OPERATOR_SPACING = 0.5

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2
EXIT_MODULE = 3

FLAG_TYPES: Dict[str, Callable[[str], object]] = {
    "alpha": float,
    "n": int,
    "spacing": float,
    "origin": float,
    "function": str,
    "beta_index": int,
    "beta": float,
    "const_re": float,
    "const_im": float,
    "kappa": float,
    "offset": float,
    "epsilon": float,
    "line": float,
    "gamma": float,
    "tolerance": str,
    "format": str,
    "output": str,
    "seed": int,
    "band_fraction": float,
    "gauge": str,
    "re": float,
    "im": float,
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting"""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="strip", description="Strip factorization lab")
    parser.add_argument("subcommand", choices=[s.value for s in Subcommand])
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--quiet", action="store_true", default=None, help="log warnings and errors only")
    for name, kind in FLAG_TYPES.items():
        flag = "--" + name.replace("_", "-")
        repeatable = name in ("line", "gamma", "tolerance")
        choices = None
        if name == "function":
            choices = [k.value for k in FunctionKind if k != FunctionKind.PRODUCT]
        elif name == "format":
            choices = [f.value for f in OutputFormat]
        elif name == "gauge":
            choices = [g.value for g in GaugeConvention]
        parser.add_argument(flag, dest=name, type=kind, default=None, choices=choices,
                            action="append" if repeatable else "store")
    return parser


def _coerce(name: str, value):
    """Convert a config-file string (or list of strings) with the flag's type"""
    kind = FLAG_TYPES[name]
    try:
        if isinstance(value, list):
            return [kind(item) for item in value]
        return kind(value)
    except ValueError as e:
        raise UsageError(f"malformed value for {name}: {value!r}") from e


def _merge(args: argparse.Namespace, file_values: Dict[str, object], subcommand: Subcommand) -> Dict[str, object]:
    """Flag > config file > default"""
    operator_run = subcommand in (Subcommand.OPCHECK, Subcommand.QHEIS)
    defaults = {
        "alpha": DEFAULT_ALPHA,
        "n": OPERATOR_N if operator_run else DEFAULT_N,
        "spacing": OPERATOR_SPACING if operator_run else DEFAULT_SPACING,
        "function": DEFAULT_FUNCTION,
        "format": DEFAULT_FORMAT,
        "output": DEFAULT_OUTPUT,
        "seed": DEFAULT_SEED,
        "band_fraction": DEFAULT_BAND_FRACTION,
        "gauge": DEFAULT_GAUGE,
        "line": [],
        "gamma": [],
        "tolerance": [],
        "const_re": 1.0,
        "const_im": 0.0,
        "epsilon": 0.0,
        "re": 0.5,
        "im": 0.0,
    }
    merged = {}
    for name in FLAG_TYPES:
        flag_value = getattr(args, name)
        if flag_value is not None:
            merged[name] = flag_value
        elif name in file_values:
            merged[name] = _coerce(name, file_values[name])
        else:
            merged[name] = defaults.get(name)
    merged["quiet"] = bool(args.quiet) if args.quiet is not None else \
        str(file_values.get("quiet", "false")).lower() in ("1", "true", "yes")
    return merged


def _parse_tolerances(entries: List[str]) -> Dict[str, float]:
    tolerances = {}
    for entry in entries:
        name, sep, value = entry.partition("=")
        if not sep:
            raise UsageError(f"tolerance must read name=value, got {entry!r}")
        if name.strip() not in DEFAULT_TOLERANCES:
            raise UsageError(f"unknown tolerance class {name.strip()!r}")
        try:
            tolerances[name.strip()] = float(value)
        except ValueError as e:
            raise UsageError(f"malformed tolerance value in {entry!r}") from e
    return tolerances


def build_function(kind: str, values: Dict[str, object], grid: GridSpec) -> AnalyticFnSpec:
    """
    Catalog function named on the command line

    β comes from --beta, or from --beta-index as a commensurate mode of the window.
    """
    beta = values.get("beta")
    if beta is None and values.get("beta_index") is not None:
        beta = values["beta_index"] * grid.frequency_step
    kind = FunctionKind(kind)
    if kind == FunctionKind.IDENTITY:
        return AnalyticFnSpec.identity()
    if kind == FunctionKind.CONSTANT:
        return AnalyticFnSpec.const(complex(values["const_re"], values["const_im"]))
    if kind == FunctionKind.EXPONENTIAL:
        if values.get("kappa") is None:
            raise UsageError("exponential needs --kappa")
        return AnalyticFnSpec.exponential(values["kappa"])
    if beta is None:
        raise UsageError(f"{kind.value} needs --beta or --beta-index")
    if kind == FunctionKind.SCALED_SINE:
        return AnalyticFnSpec.scaled_sine(beta)
    if values.get("offset") is None:
        raise UsageError("cosine-offset needs --offset")
    return AnalyticFnSpec.cosine_offset(beta, values["offset"])


def parse_config(argv: List[str]) -> RunConfig:
    """
    Build a validated RunConfig

    Args:
        argv: Command-line arguments without the program name

    Returns:
        RunConfig with defaults filled in

    Raises:
        UsageError: On unknown flags or keys, malformed numbers or invalid values
    """
    args = build_parser().parse_args(argv)
    subcommand = Subcommand(args.subcommand)
    allowed = set(FLAG_TYPES) | {"quiet"}
    try:
        file_values = optional_config(args.config, allowed)
    except ConfigFileError as e:
        raise UsageError(str(e)) from e
    values = _merge(args, file_values, subcommand)

    try:
        if values["origin"] is None:
            grid = GridSpec.centered(values["n"], values["spacing"])
        else:
            grid = GridSpec(n=values["n"], spacing=values["spacing"], origin=values["origin"])
        function = build_function(values["function"], values, grid)
        beta_index = values["beta_index"]
        if subcommand == Subcommand.QHEIS and beta_index is None:
            beta_index = DEFAULT_BETA_INDEX
        return RunConfig(
            subcommand=subcommand,
            alpha=values["alpha"],
            grid=grid,
            function=function,
            beta_index=beta_index,
            epsilon=values["epsilon"],
            lines=values["line"],
            gammas=values["gamma"],
            tolerances=_parse_tolerances(values["tolerance"]),
            output_path=values["output"],
            format=values["format"],
            seed=values["seed"],
            band_fraction=values["band_fraction"],
            gauge=GaugeConvention(values["gauge"]),
            point=complex(values["re"], values["im"]),
            quiet=values["quiet"],
        )
    except ValidationError as e:
        raise UsageError(f"invalid configuration: {e.errors()[0]['loc']}: {e.errors()[0]['msg']}") from e
    except ValueError as e:
        raise UsageError(str(e)) from e


def write_manifest(cfg: RunConfig, result: VerificationResult, artifacts: List[Path]) -> Path:
    """manifest.json with the config, its hash and the artifact names"""
    config = cfg.payload()
    manifest = {
        "config": config,
        "config_hash": compute_config_hash(config),
        "artifacts": sorted(path.name for path in artifacts),
        "verified": result.verified,
    }
    return write_text(cfg.output_path, "manifest.json", json_text(manifest))


def dispatch(cfg: RunConfig) -> int:
    """
    Run the pipeline of cfg.subcommand, write artifacts and print the verdict

    Returns:
        0 when every asserted residual is within tolerance, 1 otherwise,
        3 when a module raised
    """
    from .commands import COMMANDS

    logger.info(f"Running {cfg.subcommand.value} for {cfg.function.label}, alpha={cfg.alpha}, "
                f"n={cfg.grid.n}, h={cfg.grid.spacing}")
    try:
        result, artifacts = COMMANDS[cfg.subcommand](cfg)
    except UsageError as e:
        logger.error(f"Usage error in {cfg.subcommand.value}: {e}")
        print(f"❌ {e.kind}: {e}")
        return EXIT_USAGE
    except StripLabError as e:
        logger.error(f"{cfg.subcommand.value} failed with {e.kind}: {e}")
        print(f"❌ {e.kind}: {e}")
        return EXIT_MODULE

    write_manifest(cfg, result, artifacts)
    print(format_table(result))
    print("✅ verified" if result.verified else "❌ tolerance failure")
    return result.exit_status


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(f"❌ usage: {e}")
        return EXIT_USAGE
    if cfg.quiet:
        logging.getLogger().setLevel(logging.WARNING)
    return dispatch(cfg)
