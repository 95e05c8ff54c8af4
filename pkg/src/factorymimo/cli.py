"""Command-line front end: layout inspection, closed-form evaluation,
Monte Carlo simulation, subset sweeps and full bundle reproduction.

Flag precedence is CLI > config file > built-in defaults. All results go
to files under ``--out``; stdout carries a terse summary. Exit codes:
0 success, 2 bad configuration, 3 numeric failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .closedform import expected_gain_distributed, gain_moments
from .experiment import (
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    ConfigError,
    ScenarioConfig,
    load_config,
    reproduce_all,
    run_scenario,
)
from .stats import subset_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_SUBCOMMANDS = ("layout", "closed-form", "simulate", "subset", "reproduce")


class NumericError(RuntimeError):
    pass


@dataclass
class CliInvocation:
    """One parsed invocation: a subcommand plus config source and overrides."""

    subcommand: str
    config_path: Path | None = None
    out_dir: Path | None = None
    seed: int | None = None
    trials: int | None = None
    overrides: dict = field(default_factory=dict)
    verbose: bool = False


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON scenario config file")
    common.add_argument("--out", metavar="DIR", help="output directory (created if absent)")
    common.add_argument("--seed", type=int, metavar="U64", help="random seed override")
    common.add_argument("--trials", type=int, metavar="N", help="Monte Carlo trial count override")
    common.add_argument(
        "--deployment",
        choices=["centralized", "grid", "stripe"],
        help="deployment scheme override",
    )
    common.add_argument("--Q", type=int, metavar="Q", help="number of APs")
    common.add_argument("--S", type=int, metavar="S", help="antennas per AP")
    common.add_argument(
        "--position",
        metavar="{typical|worst|X,Y}",
        help="device position: typical, worst, or explicit X,Y in meters",
    )
    common.add_argument(
        "--cardinalities",
        metavar="LIST",
        help="comma-separated subset sizes, e.g. 1,4,8,16,64",
    )
    common.add_argument("--verbose", action="store_true", help="progress and extra detail")

    parser = argparse.ArgumentParser(
        prog="factorymimo",
        description="Channel-gain statistics for massive MIMO deployments in factory halls",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("layout", parents=[common], help="print AP coordinates of a deployment")
    sub.add_parser("closed-form", parents=[common], help="print the expected channel gain")
    sub.add_parser("simulate", parents=[common], help="run one Monte Carlo scenario")
    sub.add_parser("subset", parents=[common], help="sweep best-AP subset sizes")
    sub.add_parser("reproduce", parents=[common], help="emit the full table/figure CSV bundle")
    return parser


def _parse_position(text: str):
    if text in ("typical", "worst"):
        return text
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError("position", f"expected 'typical', 'worst' or 'X,Y', got {text!r}")
    try:
        return [float(parts[0]), float(parts[1])]
    except ValueError:
        raise ConfigError("position", f"coordinates must be numbers, got {text!r}") from None


def _parse_cardinalities(text: str):
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ConfigError("cardinalities", f"expected comma-separated integers, got {text!r}") from None


def invocation_from_args(args: argparse.Namespace) -> CliInvocation:
    overrides: dict = {}
    if args.deployment is not None:
        overrides["deployment"] = args.deployment
    if args.Q is not None:
        overrides["q_aps"] = args.Q
    if args.S is not None:
        overrides["s_per_ap"] = args.S
    if args.position is not None:
        overrides["position"] = _parse_position(args.position)
    if args.cardinalities is not None:
        overrides["cardinalities"] = _parse_cardinalities(args.cardinalities)
    return CliInvocation(
        subcommand=args.subcommand,
        config_path=Path(args.config) if args.config else None,
        out_dir=Path(args.out) if args.out else None,
        seed=args.seed,
        trials=args.trials,
        overrides=overrides,
        verbose=args.verbose,
    )


def _load_merged_config(inv: CliInvocation) -> ScenarioConfig:
    document: dict = {}
    if inv.config_path is not None:
        text = inv.config_path.read_text()
        document = json.loads(text) if text.strip() else {}
        if not isinstance(document, dict):
            raise ConfigError("<document>", "top level must be a JSON object")
    document.update(inv.overrides)
    if inv.seed is not None:
        document["seed"] = inv.seed
    if inv.trials is not None:
        document["trials"] = inv.trials
    return load_config(document)


def _require_out(inv: CliInvocation, default: str = "results") -> Path:
    out = inv.out_dir or Path(default)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _check_finite(*values: float) -> None:
    if any(not math.isfinite(v) for v in values):
        raise NumericError("non-finite value in results; inputs are outside the model's range")


def _cmd_layout(inv: CliInvocation) -> int:
    config = _load_merged_config(inv)
    layout = config.layout()
    print(f"{config.deployment} deployment: Q={layout.num_aps} APs, M={layout.total_antennas} antennas")
    print("x_m,y_m,z_m,antennas")
    lines = [f"{x:.4f},{y:.4f},{z:.4f},{s}" for x, y, z, s in layout.rows()]
    print("\n".join(lines))
    if inv.out_dir is not None:
        out = _require_out(inv)
        (out / "layout.csv").write_text("x_m,y_m,z_m,antennas\n" + "\n".join(lines) + "\n")
        print(f"wrote {out / 'layout.csv'}")
    return EXIT_OK


def _cmd_closed_form(inv: CliInvocation) -> int:
    config = _load_merged_config(inv)
    layout = config.layout()
    mtd = config.device_position()
    params = config.channel_params()
    expr = expected_gain_distributed(params, layout, mtd)
    moments = gain_moments(params, layout, mtd)
    _check_finite(expr.total_db, moments.cv)
    print(
        f"expected gain: {expr.total_db:.4f} dB ({expr.total_linear:.6e} linear), "
        f"analytic cv: {moments.cv:.4f}"
    )
    if inv.verbose:
        for i, (d, s, c) in enumerate(expr.terms):
            print(f"  AP {i}: d={d:.4f} m, S={s}, contribution={c:.6e}")
    if inv.out_dir is not None:
        out = _require_out(inv)
        (out / "closed_form.csv").write_text(
            "deployment,position,mean_db,mean_linear,analytic_std_db,analytic_cv\n"
            f"{config.deployment},{_position_label(config)},{expr.total_db:.4f},"
            f"{expr.total_linear:.10e},{10 * math.log10(moments.std):.4f},{moments.cv:.4f}\n"
        )
        print(f"wrote {out / 'closed_form.csv'}")
    return EXIT_OK


def _position_label(config: ScenarioConfig) -> str:
    if isinstance(config.position, str):
        return config.position
    x, y = config.position
    return f"{x:g};{y:g}"


def _cmd_simulate(inv: CliInvocation) -> int:
    config = _load_merged_config(inv)
    report = run_scenario(config)
    _check_finite(report.mc.mean)
    out = _require_out(inv)
    (out / "report.json").write_text(report.to_json() + "\n")
    ccdf_lines = ["threshold_db,ccdf_probability"] + [
        f"{t:.4f},{p:.10g}" for t, p in report.ccdf.rows()
    ]
    (out / "ccdf.csv").write_text("\n".join(ccdf_lines) + "\n")
    print(
        f"{config.deployment} @ {_position_label(config)}: closed-form "
        f"{report.closed_form.total_db:.4f} dB; MC mean {report.mc.mean_db:.4f} dB"
        + (f", std {report.mc.std_db:.4f} dB, cv {report.mc.cv:.4f}" if report.mc.n > 1 else "")
        + f"  (n={report.mc.n}, seed={config.seed})"
    )
    for w in report.warnings:
        print(f"warning: {w}")
    print(f"wrote {out / 'report.json'}, {out / 'ccdf.csv'}")
    return EXIT_OK


def _cmd_subset(inv: CliInvocation) -> int:
    config = _load_merged_config(inv)
    if config.cardinalities is None:
        cards = tuple(k for k in (1, 4, 8, 16) if k <= config.q_aps)
        if config.q_aps not in cards:
            cards += (config.q_aps,)
        config = load_config({**config.to_dict(), "cardinalities": list(cards)})
    results = subset_sweep(
        config.layout(),
        config.device_position(),
        config.channel_params(),
        config.cardinalities,
        config.trials,
        config.seed,
    )
    out = _require_out(inv)
    lines = ["k,mean_db,std_db,cv,ratio"] + [
        f"{r.cardinality},{r.stats.mean_db:.4f},{r.stats.std_db:.4f},{r.stats.cv:.4f},{r.ratio:.5f}"
        for r in results
    ]
    (out / "subsets.csv").write_text("\n".join(lines) + "\n")
    for r in results:
        print(
            f"k={r.cardinality:>3}: mean {r.stats.mean_db:.4f} dB, cv {r.stats.cv:.4f}, "
            f"captured ratio {r.ratio:.5f}"
        )
    print(f"wrote {out / 'subsets.csv'}")
    return EXIT_OK


def _cmd_reproduce(inv: CliInvocation) -> int:
    config = _load_merged_config(inv)
    out = _require_out(inv)
    progress = (lambda msg: print(msg)) if inv.verbose else None
    bundle = reproduce_all(
        out,
        trials=config.trials,
        seed=config.seed,
        progress=progress,
    )
    for path in bundle.files:
        print(f"wrote {path}")
    return EXIT_OK


_HANDLERS = {
    "layout": _cmd_layout,
    "closed-form": _cmd_closed_form,
    "simulate": _cmd_simulate,
    "subset": _cmd_subset,
    "reproduce": _cmd_reproduce,
}


def dispatch(inv: CliInvocation) -> int:
    """Run one invocation; raises ConfigError / NumericError / OSError."""
    if inv.subcommand not in _HANDLERS:
        raise ConfigError("subcommand", f"unknown subcommand {inv.subcommand!r}")
    return _HANDLERS[inv.subcommand](inv)


def _error_line(kind: str, code: int, message: str) -> str:
    return json.dumps({"error": kind, "exit": code, "message": message})


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inv = invocation_from_args(args)
        return dispatch(inv)
    except ConfigError as e:
        print(_error_line("config", EXIT_CONFIG, str(e)), file=sys.stderr)
        return EXIT_CONFIG
    except json.JSONDecodeError as e:
        print(_error_line("config", EXIT_CONFIG, f"config file is not valid JSON: {e}"), file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as e:
        print(_error_line("config", EXIT_CONFIG, str(e)), file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as e:
        print(_error_line("numeric", EXIT_NUMERIC, str(e)), file=sys.stderr)
        return EXIT_NUMERIC
    except (ArithmeticError,) as e:
        print(_error_line("numeric", EXIT_NUMERIC, str(e)), file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as e:
        print(_error_line("io", EXIT_IO, str(e)), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
