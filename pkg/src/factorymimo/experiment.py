"""Scenario configuration, orchestration and CSV report emission.

A scenario fixes the hall, the channel parameters, one deployment, one
device position and the Monte Carlo budget; running it produces the
closed-form gain, the sampled statistics and optional CCDF/subset tables.
``reproduce_all`` runs the five reference deployments at the typical and
worst-case positions and writes the full CSV bundle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np
import scipy

from . import __version__ as _pkg_version
from .channel import ChannelModelParams
from .closedform import GainExpression, GainMoments, expected_gain_distributed, gain_moments
from .geometry import (
    DeploymentKind,
    DeploymentLayout,
    HallGeometry,
    Point3,
    ap_distances,
    make_centralized,
    make_grid,
    make_radio_stripe,
    typical_position,
    worst_case_position,
)
from .stats import (
    CcdfTable,
    GainSampleSet,
    SubsetResult,
    default_ccdf_grid,
    empirical_ccdf,
    monte_carlo_gains,
    subset_sweep,
)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "ScenarioReport",
    "load_config",
    "run_scenario",
    "reproduce_all",
    "ReproduceBundle",
    "DEPLOYMENT_PRESETS",
    "DEFAULT_TRIALS",
    "DEFAULT_SEED",
]

DEFAULT_TRIALS = 1_000_000
DEFAULT_SEED = 1

# label, kind, AP count, antennas per AP for the five reference deployments
DEPLOYMENT_PRESETS = (
    ("centralized", "Centralized mMIMO", DeploymentKind.CENTRALIZED, 1, 64),
    ("pd_grid", "PD mMIMO", DeploymentKind.GRID, 16, 4),
    ("td_grid", "TD mMIMO", DeploymentKind.GRID, 64, 1),
    ("pd_stripes", "PD Radio Stripes", DeploymentKind.RADIO_STRIPE, 16, 4),
    ("td_stripes", "TD Radio Stripes", DeploymentKind.RADIO_STRIPE, 64, 1),
)

_RNG_SCHEME = "philox4x64 counter stream, one block-aligned substream per trial"


class ConfigError(ValueError):
    """Invalid scenario configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated, fully resolved description of one simulation scenario."""

    d_x: float = 100.0
    d_y: float = 100.0
    h_ap: float = 6.0
    h_mtd: float = 1.5
    f_c_ghz: float = 3.5
    eta: float = 3.19
    sigma_s_db: float = 7.56
    deployment: str = "centralized"
    q_aps: int = 1
    s_per_ap: int = 64
    m_total: int = 64
    position: str | tuple[float, float] = "typical"
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    cardinalities: tuple[int, ...] | None = None
    ccdf_grid_db: tuple[float, ...] | None = None

    def hall(self) -> HallGeometry:
        return HallGeometry(self.d_x, self.d_y, self.h_ap, self.h_mtd)

    def channel_params(self) -> ChannelModelParams:
        return ChannelModelParams(self.f_c_ghz, self.eta, self.sigma_s_db)

    def layout(self) -> DeploymentLayout:
        kind = DeploymentKind(self.deployment)
        hall = self.hall()
        if kind is DeploymentKind.CENTRALIZED:
            return make_centralized(hall, self.m_total)
        if kind is DeploymentKind.GRID:
            return make_grid(hall, self.q_aps, self.s_per_ap)
        return make_radio_stripe(hall, self.q_aps, self.s_per_ap)

    def device_position(self) -> Point3:
        hall = self.hall()
        if self.position == "typical":
            return typical_position(hall)
        if self.position == "worst":
            return worst_case_position(DeploymentKind(self.deployment), hall)
        x, y = self.position
        return Point3(float(x), float(y), hall.h_mtd)

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = list(v)
            out[f.name] = v
        return out


_NUMERIC_KEYS = {"d_x", "d_y", "h_ap", "h_mtd", "f_c_ghz", "eta", "sigma_s_db"}
_COUNT_KEYS = {"q_aps", "s_per_ap", "m_total", "trials", "seed"}


def _resolve_antennas(deployment: str, q, s, m) -> tuple[int, int, int]:
    """Fill in the missing members of (Q, S, M) and enforce M = Q * S."""
    if deployment == "centralized":
        if q not in (None, 1):
            raise ConfigError("q_aps", "a centralized deployment has exactly one AP")
        if m is None:
            m = s if s is not None else 64
        if s is None:
            s = m
        q = 1
    else:
        if q is None and s is None and m is None:
            m = 64
        if q is not None and s is not None:
            m = q * s if m is None else m
        elif q is not None and m is None:
            m, s = 64, None
        elif s is not None and m is None:
            m = 64
        if m is not None and q is None and s is None:
            q, s = m, 1
        elif q is None:
            if m % s:
                raise ConfigError("q_aps", f"m_total={m} is not divisible by s_per_ap={s}")
            q = m // s
        elif s is None:
            if m % q:
                raise ConfigError("s_per_ap", f"m_total={m} is not divisible by q_aps={q}")
            s = m // q
    if q * s != m:
        raise ConfigError(
            "m_total", f"m_total={m} incompatible with q_aps={q} * s_per_ap={s} = {q * s}"
        )
    if q < 1 or s < 1:
        raise ConfigError("q_aps", "AP and antenna counts must be positive")
    return int(q), int(s), int(m)


def load_config(document: str | dict) -> ScenarioConfig:
    """Parse and validate a scenario document (JSON text or a dict).

    Every key is optional; omitted keys take the reference-study defaults
    (100 m x 100 m hall, APs at 6 m, device at 1.5 m, 3.5 GHz dense-clutter
    NLOS model, M = 64 antennas). Unknown keys are rejected. The antenna
    split must satisfy m_total = q_aps * s_per_ap; missing members of that
    triple are derived.
    """
    if isinstance(document, str):
        try:
            raw = json.loads(document) if document.strip() else {}
        except json.JSONDecodeError as e:
            raise ConfigError("<document>", f"not valid JSON: {e}") from e
    else:
        raw = dict(document)
    if not isinstance(raw, dict):
        raise ConfigError("<document>", "top level must be a JSON object")

    known = {f.name for f in fields(ScenarioConfig)}
    for key in raw:
        if key not in known:
            raise ConfigError(key, "unknown configuration key")

    clean: dict = {}
    for key in _NUMERIC_KEYS:
        if key in raw:
            if not isinstance(raw[key], (int, float)) or isinstance(raw[key], bool):
                raise ConfigError(key, "must be a number")
            clean[key] = float(raw[key])
    for key in _COUNT_KEYS - {"q_aps", "s_per_ap", "m_total"}:
        if key in raw:
            if not isinstance(raw[key], int) or isinstance(raw[key], bool):
                raise ConfigError(key, "must be an integer")
            clean[key] = raw[key]

    deployment = raw.get("deployment", "centralized")
    if deployment not in {k.value for k in DeploymentKind}:
        raise ConfigError("deployment", f"must be one of centralized|grid|stripe, got {deployment!r}")
    clean["deployment"] = deployment

    counts = {}
    for key in ("q_aps", "s_per_ap", "m_total"):
        v = raw.get(key)
        if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < 1):
            raise ConfigError(key, "must be a positive integer")
        counts[key] = v
    q, s, m = _resolve_antennas(deployment, counts["q_aps"], counts["s_per_ap"], counts["m_total"])
    clean.update(q_aps=q, s_per_ap=s, m_total=m)

    if "position" in raw:
        pos = raw["position"]
        if isinstance(pos, str):
            if pos not in ("typical", "worst"):
                raise ConfigError("position", f"must be 'typical', 'worst' or [x, y], got {pos!r}")
            clean["position"] = pos
        elif isinstance(pos, (list, tuple)) and len(pos) == 2:
            clean["position"] = (float(pos[0]), float(pos[1]))
        else:
            raise ConfigError("position", "must be 'typical', 'worst' or [x, y]")

    if raw.get("cardinalities") is not None:
        cards = raw["cardinalities"]
        if not isinstance(cards, (list, tuple)) or not cards:
            raise ConfigError("cardinalities", "must be a non-empty list of integers")
        for k in cards:
            if not isinstance(k, int) or isinstance(k, bool) or k < 1:
                raise ConfigError("cardinalities", "entries must be positive integers")
        clean["cardinalities"] = tuple(cards)

    if raw.get("ccdf_grid_db") is not None:
        grid = raw["ccdf_grid_db"]
        if not isinstance(grid, (list, tuple)) or not grid:
            raise ConfigError("ccdf_grid_db", "must be a non-empty list of dB thresholds")
        clean["ccdf_grid_db"] = tuple(float(t) for t in grid)

    config = ScenarioConfig(**clean)
    if config.trials < 1:
        raise ConfigError("trials", "must be at least 1")
    if config.seed < 0:
        raise ConfigError("seed", "must be a non-negative integer")
    try:
        config.hall()
        config.channel_params()
        config.layout()
        config.device_position()
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError("<config>", str(e)) from e
    if config.cardinalities is not None:
        for k in config.cardinalities:
            if k > config.q_aps:
                raise ConfigError("cardinalities", f"subset size {k} exceeds q_aps={config.q_aps}")
    return config


@dataclass(frozen=True)
class ScenarioReport:
    """Self-contained results of one scenario run.

    The echoed config plus the seed reproduce every number exactly;
    ``to_dict`` drops the raw samples but keeps all statistics in both
    linear and dB form.
    """

    config: ScenarioConfig
    layout_rows: tuple[tuple[float, float, float, int], ...]
    closed_form: GainExpression
    moments: GainMoments
    mc: GainSampleSet
    ccdf: CcdfTable
    subsets: tuple[SubsetResult, ...] | None
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        std_defined = self.mc.n > 1
        mc = {
            "n": self.mc.n,
            "seed": self.mc.seed,
            "mean_linear": self.mc.mean,
            "mean_db": self.mc.mean_db,
            "std_linear": self.mc.std if std_defined else None,
            "std_db": self.mc.std_db if std_defined else None,
            "cv": self.mc.cv if std_defined else None,
        }
        if not std_defined:
            mc["std_note"] = "undefined for a single sample"
        out = {
            "config": self.config.to_dict(),
            "layout": [list(r) for r in self.layout_rows],
            "closed_form": {
                "mean_linear": self.closed_form.total_linear,
                "mean_db": self.closed_form.total_db,
                "per_ap": [list(t) for t in self.closed_form.terms],
                "analytic_std_linear": self.moments.std,
                "analytic_std_db": 10.0 * math.log10(self.moments.std),
                "analytic_cv": self.moments.cv,
            },
            "monte_carlo": mc,
            "ccdf": {
                "threshold_db": [float(t) for t in self.ccdf.thresholds_db],
                "probability": [float(p) for p in self.ccdf.probabilities],
            },
            "meta": {
                "package_version": _pkg_version,
                "numpy_version": np.__version__,
                "scipy_version": scipy.__version__,
                "rng": _RNG_SCHEME,
                "warnings": list(self.warnings),
            },
        }
        if self.subsets is not None:
            out["subsets"] = {
                "common_random_numbers": True,
                "results": [
                    {
                        "k": r.cardinality,
                        "mean_linear": r.stats.mean,
                        "mean_db": r.stats.mean_db,
                        "std_linear": r.stats.std,
                        "std_db": r.stats.std_db,
                        "cv": r.stats.cv,
                        "ratio": r.ratio,
                    }
                    for r in self.subsets
                ],
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def run_scenario(config: ScenarioConfig, *, workers: int = 1) -> ScenarioReport:
    """Run one scenario: closed form, Monte Carlo, CCDF and optional subsets.

    Deterministic for a fixed config (the seed is part of it); ``workers``
    only parallelizes the sampling and never changes the results.
    """
    layout = config.layout()
    mtd = config.device_position()
    params = config.channel_params()

    closed = expected_gain_distributed(params, layout, mtd)
    moments = gain_moments(params, layout, mtd)
    mc = monte_carlo_gains(layout, mtd, params, config.trials, config.seed, workers=workers)
    grid = np.asarray(config.ccdf_grid_db, dtype=float) if config.ccdf_grid_db else None
    ccdf = empirical_ccdf(mc, grid)
    subsets = None
    if config.cardinalities is not None:
        subsets = tuple(
            subset_sweep(layout, mtd, params, config.cardinalities, config.trials, config.seed)
        )

    messages = []
    min_d = float(np.min(ap_distances(layout, mtd)))
    if min_d < 1.0:
        messages.append(
            f"device is {min_d:.3f} m from the nearest AP; the attenuation model "
            "is extrapolated below 1 m"
        )
    return ScenarioReport(
        config=config,
        layout_rows=tuple(layout.rows()),
        closed_form=closed,
        moments=moments,
        mc=mc,
        ccdf=ccdf,
        subsets=subsets,
        warnings=tuple(messages),
    )


# ---------------------------------------------------------------------------
# full reproduction bundle


@dataclass(frozen=True)
class ReproduceBundle:
    """All scenario reports and subset sweeps behind the CSV bundle."""

    reports: dict
    sweeps: dict
    files: tuple[Path, ...]


def _preset_config(key: str, position: str, trials: int, seed: int) -> ScenarioConfig:
    for k, _, kind, q, s in DEPLOYMENT_PRESETS:
        if k == key:
            return ScenarioConfig(
                deployment=kind.value,
                q_aps=q,
                s_per_ap=s,
                m_total=q * s,
                position=position,
                trials=trials,
                seed=seed,
            )
    raise KeyError(key)


def _fmt(value: float, digits: int) -> str:
    return "" if value is None or math.isnan(value) else f"{value:.{digits}f}"


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    lines = [",".join(header)] + [",".join(r) for r in rows]
    path.write_text("\n".join(lines) + "\n")


def _common_grid(sample_sets: list[GainSampleSet], step_db: float = 0.1) -> np.ndarray:
    lo = min(float(np.min(s.samples_db())) for s in sample_sets) - 1.0
    hi = max(float(np.max(s.samples_db())) for s in sample_sets) + 1.0
    count = int(math.ceil((hi - lo) / step_db)) + 1
    return lo + step_db * np.arange(count)


def _figure_rows(series: list[tuple[str, GainSampleSet]]) -> list[list[str]]:
    grid = _common_grid([s for _, s in series])
    rows = []
    for label, samples in series:
        table = empirical_ccdf(samples, grid)
        rows += [[f"{t:.4f}", f"{p:.10g}", label] for t, p in table.rows()]
    return rows


def reproduce_all(
    out_dir,
    *,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    cardinalities: tuple[int, ...] = (1, 4, 8, 16, 64),
    progress=None,
) -> ReproduceBundle:
    """Run the five reference deployments at both device positions and emit
    the CSV bundle: tableI..tableIV plus fig2a/fig2b/fig3a/fig3b.

    Tables I/II hold per-deployment gain statistics at the typical and
    worst-case positions; tables III/IV hold the best-AP subset sweep of
    the TD grid; fig CSVs hold the matching empirical CCDF curves in long
    form (threshold_db, ccdf_probability, series_label). Fixed inputs give
    byte-identical files.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    say = progress or (lambda msg: None)

    reports: dict = {}
    for position in ("typical", "worst"):
        for key, label, _, _, _ in DEPLOYMENT_PRESETS:
            say(f"scenario {label} @ {position}")
            config = _preset_config(key, position, trials, seed)
            reports[key, position] = run_scenario(config, workers=workers)

    sweeps: dict = {}
    td_config = _preset_config("td_grid", "typical", trials, seed)
    for position in ("typical", "worst"):
        say(f"subset sweep TD mMIMO @ {position}")
        config = replace(td_config, position=position, cardinalities=tuple(cardinalities))
        layout = config.layout()
        sweeps[position] = subset_sweep(
            layout,
            config.device_position(),
            config.channel_params(),
            config.cardinalities,
            trials,
            seed,
        )

    files = []

    def table_rows(position):
        rows = []
        for key, label, _, _, _ in DEPLOYMENT_PRESETS:
            mc = reports[key, position].mc
            rows.append([label, position, _fmt(mc.mean_db, 4), _fmt(mc.std_db, 4), _fmt(mc.cv, 4)])
        return rows

    for name, position in (("tableI.csv", "typical"), ("tableII.csv", "worst")):
        path = out / name
        _write_csv(path, ["deployment", "position", "mean_db", "std_db", "cv"], table_rows(position))
        files.append(path)

    for name, position in (("tableIII.csv", "typical"), ("tableIV.csv", "worst")):
        rows = [
            [str(r.cardinality), _fmt(r.stats.mean_db, 4), _fmt(r.stats.std_db, 4),
             _fmt(r.stats.cv, 4), f"{r.ratio:.5f}"]
            for r in sweeps[position]
        ]
        path = out / name
        _write_csv(path, ["k", "mean_db", "std_db", "cv", "ratio"], rows)
        files.append(path)

    for name, position in (("fig2a.csv", "typical"), ("fig2b.csv", "worst")):
        series = [(label, reports[key, position].mc) for key, label, _, _, _ in DEPLOYMENT_PRESETS]
        path = out / name
        _write_csv(path, ["threshold_db", "ccdf_probability", "series_label"], _figure_rows(series))
        files.append(path)

    q_full = td_config.layout().num_aps
    for name, position in (("fig3a.csv", "typical"), ("fig3b.csv", "worst")):
        series = [
            (("all APs" if r.cardinality == q_full else f"k={r.cardinality}"), r.stats)
            for r in sweeps[position]
        ]
        path = out / name
        _write_csv(path, ["threshold_db", "ccdf_probability", "series_label"], _figure_rows(series))
        files.append(path)

    summary = {
        f"{key}@{position}": reports[key, position].to_dict()
        for key, position in reports
    }
    path = out / "reports.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True))
    files.append(path)

    return ReproduceBundle(reports=reports, sweeps=sweeps, files=tuple(files))
