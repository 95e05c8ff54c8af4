"""CCDF figure rendering from the simulator's CSV bundle.

Input files are long-form CSVs with columns
``threshold_db,ccdf_probability,series_label``; each label becomes one
curve. Rendering depends only on the CSV contents (no timestamps or
random ids), so a fixed input reproduces identical image bytes.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

plt.rcParams["svg.hashsalt"] = "render-figs"

EXPECTED_HEADER = ["threshold_db", "ccdf_probability", "series_label"]


class InvalidCsvError(ValueError):
    """Raised when a figure CSV is missing, empty or malformed; the message
    always names the offending file."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure: its source CSV, output basename and axis options."""

    csv_path: Path
    output_stem: Path  # images are written as <stem>.png and <stem>.svg
    title: str = ""
    log_y: bool = False
    x_range_db: tuple[float, float] | None = None
    p_range: tuple[float, float] | None = None
    labels: tuple[str, ...] = field(default=())  # restrict/force series, optional


@dataclass(frozen=True)
class RenderResult:
    png_path: Path
    svg_path: Path
    series: tuple[str, ...]


def _natural_key(label: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", label)]


def read_series(csv_path: Path) -> dict[str, tuple[list[float], list[float]]]:
    """Parse a long-form CCDF CSV into {label: (thresholds, probabilities)}."""
    csv_path = Path(csv_path)
    if not csv_path.exists():
        raise InvalidCsvError(f"{csv_path}: file not found")
    with csv_path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidCsvError(f"{csv_path}: file is empty") from None
        if header != EXPECTED_HEADER:
            raise InvalidCsvError(
                f"{csv_path}: expected header {','.join(EXPECTED_HEADER)}, got {','.join(header)}"
            )
        series: dict[str, tuple[list[float], list[float]]] = {}
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise InvalidCsvError(f"{csv_path}:{lineno}: expected 3 columns, got {len(row)}")
            try:
                t, p = float(row[0]), float(row[1])
            except ValueError:
                raise InvalidCsvError(f"{csv_path}:{lineno}: non-numeric value") from None
            if not 0.0 <= p <= 1.0:
                raise InvalidCsvError(f"{csv_path}:{lineno}: probability {p} outside [0, 1]")
            series.setdefault(row[2], ([], []))
            series[row[2]][0].append(t)
            series[row[2]][1].append(p)
    if not series:
        raise InvalidCsvError(f"{csv_path}: no data rows")
    return series


def render_ccdf(spec: FigureSpec) -> RenderResult:
    """Render one CCDF figure to <stem>.png and <stem>.svg.

    Curves are drawn in natural label order. Raises InvalidCsvError when
    the source CSV is unusable or lacks a requested label.
    """
    series = read_series(spec.csv_path)
    if spec.labels:
        missing = [l for l in spec.labels if l not in series]
        if missing:
            raise InvalidCsvError(f"{spec.csv_path}: missing series {', '.join(missing)}")
        series = {l: series[l] for l in spec.labels}

    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    labels = sorted(series, key=_natural_key)
    for label in labels:
        t, p = series[label]
        ax.plot(t, p, lw=1.5, label=label)
    ax.set_xlabel("channel gain threshold [dB]")
    ax.set_ylabel("CCDF  P(gain > threshold)")
    if spec.title:
        ax.set_title(spec.title)
    if spec.log_y:
        ax.set_yscale("log")
    if spec.x_range_db:
        ax.set_xlim(*spec.x_range_db)
    if spec.p_range:
        ax.set_ylim(*spec.p_range)
    ax.grid(alpha=0.3)
    ax.legend(fontsize=9)
    fig.tight_layout()

    spec.output_stem.parent.mkdir(parents=True, exist_ok=True)
    png = spec.output_stem.with_suffix(".png")
    svg = spec.output_stem.with_suffix(".svg")
    fig.savefig(png, dpi=130)
    fig.savefig(svg, metadata={"Date": None})
    plt.close(fig)
    return RenderResult(png_path=png, svg_path=svg, series=tuple(labels))


# bundle file stem -> title
BUNDLE_FIGURES = (
    ("fig2a", "Channel gain CCDF, typical position"),
    ("fig2b", "Channel gain CCDF, worst-case position"),
    ("fig3a", "Best-AP subsets, typical position"),
    ("fig3b", "Best-AP subsets, worst-case position"),
)


def render_bundle(results_dir, out_dir, log_y: bool = False) -> list[RenderResult]:
    """Render the four bundle figures from ``results_dir`` into ``out_dir``."""
    results_dir, out_dir = Path(results_dir), Path(out_dir)
    rendered = []
    for stem, title in BUNDLE_FIGURES:
        spec = FigureSpec(
            csv_path=results_dir / f"{stem}.csv",
            output_stem=out_dir / stem,
            title=title,
            log_y=log_y,
        )
        rendered.append(render_ccdf(spec))
    return rendered
