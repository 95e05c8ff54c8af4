"""render_figs <results-dir> <out-dir>: turn the simulator's fig*.csv
files into PNG and SVG CCDF plots."""

from __future__ import annotations

import argparse
import sys

from .figures import InvalidCsvError, render_bundle


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figs",
        description="Render CCDF figures from a simulator CSV bundle",
    )
    parser.add_argument("results_dir", help="directory holding fig2a.csv .. fig3b.csv")
    parser.add_argument("out_dir", help="directory for the PNG/SVG output")
    parser.add_argument("--log-y", action="store_true", help="logarithmic probability axis")
    args = parser.parse_args(argv)

    try:
        rendered = render_bundle(args.results_dir, args.out_dir, log_y=args.log_y)
    except InvalidCsvError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    for r in rendered:
        print(f"wrote {r.png_path} and {r.svg_path} ({len(r.series)} series)")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
