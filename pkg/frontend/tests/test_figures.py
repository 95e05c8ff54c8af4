import pytest

from render_figs import FigureSpec, InvalidCsvError, read_series, render_ccdf

HEADER = "threshold_db,ccdf_probability,series_label\n"


def write_csv(path, labels, points=6):
    rows = [HEADER]
    for label in labels:
        for i in range(points):
            rows.append(f"{-80 + i},{max(0.0, 1.0 - 0.2 * i):.4f},{label}\n")
    path.write_text("".join(rows))
    return path


class TestReadSeries:
    def test_parses_labels(self, tmp_path):
        path = write_csv(tmp_path / "f.csv", ["a", "b"])
        series = read_series(path)
        assert set(series) == {"a", "b"}
        assert len(series["a"][0]) == 6

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidCsvError, match="nothere.csv"):
            read_series(tmp_path / "nothere.csv")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(InvalidCsvError, match="empty.csv"):
            read_series(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "bare.csv"
        path.write_text(HEADER)
        with pytest.raises(InvalidCsvError, match="no data rows"):
            read_series(path)

    def test_wrong_header(self, tmp_path):
        path = tmp_path / "odd.csv"
        path.write_text("x,y\n1,2\n")
        with pytest.raises(InvalidCsvError, match="odd.csv"):
            read_series(path)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(HEADER + "-80,high,a\n")
        with pytest.raises(InvalidCsvError, match="bad.csv:2"):
            read_series(path)

    def test_probability_range(self, tmp_path):
        path = tmp_path / "oob.csv"
        path.write_text(HEADER + "-80,1.5,a\n")
        with pytest.raises(InvalidCsvError, match="outside"):
            read_series(path)


class TestRenderCcdf:
    def test_renders_png_and_svg(self, tmp_path):
        path = write_csv(tmp_path / "fig.csv", ["k=1", "k=4", "k=8", "k=16", "all APs"])
        result = render_ccdf(FigureSpec(csv_path=path, output_stem=tmp_path / "out" / "fig"))
        assert result.png_path.exists() and result.png_path.stat().st_size > 0
        assert result.svg_path.exists() and result.svg_path.stat().st_size > 0
        assert len(result.series) == 5

    def test_series_sorted_naturally(self, tmp_path):
        path = write_csv(tmp_path / "fig.csv", ["k=16", "k=1", "k=8", "k=4", "all APs"])
        result = render_ccdf(FigureSpec(csv_path=path, output_stem=tmp_path / "fig"))
        assert list(result.series) == ["all APs", "k=1", "k=4", "k=8", "k=16"]

    def test_svg_contains_labels(self, tmp_path):
        path = write_csv(tmp_path / "fig.csv", ["alpha", "beta"])
        result = render_ccdf(FigureSpec(csv_path=path, output_stem=tmp_path / "fig"))
        svg = result.svg_path.read_text()
        assert "alpha" in svg and "beta" in svg

    def test_missing_requested_label(self, tmp_path):
        path = write_csv(tmp_path / "fig.csv", ["a"])
        spec = FigureSpec(csv_path=path, output_stem=tmp_path / "fig", labels=("a", "b"))
        with pytest.raises(InvalidCsvError, match="missing series b"):
            render_ccdf(spec)

    def test_rerender_is_byte_identical(self, tmp_path):
        path = write_csv(tmp_path / "fig.csv", ["a", "b", "c"])
        r1 = render_ccdf(FigureSpec(csv_path=path, output_stem=tmp_path / "one" / "fig"))
        r2 = render_ccdf(FigureSpec(csv_path=path, output_stem=tmp_path / "two" / "fig"))
        assert r1.png_path.read_bytes() == r2.png_path.read_bytes()
        assert r1.svg_path.read_bytes() == r2.svg_path.read_bytes()

    def test_log_scale_flag(self, tmp_path):
        path = write_csv(tmp_path / "fig.csv", ["a"])
        result = render_ccdf(
            FigureSpec(csv_path=path, output_stem=tmp_path / "fig", log_y=True)
        )
        assert result.svg_path.exists()
