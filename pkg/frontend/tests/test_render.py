"""Renderer tests against CSVs produced by the sweep CLI (external interface)."""

from __future__ import annotations

import csv
import subprocess
import sys

import pytest

from dfock_plot import (
    FIGURE_RECIPES,
    EmptyInputError,
    MissingSeriesError,
    SchemaError,
    load_series,
    render,
)
from dfock_plot.cli import EXIT_FAILURE, EXIT_OK, main


@pytest.fixture(scope="session")
def fig1_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "fig1.csv"
    subprocess.run(
        [sys.executable, "-m", "dfock.cli", "figure", "1",
         "--range=-0.5:0.5:5", "--out", str(path)],
        check=True,
    )
    return path


def _doctor(src, dst, keep_row):
    with open(src, newline="") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    with open(dst, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(
            [rows[0]] + [r for r in rows[1:] if keep_row(r)]
        )


class TestRender:
    def test_renders_svg(self, fig1_csv, tmp_path):
        out = tmp_path / "fig1.svg"
        report = render(FIGURE_RECIPES[1], str(fig1_csv), str(out))
        assert out.exists()
        assert out.read_text().lstrip().startswith("<?xml")
        assert report.curves == 4
        assert report.points_plotted == 20
        assert report.na_dropped == 0

    def test_legend_matches_recipe_constants(self, fig1_csv, tmp_path):
        out = tmp_path / "fig1.svg"
        report = render(FIGURE_RECIPES[1], str(fig1_csv), str(out))
        assert report.legend_labels == (
            r"$\lambda_2$ = 0.01", r"$\lambda_2$ = 2",
            r"$\lambda_2$ = 5.5", r"$\lambda_2$ = 8",
        )

    def test_repeated_renders_are_byte_identical(self, fig1_csv, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        render(FIGURE_RECIPES[1], str(fig1_csv), str(a))
        render(FIGURE_RECIPES[1], str(fig1_csv), str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_png_format(self, fig1_csv, tmp_path):
        out = tmp_path / "fig1.png"
        render(FIGURE_RECIPES[1], str(fig1_csv), str(out), image_format="png")
        assert out.read_bytes().startswith(b"\x89PNG")


class TestValidation:
    def test_missing_series_named_in_error(self, fig1_csv, tmp_path):
        doctored = tmp_path / "missing.csv"
        _doctor(fig1_csv, doctored, lambda r: r[6] != "2")  # drop lambda2 = 2
        with pytest.raises(MissingSeriesError, match=r"lambda_2 = 2"):
            load_series(str(doctored), FIGURE_RECIPES[1])

    def test_empty_csv_is_an_error_and_writes_nothing(self, fig1_csv, tmp_path):
        doctored = tmp_path / "empty.csv"
        _doctor(fig1_csv, doctored, lambda r: False)
        out = tmp_path / "fig.svg"
        with pytest.raises(EmptyInputError):
            render(FIGURE_RECIPES[1], str(doctored), str(out))
        assert not out.exists()

    def test_headerless_file_is_an_error(self, tmp_path):
        path = tmp_path / "blank.csv"
        path.write_text("")
        with pytest.raises(EmptyInputError):
            load_series(str(path), FIGURE_RECIPES[1])

    def test_wrong_header_is_a_schema_error(self, fig1_csv, tmp_path):
        doctored = tmp_path / "badheader.csv"
        text = fig1_csv.read_text().replace("figure_id", "fig", 1)
        doctored.write_text(text)
        with pytest.raises(SchemaError, match="schema"):
            load_series(str(doctored), FIGURE_RECIPES[1])

    def test_wrong_observable_is_a_schema_error(self, fig1_csv):
        # figure 2 expects dp2, the fixture carries dx2
        with pytest.raises(SchemaError, match="dp2"):
            load_series(str(fig1_csv), FIGURE_RECIPES[2])

    def test_unexpected_series_is_a_schema_error(self, fig1_csv, tmp_path):
        doctored = tmp_path / "extra.csv"
        with open(fig1_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        extra = list(rows[1])
        extra[6] = "3.25"
        with open(doctored, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(rows + [extra])
        with pytest.raises(SchemaError, match="unexpected fixed values"):
            load_series(str(doctored), FIGURE_RECIPES[1])

    def test_na_rows_dropped_with_count(self, fig1_csv, tmp_path):
        doctored = tmp_path / "na.csv"
        with open(fig1_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        for r in rows[1:3]:
            r[10] = "NA"
        with open(doctored, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(rows)
        report = render(FIGURE_RECIPES[1], str(doctored), str(tmp_path / "na.svg"))
        assert report.na_dropped == 2
        assert report.points_plotted == 18


class TestCli:
    def test_success_exit_zero(self, fig1_csv, tmp_path, capsys):
        out = tmp_path / "fig1.svg"
        code = main(["--figure", "1", "--csv", str(fig1_csv), "--out", str(out)])
        assert code == EXIT_OK
        assert out.exists()
        assert "4 curves" in capsys.readouterr().out

    def test_failure_exit_one_with_named_series(self, fig1_csv, tmp_path, capsys):
        doctored = tmp_path / "missing.csv"
        _doctor(fig1_csv, doctored, lambda r: r[6] != "8")
        out = tmp_path / "fig1.svg"
        code = main(["--figure", "1", "--csv", str(doctored), "--out", str(out)])
        assert code == EXIT_FAILURE
        assert "lambda_2 = 8" in capsys.readouterr().err

    def test_na_warning_printed(self, fig1_csv, tmp_path, capsys):
        doctored = tmp_path / "na.csv"
        with open(fig1_csv, newline="") as fh:
            rows = list(csv.reader(fh))
        rows[1][10] = "NA"
        with open(doctored, "w", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(rows)
        code = main(["--figure", "1", "--csv", str(doctored),
                     "--out", str(tmp_path / "na.svg")])
        assert code == EXIT_OK
        assert "dropped 1 NA rows" in capsys.readouterr().err
