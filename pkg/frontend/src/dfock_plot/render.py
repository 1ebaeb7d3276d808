"""CSV loading, schema validation and deterministic figure rendering."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import EmptyInputError, MissingSeriesError, SchemaError
from .recipes import FigureRecipe, axis_tex, observable_tex

EXPECTED_COLUMNS = (
    "figure_id",
    "mode",
    "state_kind",
    "state_label_re",
    "state_label_im",
    "fixed_param_name",
    "fixed_param_value",
    "sweep_param_name",
    "sweep_param_value",
    "observable",
    "value",
    "imag_diagnostic",
    "tail_mass",
    "cutoff",
)

# fixed salt so matplotlib's internal SVG ids are run-independent
_SVG_HASHSALT = "dfock-plot"


@dataclass(frozen=True)
class RenderReport:
    out_path: str
    curves: int
    points_plotted: int
    na_dropped: int
    legend_labels: tuple[str, ...]


def _parse_float(text: str, column: str, line: int) -> float | None:
    if text == "NA":
        return None
    try:
        return float(text)
    except ValueError as exc:
        raise SchemaError(f"line {line}: bad {column} value {text!r}") from exc


def load_series(
    csv_path: str, recipe: FigureRecipe
) -> tuple[dict[float, list[tuple[float, float | None]]], int]:
    """Curves keyed by fixed value, plus the count of NA rows."""
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyInputError(f"{csv_path}: no header row")
        if tuple(reader.fieldnames) != EXPECTED_COLUMNS:
            raise SchemaError(
                f"{csv_path}: header {reader.fieldnames!r} does not match the "
                f"sweep schema {list(EXPECTED_COLUMNS)!r}"
            )
        curves: dict[float, list[tuple[float, float | None]]] = {}
        na_count = 0
        for line, row in enumerate(reader, start=2):
            if row["observable"] != recipe.y_label:
                raise SchemaError(
                    f"line {line}: observable {row['observable']!r}, "
                    f"figure {recipe.figure_id} expects {recipe.y_label!r}"
                )
            if row["sweep_param_name"] != recipe.x_label:
                raise SchemaError(
                    f"line {line}: sweep axis {row['sweep_param_name']!r}, "
                    f"figure {recipe.figure_id} expects {recipe.x_label!r}"
                )
            fixed = _parse_float(row["fixed_param_value"], "fixed_param_value", line)
            x = _parse_float(row["sweep_param_value"], "sweep_param_value", line)
            if fixed is None or x is None:
                raise SchemaError(f"line {line}: NA in a parameter column")
            y = _parse_float(row["value"], "value", line)
            # an NA row still attests its series (an entirely non-converged
            # curve renders as an empty line, not a schema failure)
            series = curves.setdefault(fixed, [])
            if y is None:
                na_count += 1
            else:
                series.append((x, y))
    if not curves:
        raise EmptyInputError(f"{csv_path}: no data rows")

    present = set(curves)
    missing = [v for v in recipe.legend_values if v not in present]
    if missing:
        names = ", ".join(
            f"{axis_tex(recipe.fixed_axis)} = {v:g}".replace("$", "")
            for v in missing
        )
        raise MissingSeriesError(
            f"{csv_path}: missing legend series: {names}"
        )
    extra = present - set(recipe.legend_values)
    if extra:
        raise SchemaError(
            f"{csv_path}: unexpected fixed values {sorted(extra)} for "
            f"figure {recipe.figure_id}"
        )
    return curves, na_count


def render(
    recipe: FigureRecipe,
    csv_path: str,
    out_path: str,
    image_format: str = "svg",
) -> RenderReport:
    if image_format not in ("svg", "png"):
        raise SchemaError(f"unsupported output format {image_format!r}")
    curves, na_count = load_series(csv_path, recipe)

    with plt.rc_context({"svg.hashsalt": _SVG_HASHSALT, "figure.dpi": 100}):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        try:
            points = 0
            for fixed in recipe.legend_values:
                pts = sorted(curves.get(fixed, ()))
                xs = [p[0] for p in pts]
                ys = [p[1] for p in pts]
                points += len(pts)
                ax.plot(
                    xs, ys,
                    label=f"{axis_tex(recipe.fixed_axis)} = {fixed:g}",
                )
            ax.set_xlabel(axis_tex(recipe.x_label))
            ax.set_ylabel(observable_tex(recipe.y_label))
            ax.set_title(recipe.title)
            ax.legend()
            labels = tuple(ax.get_legend_handles_labels()[1])
            fig.tight_layout()
            # empty metadata dates keep the SVG/PNG output byte-stable
            metadata = {"Date": None} if image_format == "svg" else {}
            fig.savefig(out_path, format=image_format, metadata=metadata)
        except Exception:
            if os.path.exists(out_path):
                os.remove(out_path)
            raise
        finally:
            plt.close(fig)
    return RenderReport(
        out_path=out_path,
        curves=len(recipe.legend_values),
        points_plotted=points,
        na_dropped=na_count,
        legend_labels=labels,
    )
