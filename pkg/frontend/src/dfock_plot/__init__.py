"""Renders dfock sweep CSV output into the eight reference figures."""

from .errors import EmptyInputError, MissingSeriesError, PlotError, SchemaError
from .recipes import FIGURE_RECIPES, FigureRecipe
from .render import EXPECTED_COLUMNS, RenderReport, load_series, render

__version__ = "0.1.0"
