"""Error hierarchy for the figure renderer."""

from __future__ import annotations


class PlotError(Exception):
    """Base class for renderer failures."""


class SchemaError(PlotError):
    """CSV does not conform to the sweep output schema."""


class EmptyInputError(PlotError):
    """CSV carries no data rows."""


class MissingSeriesError(PlotError):
    """A legend series required by the figure recipe is absent."""
