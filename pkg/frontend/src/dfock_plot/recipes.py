"""Figure recipes: axis labels and legend constants for the eight plots.

Each recipe pins the fixed-parameter values its figure shows as separate
curves; a conforming CSV must contain exactly those series.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FigureRecipe:
    figure_id: int
    x_label: str  # sweep axis, "l1" or "l2" in the CSV
    y_label: str  # observable column value: dx2, dp2, Q or q
    legend_values: tuple[float, ...]  # fixed_param_value per curve
    title: str

    @property
    def fixed_axis(self) -> str:
        return "l2" if self.x_label == "l1" else "l1"


_AXIS_TEX = {"l1": r"$\lambda_1$", "l2": r"$\lambda_2$"}
_OBS_TEX = {
    "dx2": r"$(\Delta x)^2$",
    "dp2": r"$(\Delta p)^2$",
    "Q": r"$Q$",
    "q": r"$q$",
}


def axis_tex(axis: str) -> str:
    return _AXIS_TEX[axis]


def observable_tex(observable: str) -> str:
    return _OBS_TEX[observable]


FIGURE_RECIPES: dict[int, FigureRecipe] = {
    1: FigureRecipe(1, "l1", "dx2", (0.01, 2.0, 5.5, 8.0),
                    "Coherent-state x-quadrature variance"),
    2: FigureRecipe(2, "l1", "dp2", (0.8, 1.4, 2.0, 5.0),
                    "Coherent-state p-quadrature variance"),
    3: FigureRecipe(3, "l2", "dx2", (-0.8, -0.4, 0.001, 0.6),
                    "Squeezed-state x-quadrature variance"),
    4: FigureRecipe(4, "l2", "dp2", (-0.001, 0.5, 0.8),
                    "Squeezed-state p-quadrature variance"),
    5: FigureRecipe(5, "l1", "Q", (-0.2, 0.0001, 0.5, 0.9),
                    "Coherent-state deformed Mandel parameter"),
    6: FigureRecipe(6, "l2", "Q", (-0.6, -0.3, 0.1, 0.8),
                    "Squeezed-state deformed Mandel parameter"),
    7: FigureRecipe(7, "l2", "q", (-0.8, -0.1, 0.2, 0.8),
                    "Coherent-state Mandel parameter"),
    8: FigureRecipe(8, "l1", "q", (-0.8, -0.2, 0.01, 0.6),
                    "Squeezed-state Mandel parameter"),
}
