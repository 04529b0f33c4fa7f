"""Curve data behind the density figures (no plotting)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import DensitySpec
from .fc_density import build_fc_spec
from .raney_density import build_raney_spec

__all__ = ["Curve", "FIGURES", "figure_curves"]

MIN_POINTS = 400


@dataclass(frozen=True)
class Curve:
    name: str
    x: np.ndarray
    density: np.ndarray
    is_probability: bool


def _specs(figure_id: str) -> tuple[list[DensitySpec], float]:
    if figure_id == "fig1":
        return [build_fc_spec(1), build_fc_spec(2)], 0.0
    if figure_id == "fig2":
        return [build_fc_spec(s) for s in range(3, 7)], 5.0
    if figure_id in ("fig3", "fig4", "fig5"):
        p = int(figure_id[-1]) - 1
        return [build_raney_spec(p, r) for r in range(1, p + 2)], 0.0
    if figure_id == "fig6":
        return [build_raney_spec(r, r) for r in range(2, 6)], 0.0
    raise ValueError(f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}")


FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")


def figure_curves(figure_id: str, points: int = MIN_POINTS) -> list[Curve]:
    """Every curve of a figure, each on ``points`` equispaced abscissae.

    fig1 is ``P_1`` with ``P_2``; fig2 is ``P_3..P_6`` restricted to ``x >= 5``;
    fig3-fig5 are ``W_{p,r}`` for ``p = 2, 3, 4`` and ``r = 1..p+1`` (the last one
    is the signed quasi-measure); fig6 is the diagonal ``W_{r,r}``, ``r = 2..5``.
    """
    if points < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} points, got {points}")
    specs, x_min = _specs(figure_id)
    curves = []
    for spec in specs:
        K = spec.support_upper
        if x_min > 0:
            x = np.linspace(x_min, K, points)
        else:
            x = np.linspace(0.0, K, points + 1)[1:]
        curves.append(Curve(spec.label, x, np.asarray(spec(x)), spec.is_probability))
    return curves
