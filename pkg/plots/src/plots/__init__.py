"""Batch renderer for emitterchain scenario outputs.

Consumes only the CSV tables and JSON sidecars the simulation package
writes; each recipe pins the config hash its inputs must carry, so a
figure can never silently mix data from different runs.
"""

__version__ = "0.1.0"

from .recipes import (
    FIGURES,
    FigureRecipe,
    InputSpec,
    PanelSpec,
    RecipeError,
    load_recipe,
)
from .render import RenderError, render

__all__ = [
    "FIGURES",
    "FigureRecipe",
    "InputSpec",
    "PanelSpec",
    "RecipeError",
    "RenderError",
    "load_recipe",
    "render",
]
