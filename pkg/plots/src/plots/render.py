"""Render recipe-described CSV tables into figure files."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .recipes import FigureRecipe, PanelSpec, load_recipe

# columns each bound table must provide
_REQUIRED_COLUMNS = {
    "fig3b": {"main": ("k", "rate"), "inset": ("spacing", "fraction")},
    "fig3d": {"independent": ("t",), "collective": ("t",)},
    "fig4c": {
        "cavity_clean": ("t", "T"),
        "free_clean": ("t", "T"),
        "cavity_disordered": ("t", "T_mean", "T_stderr"),
        "free_disordered": ("t", "T_mean", "T_stderr"),
    },
}
_SITE_TABLES = {"fig3d": ("independent", "collective")}

# fixed metadata keeps image bytes independent of render time and toolchain text
_METADATA = {
    "png": {"Software": "plots"},
    "svg": {"Date": None},
    "pdf": {"CreationDate": None},
}


class RenderError(ValueError):
    """Input data missing, unverifiable, or unusable for the requested figure."""


def _verify_inputs(recipe):
    # every input is checked against its sidecar before anything is drawn
    metas = {}
    for name, spec in recipe.inputs.items():
        if not spec.path.exists():
            raise RenderError(f"input '{name}': {spec.path} does not exist")
        sidecar = spec.path.with_suffix(".json")
        if not sidecar.exists():
            raise RenderError(
                f"input '{name}': sidecar {sidecar.name} not found, cannot verify config_hash"
            )
        try:
            meta = json.loads(sidecar.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise RenderError(f"input '{name}': sidecar {sidecar.name} is not JSON ({exc})") from None
        actual = meta.get("config_hash") if isinstance(meta, dict) else None
        if not isinstance(actual, str):
            raise RenderError(f"input '{name}': sidecar {sidecar.name} carries no config_hash")
        if actual != spec.config_hash:
            raise RenderError(
                f"input '{name}': config_hash mismatch, sidecar has {actual}, "
                f"recipe expects {spec.config_hash}"
            )
        metas[name] = meta
    return metas


def _read_table(name, spec, required=(), site_prefix=False):
    with open(spec.path, newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    if not rows:
        raise RenderError(f"input '{name}': {spec.path.name} is empty")
    header = rows[0]
    body = rows[1:]
    for column in required:
        if column not in header:
            raise RenderError(f"input '{name}': column '{column}' missing from {spec.path.name}")
    if site_prefix and not any(c.startswith("site_") for c in header):
        raise RenderError(f"input '{name}': no 'site_*' columns in {spec.path.name}")
    if not body:
        raise RenderError(f"input '{name}': {spec.path.name} has no data rows")
    data = np.empty((len(body), len(header)))
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise RenderError(
                f"input '{name}': row {i + 2} of {spec.path.name} has {len(row)} fields, "
                f"header has {len(header)}"
            )
        try:
            data[i] = [float(cell) for cell in row]
        except ValueError as exc:
            raise RenderError(f"input '{name}': row {i + 2} of {spec.path.name}: {exc}") from None
    return header, data


def _column(table, name):
    header, data = table
    return data[:, header.index(name)]


def _site_block(table):
    header, data = table
    indices = [i for i, c in enumerate(header) if c.startswith("site_")]
    indices.sort(key=lambda i: int(header[i].split("_", 1)[1]))
    return data[:, indices]


def _panel(recipe, index):
    return recipe.panels[index] if index < len(recipe.panels) else PanelSpec()


def _apply_panel(ax, panel):
    if panel.title:
        ax.set_title(panel.title)
    if panel.xlabel:
        ax.set_xlabel(panel.xlabel)
    if panel.ylabel:
        ax.set_ylabel(panel.ylabel)
    ax.set_xscale(panel.xscale)
    ax.set_yscale(panel.yscale)


def _bare_rate(meta):
    try:
        return float(meta["config"]["chain"]["gamma"])
    except (KeyError, TypeError, ValueError):
        return 1.0


def _draw_fig3b(recipe, tables, metas):
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.scatter(_column(tables["main"], "k"), _column(tables["main"], "rate"),
               s=14, color="tab:blue", label="collective rate")
    ax.axhline(_bare_rate(metas["main"]), color="0.35", linestyle="--",
               linewidth=1.0, label="single-emitter rate")
    _apply_panel(ax, _panel(recipe, 0))
    ax.legend(loc="lower left", frameon=False)
    if "inset" in tables:
        inset = fig.add_axes((0.58, 0.58, 0.3, 0.28))
        inset.plot(_column(tables["inset"], "spacing"), _column(tables["inset"], "fraction"),
                   "o-", color="tab:red", markersize=3.5, linewidth=1.0)
        inset.set_xlabel("spacing", fontsize=8)
        inset.set_ylabel("superradiant fraction", fontsize=8)
        inset.tick_params(labelsize=7)
    return fig


def _draw_fig3d(recipe, tables, metas):
    blocks = {}
    peak = 0.0
    for name in ("independent", "collective"):
        times = _column(tables[name], "t")
        populations = _site_block(tables[name])
        blocks[name] = (times, populations)
        peak = max(peak, float(populations.max()))
    fig, axes = plt.subplots(2, 1, figsize=(6.0, 6.6), sharex=True)
    image = None
    for index, name in enumerate(("independent", "collective")):
        times, populations = blocks[name]
        # one normalization for both panels so the decay models stay comparable
        image = axes[index].imshow(
            populations,
            origin="lower",
            aspect="auto",
            interpolation="nearest",
            extent=(0.5, populations.shape[1] + 0.5, times[0], times[-1]),
            vmin=0.0,
            vmax=peak,
            cmap="viridis",
        )
        _apply_panel(axes[index], _panel(recipe, index))
    fig.colorbar(image, ax=list(axes), label="population", fraction=0.05, pad=0.03)
    return fig


def _draw_fig4c(recipe, tables, metas):
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.plot(_column(tables["cavity_clean"], "t"), _column(tables["cavity_clean"], "T"),
            color="tab:blue", linewidth=1.4, label="cavity, clean")
    for name, color, style, label in (
        ("cavity_disordered", "tab:orange", "-", "cavity, disorder mean"),
        ("free_disordered", "tab:red", "-.", "free space, disorder mean"),
    ):
        times = _column(tables[name], "t")
        mean = _column(tables[name], "T_mean")
        stderr = _column(tables[name], "T_stderr")
        ax.plot(times, mean, color=color, linestyle=style, linewidth=1.4, label=label)
        ax.fill_between(times, mean - stderr, mean + stderr, color=color, alpha=0.3, linewidth=0)
    ax.plot(_column(tables["free_clean"], "t"), _column(tables["free_clean"], "T"),
            color="tab:green", linestyle="--", linewidth=1.4, label="free space, clean")
    _apply_panel(ax, _panel(recipe, 0))
    ax.legend(frameon=False)
    return fig


_DRAW = {"fig3b": _draw_fig3b, "fig3d": _draw_fig3d, "fig4c": _draw_fig4c}


def render(recipe, output_dir=None):
    """Render one figure described by a recipe.

    All inputs are verified (existence, sidecar config hash, required
    columns, rectangular numeric data) before any drawing starts, so a
    failed render writes nothing.

    Parameters
    ----------
    recipe : FigureRecipe or str or Path
        A loaded recipe, or the path of a recipe YAML file.
    output_dir : str or Path, optional
        Directory overriding the recipe's output location; the file name
        from the recipe is kept.

    Returns
    -------
    Path
        The written image file.

    Raises
    ------
    RenderError
        If any input is missing, fails its hash check, or does not parse.
    """
    if not isinstance(recipe, FigureRecipe):
        recipe = load_recipe(recipe)
    metas = _verify_inputs(recipe)
    tables = {}
    for name, spec in recipe.inputs.items():
        tables[name] = _read_table(
            name,
            spec,
            required=_REQUIRED_COLUMNS[recipe.figure].get(name, ()),
            site_prefix=name in _SITE_TABLES.get(recipe.figure, ()),
        )
    figure = _DRAW[recipe.figure](recipe, tables, metas)
    target = recipe.output
    if output_dir is not None:
        target = Path(output_dir) / target.name
    target.parent.mkdir(parents=True, exist_ok=True)
    try:
        figure.savefig(target, dpi=recipe.dpi, format=recipe.format,
                       metadata=_METADATA.get(recipe.format))
    finally:
        plt.close(figure)
    return target
