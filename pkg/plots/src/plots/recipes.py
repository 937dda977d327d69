"""Figure recipes: which tables to read, how to label them, where the image goes."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import yaml

FIGURES = ("fig3b", "fig3d", "fig4c")

# table names each figure must (and may) bind in its recipe
REQUIRED_INPUTS = {
    "fig3b": ("main",),
    "fig3d": ("independent", "collective"),
    "fig4c": ("cavity_clean", "cavity_disordered", "free_clean", "free_disordered"),
}
OPTIONAL_INPUTS = {
    "fig3b": ("inset",),
    "fig3d": (),
    "fig4c": (),
}

_FORMATS = ("pdf", "png", "svg")
_HASH_RE = re.compile(r"[0-9a-f]{64}")


class RecipeError(ValueError):
    """Malformed recipe file; ``messages`` lists one problem per field."""

    def __init__(self, messages):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


@dataclass(frozen=True)
class InputSpec:
    """One input table: its CSV path and the sidecar config hash it must carry."""

    path: Path
    config_hash: str


@dataclass(frozen=True)
class PanelSpec:
    """Axis labels and scales for one panel; empty strings leave a label unset."""

    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    xscale: str = "linear"
    yscale: str = "linear"


@dataclass(frozen=True)
class FigureRecipe:
    """Everything the renderer needs for one figure.

    Paths are already resolved against the directory of the recipe file
    they came from.
    """

    figure: str
    inputs: dict
    output: Path
    format: str
    dpi: int = 150
    panels: tuple = field(default_factory=tuple)


def load_recipe(path):
    """Load and validate a recipe YAML file.

    Parameters
    ----------
    path : str or Path
        Recipe file. Input and output paths inside it are resolved
        relative to this file's directory; absolute paths pass through.

    Returns
    -------
    FigureRecipe

    Raises
    ------
    RecipeError
        With one message per offending field.
    """
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise RecipeError([f"{path}: {exc}"]) from None
    except yaml.YAMLError as exc:
        raise RecipeError([f"{path}: not valid YAML ({exc})"]) from None
    if not isinstance(raw, dict):
        raise RecipeError([f"{path}: recipe must be a mapping"])

    msgs = []
    for key in sorted(set(raw) - {"figure", "output", "format", "dpi", "inputs", "panels"}):
        msgs.append(f"{key}: unknown field")

    figure = raw.get("figure")
    if figure not in FIGURES:
        msgs.append(f"figure: must be one of {', '.join(FIGURES)}")

    output = raw.get("output")
    if not isinstance(output, str) or not output:
        msgs.append("output: must be a non-empty path string")
        output = "figure.png"
    fmt = raw.get("format", Path(output).suffix.lstrip(".").lower() or "png")
    if fmt not in _FORMATS:
        msgs.append(f"format: must be one of {', '.join(_FORMATS)}")

    dpi = raw.get("dpi", 150)
    if not isinstance(dpi, int) or isinstance(dpi, bool) or dpi <= 0:
        msgs.append("dpi: must be a positive integer")
        dpi = 150

    inputs = {}
    raw_inputs = raw.get("inputs")
    if not isinstance(raw_inputs, dict) or not raw_inputs:
        msgs.append("inputs: must be a non-empty mapping of table name to path and hash")
    elif figure in FIGURES:
        allowed = set(REQUIRED_INPUTS[figure]) | set(OPTIONAL_INPUTS[figure])
        for name in REQUIRED_INPUTS[figure]:
            if name not in raw_inputs:
                msgs.append(f"inputs/{name}: required for {figure}")
        for name, entry in raw_inputs.items():
            if name not in allowed:
                msgs.append(f"inputs/{name}: not an input of {figure}")
                continue
            if not isinstance(entry, dict):
                msgs.append(f"inputs/{name}: must be a mapping with path and config_hash")
                continue
            for key in sorted(set(entry) - {"path", "config_hash"}):
                msgs.append(f"inputs/{name}/{key}: unknown field")
            csv_path = entry.get("path")
            expected = entry.get("config_hash")
            if not isinstance(csv_path, str) or not csv_path:
                msgs.append(f"inputs/{name}/path: must be a path string")
                continue
            if not (isinstance(expected, str) and _HASH_RE.fullmatch(expected)):
                msgs.append(f"inputs/{name}/config_hash: must be 64 hex characters")
                continue
            inputs[name] = InputSpec(path=(path.parent / csv_path).resolve(), config_hash=expected)

    panels = []
    raw_panels = raw.get("panels") or []
    if not isinstance(raw_panels, list):
        msgs.append("panels: must be a list")
        raw_panels = []
    for i, entry in enumerate(raw_panels):
        if not isinstance(entry, dict):
            msgs.append(f"panels/{i}: must be a mapping")
            continue
        for key in sorted(set(entry) - {"title", "xlabel", "ylabel", "xscale", "yscale"}):
            msgs.append(f"panels/{i}/{key}: unknown field")
        kwargs = {}
        usable = True
        for key in ("title", "xlabel", "ylabel"):
            if key in entry:
                if not isinstance(entry[key], str):
                    msgs.append(f"panels/{i}/{key}: must be a string")
                    usable = False
                else:
                    kwargs[key] = entry[key]
        for key in ("xscale", "yscale"):
            if key in entry:
                if entry[key] not in ("linear", "log"):
                    msgs.append(f"panels/{i}/{key}: must be linear or log")
                    usable = False
                else:
                    kwargs[key] = entry[key]
        if usable:
            panels.append(PanelSpec(**kwargs))

    if msgs:
        raise RecipeError(msgs)
    return FigureRecipe(
        figure=figure,
        inputs=inputs,
        output=(path.parent / output).resolve(),
        format=fmt,
        dpi=dpi,
        panels=tuple(panels),
    )
