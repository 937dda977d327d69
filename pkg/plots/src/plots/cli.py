"""Command line entry point: ``plots render --recipe <file>``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .recipes import RecipeError, load_recipe
from .render import RenderError, render


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render emitterchain CSV/JSON outputs into figure files.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    cmd = commands.add_parser("render", help="render one figure from a recipe file")
    cmd.add_argument("--recipe", required=True, help="recipe YAML file")
    cmd.add_argument("--output-dir", default=None,
                     help="directory overriding the recipe's output location")
    return parser


def main(argv=None):
    """Run the renderer; returns 0 on success, 2 on any reported failure."""
    args = _build_parser().parse_args(argv)
    try:
        recipe = load_recipe(Path(args.recipe))
        written = render(recipe, output_dir=args.output_dir)
    except (RecipeError, RenderError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(written)
    return 0


if __name__ == "__main__":
    sys.exit(main())
