"""Command-line entry points for the scenario runner.

Each subcommand validates a YAML config, runs one scenario, and writes CSV
tables with JSON sidecars. ``figure`` falls back to the packaged config for
the requested panel, so ``emitterchain figure fig4c`` reproduces the pinned
dataset with no arguments.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources

from .scenarios import FIGURES, ConfigError, load_config, run_scenario

_GENERIC = (
    "couplings",
    "spectrum",
    "evolve",
    "wavepacket",
    "concurrence",
    "polaritons",
    "transmission",
)


def packaged_config(name: str):
    """Path-like handle to the checked-in config for one figure panel."""
    return resources.files("emitterchain") / "configs" / f"{name}.yaml"


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="emitterchain",
        description="Deterministic scenario runs for collective emitter chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _GENERIC:
        p = sub.add_parser(name, help=f"run a '{name}' scenario from a config file")
        p.add_argument("--config", required=True, help="YAML scenario config")
        p.add_argument("--output-dir", default=None, help="override the output directory")
    pf = sub.add_parser("figure", help="reproduce one figure dataset")
    pf.add_argument("name", choices=FIGURES)
    pf.add_argument("--config", default=None, help="override the packaged config")
    pf.add_argument("--output-dir", default=None, help="override the output directory")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "figure":
            expected = args.name
            source = args.config
            if source is None:
                with resources.as_file(packaged_config(args.name)) as path:
                    cfg = load_config(path)
            else:
                cfg = load_config(source)
        else:
            expected = args.command
            cfg = load_config(args.config)
        if cfg["scenario"] != expected:
            raise ConfigError(
                [f"scenario: config declares {cfg['scenario']!r}, command expects {expected!r}"]
            )
        result = run_scenario(cfg, output_dir=args.output_dir, write=False)
        for path in result.write(args.output_dir):
            print(path)
        return 0
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
