"""Command-line entry point ``simulate``.

    simulate CONFIG                      run a scenario file
    simulate --validate CONFIG           parse only
    simulate --preset fig4 --out DIR     reproduce a figure's data

Exit codes: 0 success, 2 configuration error, 3 runtime (window/IO) error.
"""

import argparse
import sys
from pathlib import Path

from . import _kernels
from .config import PRESETS, ScenarioConfig, parse_config
from .errors import ConfigError, ConsistencyError, DomainError, WindowError
from .scenario import run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser():
    ap = argparse.ArgumentParser(prog="simulate", description="Quantum particle on a tilted 1D/2D lattice")
    ap.add_argument("config", nargs="?", help="scenario file (key = value lines)")
    ap.add_argument("--preset", choices=PRESETS, help="run a figure preset instead of a config file")
    ap.add_argument("--out", help="output directory (overrides output_dir)")
    ap.add_argument("--validate", action="store_true", help="parse and validate the config, then exit")
    ap.add_argument("--threads", type=int, default=0, help="worker threads, 0 = auto")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if (args.config is None) == (args.preset is None):
        print("simulate: give exactly one of CONFIG or --preset", file=sys.stderr)
        return EXIT_CONFIG
    if args.threads < 0:
        print("simulate: --threads must be >= 0", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.preset is not None:
            cfg = parse_config(f"mode = figure-preset\npreset = {args.preset}\n")
        else:
            try:
                text = Path(args.config).read_text(encoding="utf-8")
            except OSError as exc:
                print(f"simulate: cannot read {args.config}: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            cfg = parse_config(text)
    except ConfigError as exc:
        print(f"simulate: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.validate:
        print(f"{args.config or args.preset}: ok ({cfg.mode})")
        return EXIT_OK

    _kernels.set_threads(args.threads)
    try:
        written = run_scenario(cfg, args.out)
    except (ConfigError, ConsistencyError, DomainError) as exc:
        print(f"simulate: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WindowError, OSError) as exc:
        print(f"simulate: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {len(written)} files")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
