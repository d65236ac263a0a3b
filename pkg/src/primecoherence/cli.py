"""Command-line entry point: ``primecoherence run|validate|presets``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, dump_config, load_config, parse_config
from .experiment import run as run_sweep
from .presets import PRESETS, preset

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="primecoherence",
                                     description="Spectral observables of prime coherence Hamiltonians.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute every run in a config file")
    p_run.add_argument("config", help="YAML config path, or preset:<name>")
    p_run.add_argument("--out", default="out", help="output directory (default: ./out)")
    p_run.add_argument("--jobs", type=int, default=1, help="runs executed in parallel")
    p_run.add_argument("--emit-kernel", action="store_true", help="also write kernel.csv for every run")
    p_run.add_argument("--seed", type=_u64, default=None, help="override every run's seed")

    p_val = sub.add_parser("validate", help="check a config file and list every violation")
    p_val.add_argument("config")

    p_pre = sub.add_parser("presets", help="list, print or write the built-in configs")
    p_pre.add_argument("name", nargs="?", choices=sorted(PRESETS))
    p_pre.add_argument("--out", default=None, help="write preset YAML file(s) into this directory")
    return parser


def _load(source: str):
    if source.startswith("preset:"):
        name = source.split(":", 1)[1]
        if name not in PRESETS:
            raise ConfigError([f"{source}: unknown preset (choose from {', '.join(sorted(PRESETS))})"])
        return parse_config(dump_config(preset(name)), source)
    return load_config(source)


def _cmd_run(args) -> int:
    try:
        config = _load(args.config)
    except ConfigError as exc:
        for problem in exc.problems:
            print(problem, file=sys.stderr)
        return EXIT_CONFIG
    artifacts = run_sweep(config, args.out, jobs=max(1, args.jobs), emit_kernel=args.emit_kernel, seed=args.seed)
    failed = 0
    for art in artifacts:
        status = "ok" if art.ok else "FAILED"
        print(f"{art.run_id}: {status} ({art.wall_time:.2f}s) -> {art.directory}")
        for err in art.errors:
            print(f"  {err['type']}: {err['message']}", file=sys.stderr)
        failed += not art.ok
    return EXIT_PARTIAL if failed else EXIT_OK


def _cmd_validate(args) -> int:
    try:
        config = _load(args.config)
    except ConfigError as exc:
        for problem in exc.problems:
            print(problem, file=sys.stderr)
        return EXIT_CONFIG
    print(f"{config.source}: ok ({len(config.runs)} runs)")
    return EXIT_OK


def _cmd_presets(args) -> int:
    names = [args.name] if args.name else sorted(PRESETS)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name in names:
            path = out / f"{name}.yaml"
            path.write_text(dump_config(preset(name)))
            print(path)
    elif args.name:
        sys.stdout.write(dump_config(preset(args.name)))
    else:
        for name in names:
            print(name)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "validate": _cmd_validate, "presets": _cmd_presets}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
