"""The ``lab`` command: list experiments, run one, or validate the build.

Exit codes: 0 success, 1 check failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from nisqlab.errors import ConfigError, SizeCapError
from nisqlab.experiments import (
    ExperimentConfig,
    list_experiments,
    load_config,
    run_experiment,
)


def _parse_override(item: str) -> tuple[str, object]:
    key, sep, raw = item.partition("=")
    if not sep or not key:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _cmd_list(_args) -> int:
    rows = list_experiments()
    width = max(len(name) for name, _, _ in rows)
    for name, description, anchor in rows:
        print(f"{name:<{width}}  {description}")
        print(f"{'':<{width}}  claim: {anchor}")
    return 0


def _cmd_run(args) -> int:
    if args.config:
        cfg = load_config(args.config)
        if args.experiment:
            cfg.experiment = args.experiment
    elif args.experiment:
        cfg = ExperimentConfig(experiment=args.experiment)
    else:
        raise ConfigError("lab run needs --config FILE or --experiment NAME")
    for item in args.overrides:
        key, value = _parse_override(item)
        cfg.params[key] = value
    if args.output_dir:
        cfg.output_dir = args.output_dir
    manifest = run_experiment(cfg, plot=args.plot)
    print(f"{manifest.experiment}: config {manifest.config_hash[:12]}")
    for entry in manifest.outputs:
        print(f"  {entry['file']}  sha256={entry['sha256'][:16]}")
    return 0


def _cmd_validate(_args) -> int:
    from nisqlab.validate import validate_suite

    _, all_passed = validate_suite()
    return 0 if all_passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lab",
        description="Reproducible noisy-quantum-sampling experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list experiments with their claims")

    p_run = sub.add_parser("run", help="run one experiment")
    p_run.add_argument("--config", help="JSON config file")
    p_run.add_argument("--experiment", help="experiment name")
    p_run.add_argument(
        "--set",
        action="append",
        dest="overrides",
        default=[],
        metavar="KEY=VALUE",
        help="override a parameter (value parsed as JSON, else string)",
    )
    p_run.add_argument("--output-dir", help="directory for CSV/manifest outputs")
    p_run.add_argument(
        "--plot", action="store_true", help="also render figures next to the CSVs"
    )

    sub.add_parser("validate", help="run the full acceptance suite")

    args = parser.parse_args(argv)
    try:
        if args.command == "list":
            return _cmd_list(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_validate(args)
    except (ConfigError, SizeCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
