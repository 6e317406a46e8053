"""Command-line entry point: ``piezoxfmr {modes,sweep,pump,chain} --config FILE --out DIR``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
Set PIEZOXFMR_LOG (e.g. DEBUG, INFO) for log output on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from pathlib import Path

from .config import parse_config
from .errors import ConfigError, NumericalError
from .scenarios import run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="piezoxfmr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "modes": "bending eigenfrequency table",
        "sweep": "two-port gain sweep and peak search (optionally comparing film sets)",
        "pump": "charge-pump transient and steady-state metrics",
        "chain": "transformer Thevenin source feeding the charge pump",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, type=Path, help="scenario JSON file")
        p.add_argument("--out", required=True, type=Path, help="output directory")
        p.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="dotted-path override, value parsed as JSON when possible (repeatable)",
        )
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("PIEZOXFMR_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)

    try:
        text = args.config.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"config error: cannot read {args.config}: {exc.strerror}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        scenario = parse_config(text, args.override, kind=args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            logging.captureWarnings(True)
            report = run_scenario(scenario, args.out)
    except NumericalError as exc:
        print(f"numerical failure in {scenario.kind} scenario: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"cannot write artifacts to {args.out}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"invalid {scenario.kind} scenario: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        logging.captureWarnings(False)

    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
