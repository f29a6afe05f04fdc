#!/usr/bin/env python3
"""Regenerate the figure data files for the transport study.

Writes the transmission suppression profiles, the flux and entropy sweep,
the derivative sweep, one steady-state correlation window, and the
near-zero-field regression report.  Every file comes out of the same CLI
handlers the package ships, so reruns are byte-identical.
"""

import argparse
import pathlib
import sys

from nesslab.cli import main as cli


JOBS = [
    ("correction_lam02.csv", ["correction", "--lambda", "0.2"]),
    ("correction_lam1.csv", ["correction", "--lambda", "1"]),
    ("flux_scan.csv", ["flux-scan"]),
    ("dflux_scan.csv", ["dflux"]),
    ("ness_window_lam05.csv", ["ness-matrix", "--lambda", "0.5", "--window", "8"]),
    ("transition_fit.json", ["transition-fit", "--format", "json"]),
]


def run(out_dir: pathlib.Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, args in JOBS:
        target = out_dir / name
        code = cli([*args, "--output", str(target)])
        if code != 0:
            print(f"{name}: exit {code}", file=sys.stderr)
            return code
        print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out", type=pathlib.Path, default=pathlib.Path("figures"),
        help="output directory (default ./figures)",
    )
    raise SystemExit(run(parser.parse_args().out))
