#!/usr/bin/env python3
"""Run every built-in benchmark scenario and summarize pass/fail.

Writes one reproduce_<name>.json per scenario into --out (default
./reproduce_out) and prints a one-line verdict per scenario plus a CSV
summary on stdout.  Exit code 0 only when every scenario passes.
"""

import argparse
import json
import sys
from pathlib import Path

from pericone import PRESETS
from pericone.cli import main as cli_main


def run():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="reproduce_out",
                    help="directory for the per-scenario JSON reports")
    ap.add_argument("--only", nargs="*", default=None,
                    help="subset of scenario names (default: all)")
    args = ap.parse_args()

    names = args.only if args.only else sorted(PRESETS)
    unknown = [n for n in names if n not in PRESETS]
    if unknown:
        print(f"unknown scenario(s): {', '.join(unknown)}", file=sys.stderr)
        return 3

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    worst = 0
    for name in names:
        rc = cli_main(["reproduce", name, "--out", str(out)])
        worst = max(worst, rc)
        blob = json.loads((out / f"reproduce_{name}.json").read_text())
        for res in blob["results"]:
            rows.append((name, res["lambda"], res["found"], res["expected"],
                         "pass" if res["pass"] else "fail"))
        print(f"== {name}: {'OK' if rc == 0 else 'FAILED'}")

    print()
    print("scenario,lambda,found,expected,verdict")
    for name, lam, found, expected, verdict in rows:
        print(f"{name},{lam:.17g},{found},{expected},{verdict}")
    return worst


if __name__ == "__main__":
    sys.exit(run())
