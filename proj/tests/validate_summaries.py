#!/usr/bin/env python3
# Copyright 2026 The Devissage Authors
# SPDX-License-Identifier: Apache-2.0
"""Run each experiment with a small configuration and validate its JSON summary."""
import argparse
import csv
import json
import pathlib
import subprocess
import sys

import jsonschema

SMALL = {
    "dudley": ["--paths", "6", "--horizon", "4", "--trajectories", "2"],
    "rotsym": ["--paths", "8", "--horizon", "2", "--trajectories", "2"],
    "rotsym-check": ["--check-only"],
    "toy": ["--paths", "6", "--horizon", "12"],
    "coupling": ["--paths", "6", "--time-horizon", "50", "--clock-horizon", "50", "--oracle-runs", "20"],
    "boundary-law": ["--paths", "20", "--horizon", "10"],
    "harmonic": ["--model", "toy1", "--paths", "20", "--horizon", "10", "--outer", "3", "--inner", "5", "--t-mid", "2"],
}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--cli", required=True)
    ap.add_argument("--schema", required=True)
    ap.add_argument("--work", required=True)
    args = ap.parse_args()

    schema = json.loads(pathlib.Path(args.schema).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    claim = jsonschema.Draft202012Validator({**schema["$defs"]["claim"], "$defs": schema["$defs"]})
    failures = 0
    for label, extra in SMALL.items():
        experiment = label.removesuffix("-check")
        out = pathlib.Path(args.work) / label
        out.mkdir(parents=True, exist_ok=True)
        run = subprocess.run([args.cli, experiment, "--threads", "2", "--out-dir", str(out), *extra],
                             capture_output=True, text=True)
        if run.returncode != 0:
            print(f"{label}: exit {run.returncode}: {run.stderr.strip()}")
            failures += 1
            continue
        summary = json.loads((out / f"{experiment}.json").read_text())
        if json.loads(run.stdout) != summary:
            print(f"{label}: stdout differs from {experiment}.json")
            failures += 1
        errors = [e.message for e in validator.iter_errors(summary)]
        for name in summary["claims"]:
            if name not in summary:
                errors.append(f"claim {name} missing")
            else:
                errors += [f"{name}: {e.message}" for e in claim.iter_errors(summary[name])]
        if summary["all_pass"] != all(summary[n]["pass"] for n in summary["claims"]):
            errors.append("all_pass disagrees with the claims")
        for table in out.glob("*.csv"):
            with table.open(newline="") as f:
                rows = list(csv.reader(f))
            if not rows or any(len(r) != len(rows[0]) for r in rows):
                errors.append(f"{table.name}: ragged or empty CSV")
        for e in errors:
            print(f"{label}: {e}")
        failures += bool(errors)
        print(f"{label}: {'ok' if not errors else 'FAILED'}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
