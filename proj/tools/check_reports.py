#!/usr/bin/env python3
"""Runs the CLI with --format json on every .pde file under a directory and
validates each report against the schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main():
    if len(sys.argv) != 4:
        sys.exit("usage: check_reports.py CLI SCHEMA CORPUS_DIR")
    cli, schema_path, corpus = sys.argv[1:]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    files = sorted(pathlib.Path(corpus).rglob("*.pde"))
    failures = 0
    for f in files:
        proc = subprocess.run([cli, "--format", "json", str(f)], capture_output=True, text=True)
        if proc.returncode not in (0, 1, 2, 3):
            print(f"{f}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        for e in errors:
            print(f"{f}: {'/'.join(map(str, e.path))}: {e.message}")
        failures += bool(errors)
    print(f"{len(files) - failures}/{len(files)} reports valid")
    return 1 if failures or not files else 0


if __name__ == "__main__":
    sys.exit(main())
