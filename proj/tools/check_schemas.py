#!/usr/bin/env python3
"""Run every subcommand, validate its JSON against schemas/, and check that
repeated runs are byte-identical."""
import json
import pathlib
import subprocess
import sys

import jsonschema

RUNS = {
    "bifurcation": [["--energy", "4", "--grid", "41"],
                    ["--energy", "5", "--lz", "0", "--g", "-1"],
                    ["--energy", "5", "--lz", "0", "--g", "100"]],
    "reduced": [["--energy", "4", "--lz", "0", "--g", "0", "--g", "3", "--grid", "21"],
                ["--energy", "4", "--lz", "1", "--grid", "11"]],
    "volume": [["--n", "10", "--m", "0"], ["--energy", "3.3", "--lz", "0.2"]],
    "actions": [["--energy", "5", "--lz", "1", "--g", "0"], ["--energy", "5", "--g", "2"]],
    "ebk": [["--n", "6", "--a", "1.5"], ["--n", "6", "--a", "1.5", "--langer"]],
    "spectrum": [["--n", "20", "--a", "1.5"], ["--n", "5", "--m", "-1"]],
    "heun": [["--n", "7", "--m", "2", "--a", "1.5"]],
    "limits": [["--n", "4", "--mode", m] for m in ("cartesian", "prolate_infinity", "spherical")],
    "monodromy": [["--n", "20", "--a", "1.5"], ["--n", "20", "--a", "10"]],
    "orbit": [["--energy", "3", "--grid", "20"],
              ["--start", "0.3", "-0.2", "1", "0.1", "0.7", "-0.4", "--tmax", "3", "--grid", "10"]],
}


def main() -> int:
    exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    failures = 0
    for name, runs in RUNS.items():
        schema = json.loads((schema_dir / f"{name}.schema.json").read_text())
        jsonschema.Draft202012Validator.check_schema(schema)
        for args in runs:
            cmd = [exe, name, *args]
            first = subprocess.run(cmd, capture_output=True, check=False)
            second = subprocess.run(cmd, capture_output=True, check=False)
            label = " ".join(cmd[1:])
            if first.returncode != 0:
                print(f"FAIL {label}: exit {first.returncode}: {first.stderr.decode().strip()}")
                failures += 1
                continue
            if first.stdout != second.stdout:
                print(f"FAIL {label}: output differs between runs")
                failures += 1
            try:
                jsonschema.validate(json.loads(first.stdout), schema,
                                    cls=jsonschema.Draft202012Validator)
                print(f"ok   {label}")
            except jsonschema.ValidationError as e:
                print(f"FAIL {label}: {e.message} at {list(e.absolute_path)}")
                failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
