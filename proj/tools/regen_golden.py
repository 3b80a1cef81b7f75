#!/usr/bin/env python3
"""Regenerate CLI golden files from tests/data/golden/manifest.json.

usage: regen_golden.py [path/to/gsembed]
"""
import json
import os
import subprocess
import sys

root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
golden = os.path.join(root, "tests", "data", "golden")
exe = sys.argv[1] if len(sys.argv) > 1 else os.path.join(root, "build", "gsembed")

env = dict(os.environ)
env.pop("GSEMBED_SEED", None)

with open(os.path.join(golden, "manifest.json")) as f:
    manifest = json.load(f)

for case in manifest:
    proc = subprocess.run([exe] + case["args"], capture_output=True, text=True, env=env)
    if proc.returncode != case["exit"]:
        sys.exit(f"{case['name']}: exit {proc.returncode}, manifest says {case['exit']}\n{proc.stderr}")
    out = json.loads(proc.stdout)
    with open(os.path.join(golden, case["name"] + ".json"), "w") as f:
        json.dump(out, f, indent=2, sort_keys=True)
        f.write("\n")
    print("wrote", case["name"])
