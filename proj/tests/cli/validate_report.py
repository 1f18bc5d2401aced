"""Runs the tool and validates its JSON reports against docs/report.schema.json."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def report(binary, *args):
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "report.json"
        proc = subprocess.run([binary, *args, "--out", str(out)], capture_output=True, text=True)
        if proc.returncode not in (0, 1):
            sys.exit(f"{' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
        return json.loads(out.read_text())


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema, format_checker=jsonschema.FormatChecker())
    runs = [
        ("compute", "--zoo", "identity", "--zoo", "amplitude_damping:gamma=0.3", "--alpha", "0.7,2"),
        ("compute", "--zoo", "identity:d=3", "--cap", "2", "--alpha", "0.9", "--no-timing"),
        ("verify", "--trials", "1", "--no-zoo", "--alpha", "0.9", "--probes", "10"),
    ]
    for args in runs:
        doc = report(binary, *args)
        errors = sorted(validator.iter_errors(doc), key=str)
        for e in errors:
            print(f"{' '.join(args)}: {list(e.absolute_path)}: {e.message}")
        if errors:
            sys.exit(1)
        s = doc["summary"]
        assert s["records"] == len(doc["records"]) == s["passed"] + s["failed"]
        assert s["passed"] == sum(r["pass"] for r in doc["records"])
        print(f"{' '.join(args)}: {s['records']} records valid")


if __name__ == "__main__":
    main()
