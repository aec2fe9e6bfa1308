"""Validates session documents, and their canonical forms, against the published schema."""
import json
import subprocess
import sys

import jsonschema


def main():
    schema_path, permot, *sessions = sys.argv[1:]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    for path in sessions:
        with open(path) as f:
            jsonschema.validate(json.load(f), schema)
        canonical = subprocess.run([permot, "validate", path], check=True, capture_output=True, text=True).stdout
        jsonschema.validate(json.loads(canonical), schema)
        print("ok", path)


if __name__ == "__main__":
    main()
