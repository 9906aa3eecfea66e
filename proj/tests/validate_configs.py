"""Validates run configs against docs/runconfig.schema.json.

Usage: validate_configs.py SCHEMA CONFIG... [--reject CONFIG...]
Configs after --reject must fail validation.
"""
import json
import sys

import jsonschema


def main(argv):
    schema = json.load(open(argv[1]))
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    expect_ok = True
    failures = 0
    for path in argv[2:]:
        if path == "--reject":
            expect_ok = False
            continue
        errors = list(validator.iter_errors(json.load(open(path))))
        if bool(errors) == expect_ok:
            failures += 1
            print(f"FAIL {path}: " + ("; ".join(e.message for e in errors) or "accepted"))
        else:
            print(f"ok   {path}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
