"""Validate JSON outputs against the in-repo schemas.

usage: check_schemas.py SCHEMA_DIR FILE=SCHEMA_NAME [FILE=SCHEMA_NAME ...]
"""

import json
import pathlib
import sys

import jsonschema
from referencing import Registry, Resource


def main(argv):
    if len(argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    schema_dir = pathlib.Path(argv[1])
    schemas = {}
    resources = []
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        schemas[path.name.removesuffix(".schema.json")] = doc
        resources.append((doc["$id"], Resource.from_contents(doc)))
    registry = Registry().with_resources(resources)

    failed = 0
    for pair in argv[2:]:
        target, name = pair.rsplit("=", 1)
        schema = schemas[name]
        validator = jsonschema.validators.validator_for(schema)(schema, registry=registry)
        errors = list(validator.iter_errors(json.loads(pathlib.Path(target).read_text())))
        for e in errors[:5]:
            print(f"{target}: {'/'.join(map(str, e.absolute_path))}: {e.message}", file=sys.stderr)
        print(f"{'ok  ' if not errors else 'FAIL'} {target} ({name})")
        failed += bool(errors)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
