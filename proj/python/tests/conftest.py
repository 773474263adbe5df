import json
import os
import pathlib
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = ROOT / "schemas"


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("EIGCOUPLE_CLI", str(ROOT / "build" / "eigcouple"))
    assert os.path.exists(path), f"CLI binary not found at {path}; set EIGCOUPLE_CLI"

    def run(*args, cwd=None):
        return subprocess.run([path, *map(str, args)], capture_output=True, text=True, cwd=cwd)

    return run


@pytest.fixture(scope="session")
def validate():
    import jsonschema

    cache = {}

    def check(doc, name):
        if name not in cache:
            schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
            jsonschema.Draft202012Validator.check_schema(schema)
            cache[name] = jsonschema.Draft202012Validator(schema)
        cache[name].validate(doc)
        return doc

    return check


SQRT_FAMILY = {
    "m": 2,
    "n": 2,
    "terms": [
        {"exp": [0, 0], "re": [[0, 1], [0, 0]]},
        {"exp": [1, 0], "re": [[0, 0], [1, 0]]},
        {"exp": [0, 1], "re": [[0, 0], [0, 0]], "im": [[0, 0], [1, 0]]},
    ],
}

DIAG_FAMILY = {
    "m": 2,
    "n": 1,
    "terms": [
        {"exp": [0], "re": [[1, 0], [0, 2]]},
        {"exp": [1], "re": [[1, 0], [0, 0]]},
    ],
}

EXAMPLE1_SPEC = {
    "U_re": [[3, 0, 0], [0, 1, 0], [0, 0, 2]],
    "U_im": [[0, 1, 2], [1, 0, 0], [2, 0, 0]],
    "gamma_re": [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
    "gamma_im": [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
}
