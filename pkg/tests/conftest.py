import json
import os
import sys

import jsonschema
import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import RESULT_SCHEMA  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


@pytest.fixture(scope="session")
def result_schema():
    with open(RESULT_SCHEMA, "r", encoding="utf-8") as fh:
        schema = json.load(fh)
    jsonschema.Draft7Validator.check_schema(schema)
    return schema


@pytest.fixture
def validate_output(result_schema):
    """validate_output(obj, "protocol") checks obj against one definition of the result schema."""

    def validate(instance, definition):
        schema = {
            "definitions": result_schema["definitions"],
            "allOf": [{"$ref": f"#/definitions/{definition}"}],
        }
        jsonschema.Draft7Validator(schema).validate(instance)

    return validate
