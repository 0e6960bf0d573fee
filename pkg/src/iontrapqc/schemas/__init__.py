"""JSON Schemas for command-line output documents."""

import json
from importlib import resources


def load_schema(name: str) -> dict:
    """Schema for a command such as ``"chain"`` or ``"shor factor"``."""
    filename = name.replace(" ", "_").replace("-", "_") + ".schema.json"
    return json.loads(resources.files(__name__).joinpath(filename).read_text())
