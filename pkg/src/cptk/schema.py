"""Locations of the shipped JSON schemas and the command -> schema map."""
from __future__ import annotations

import json
from pathlib import Path

SCHEMA_DIR = Path(__file__).parent / "schemas"

RESULT_SCHEMA = {
    "space": "window",
    "expansion": "expansion",
    "folner": "folner",
    "harem": "harem",
    "whyte": "forest",
    "lemma42": "lemma42",
    "embed": "embedding",
    "lamplighter": "lamplighter",
    "paradox build": "decomposition",
    "paradox transfer": "decomposition",
    "paradox verify": "report",
    "asdim": "asdim",
    "suite": "report",
}


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())
