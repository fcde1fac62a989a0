"""Serialization helpers shared by the result records and the CLI."""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

SCHEMA_VERSION = 1


def rational_json(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def rational_from_json(obj) -> Fraction:
    return Fraction(obj["num"], obj["den"])


def load_schema(name: str = "result") -> dict:
    """JSON schema shipped with the package (``result``, ``bounds``, ...)."""
    text = resources.files("zerosum").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
