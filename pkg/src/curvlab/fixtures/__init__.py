"""Bundled graph6 fixtures that have no in-package generator.

``CURVLAB_FIXTURES`` overrides the directory the files are read from.
"""

from __future__ import annotations

import os
from pathlib import Path

from ..errors import FormatError
from ..graph6 import decode_graph6
from ..graphs import Graph

FIXTURE_NAMES = ("chang1", "chang2", "chang3", "conway_smith", "hall")


def fixture_dir() -> Path:
    override = os.environ.get("CURVLAB_FIXTURES")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent


def load_fixture(name: str) -> Graph:
    if name not in FIXTURE_NAMES:
        raise FormatError(f"unknown fixture {name!r}; have {FIXTURE_NAMES}")
    path = fixture_dir() / f"{name}.g6"
    if not path.exists():
        raise FormatError(f"fixture file {path} is missing")
    return decode_graph6(path.read_text().strip())
