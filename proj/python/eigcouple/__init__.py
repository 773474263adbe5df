"""Double-eigenvalue analysis of parameter-dependent complex matrix families."""

import csv
import io
import json

from ._core import (
    ChartError,
    DegeneracyError,
    DimensionError,
    DomainError,
    EigcoupleError,
    Family,
    NonConvergenceError,
    ParseError,
    builtin_family,
    dielectric_family,
    eigenvalues,
    parse_family,
)
from . import _core

__all__ = [
    "ChartError",
    "DegeneracyError",
    "DimensionError",
    "DomainError",
    "EigcoupleError",
    "Family",
    "NonConvergenceError",
    "ParseError",
    "builtin_family",
    "classify",
    "dielectric_family",
    "eigenvalues",
    "find_ep",
    "loop",
    "parse_family",
    "scenario",
    "surface",
]


def classify(family, at, tol_cluster=1e-6, tol_rank=1e-8, name=""):
    return json.loads(_core.classify_json(family, list(at), tol_cluster, tol_rank, name))


def scenario(family, at, section=(), name=""):
    return json.loads(_core.scenario_json(family, list(at), list(section), name))


def loop(family, at, a, b, r, samples=720):
    return json.loads(_core.loop_json(family, list(at), a, b, r, samples))


def find_ep(family, guess, name=""):
    return json.loads(_core.find_ep_json(family, list(guess), name))


def surface(family, at, window, res):
    """Grid rows as dicts keyed by the CSV header (floats, 'ambiguous' as bool)."""
    text = _core.surface_csv(family, list(at), list(window), res)
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {k: float(v) for k, v in rec.items() if k != "ambiguous"}
        row["ambiguous"] = rec["ambiguous"] == "1"
        rows.append(row)
    return rows
