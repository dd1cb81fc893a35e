"""JSON file formats for graphons and sampled graphs.

Graphon files: {"sigma": [...], "values": [[...], ...]} where entries are
JSON numbers or strings.  Strings may be "p/q" fractions; decimal literals
are parsed as exact decimal fractions (0.3 means 3/10, not the binary
float), which keeps boundary classifications honest.  Written files use
"p/q" strings throughout.

Graph files: {"n": ..., "coords": [...], "blocks": [...], "edges": [[i,j],
...]}.  Coordinates are genuine floats and round-trip exactly through
JSON's repr-based formatting.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .model import Partition, StepGraphon
from .sampling import SampledGraph


class FormatError(ValueError):
    """A graphon or graph file does not match the documented schema."""


def _rational(value, where: str) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise FormatError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"{where}: cannot parse {value!r} as a rational") from exc
    raise FormatError(f"{where}: expected a number or 'p/q' string, got {value!r}")


def _load_json(path, **kwargs):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh, **kwargs)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def load_graphon(path) -> StepGraphon:
    # parse_float keeps the decimal text, so 0.3 arrives as Fraction("0.3")
    doc = _load_json(path, parse_float=Fraction)
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: top level must be an object")
    for key in ("sigma", "values"):
        if key not in doc:
            raise FormatError(f"{path}: missing field '{key}'")
    sigma = [_rational(v, f"sigma[{i}]") for i, v in enumerate(doc["sigma"])]
    values = doc["values"]
    if not isinstance(values, list) or not all(isinstance(r, list) for r in values):
        raise FormatError(f"{path}: 'values' must be a matrix")
    rows = tuple(
        tuple(_rational(v, f"values[{i}][{j}]") for j, v in enumerate(row))
        for i, row in enumerate(values)
    )
    try:
        return StepGraphon(Partition(tuple(sigma)), rows)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def dump_graphon(w: StepGraphon, path) -> None:
    doc = {
        "sigma": [str(b) for b in w.partition.breakpoints],
        "values": [[str(v) for v in row] for row in w.values],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_graph(path) -> SampledGraph:
    doc = _load_json(path)
    for key in ("n", "coords", "blocks", "edges"):
        if key not in doc:
            raise FormatError(f"{path}: missing field '{key}'")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise FormatError(f"{path}: 'n' must be a positive integer")
    coords = np.asarray(doc["coords"], dtype=np.float64)
    blocks = np.asarray(doc["blocks"], dtype=np.int64)
    edges = np.asarray(doc["edges"], dtype=np.int64).reshape(-1, 2)
    if coords.shape != (n,) or blocks.shape != (n,):
        raise FormatError(f"{path}: coords/blocks must have length n")
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise FormatError(f"{path}: edge endpoint out of range")
    try:
        return SampledGraph(n, coords, blocks, edges)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def dump_graph(g: SampledGraph, path) -> None:
    doc = {
        "n": g.n,
        "coords": [float(c) for c in g.coords],
        "blocks": [int(b) for b in g.blocks],
        "edges": [[int(i), int(j)] for i, j in g.edges],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
        fh.write("\n")
