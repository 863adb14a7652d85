"""JSON file formats for distributions and networks.

Both formats are strict: unknown keys are rejected so typos fail loudly
instead of silently changing meaning.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .dist import JointTable, VariableSpec
from .errors import ParseError
from .graph import Qpn, SignedDag, SignedEdge
from .signs import Sign

PathLike = Union[str, Path]


def _load_json(path: PathLike) -> object:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from exc


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ParseError(f"{where}: missing keys {sorted(missing)}")


def _parse_variables(raw: object, where: str) -> tuple[VariableSpec, ...]:
    if not isinstance(raw, list):
        raise ParseError(f"{where}: 'variables' must be a list")
    out = []
    for k, item in enumerate(raw):
        _require_keys(
            item, {"name", "support"}, {"name", "support"}, f"{where}: variables[{k}]"
        )
        out.append(VariableSpec(item["name"], tuple(item["support"])))
    return tuple(out)


def load_table(path: PathLike) -> JointTable:
    """Read a distribution file: variables plus row-major probabilities."""
    doc = _load_json(path)
    _require_keys(
        doc,
        {"variables", "probabilities"},
        {"variables", "probabilities"},
        str(path),
    )
    variables = _parse_variables(doc["variables"], str(path))
    probs = doc["probabilities"]
    if not isinstance(probs, list):
        raise ParseError(f"{path}: 'probabilities' must be a list of numbers")
    return JointTable.from_flat(variables, probs)


def load_network(path: PathLike) -> Qpn:
    """Read a network file: variables plus signed edges."""
    doc = _load_json(path)
    _require_keys(doc, {"variables", "edges"}, {"variables", "edges"}, str(path))
    variables = _parse_variables(doc["variables"], str(path))
    raw_edges = doc["edges"]
    if not isinstance(raw_edges, list):
        raise ParseError(f"{path}: 'edges' must be a list")
    edges = []
    for k, item in enumerate(raw_edges):
        _require_keys(
            item, {"from", "to", "sign"}, {"from", "to", "sign"},
            f"{path}: edges[{k}]",
        )
        edges.append(SignedEdge(item["from"], item["to"], Sign.from_str(item["sign"])))
    return Qpn(SignedDag(variables, tuple(edges)))


def dump_table(table: JointTable, path: PathLike) -> None:
    Path(path).write_text(
        json.dumps(table.to_jsonable(), indent=2) + "\n", encoding="utf-8"
    )


def dump_network(qpn: Qpn, path: PathLike) -> None:
    Path(path).write_text(
        json.dumps(qpn.to_jsonable(), indent=2) + "\n", encoding="utf-8"
    )
