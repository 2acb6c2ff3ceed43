"""JSON document formats for universes, conditions, index sets, trees,
ultrafilter structures, product functions and derivations.

Set literals appear in two interchangeable forms: the compact string
grammar ("{0} u [w,w^2)") and the JSON list form (["0", ["w","w^2"]],
singletons as bare literals, intervals as two-element lists).
"""

from __future__ import annotations

import json
from typing import Any

from .errors import ParseError
from .magidor import Block, MagidorCondition
from .ordinal import Ordinal, format_ordinal, parse_ordinal
from .oset import OrdinalSet, Piece, parse_set
from .prikry import Derivation, ToyUltraStructure, TreeCondition, UltraAssignment
from .projection import ICondition, IndexSet
from .ramsey import FiniteProductFn
from .universe import ToyUniverse

__all__ = [
    "set_to_json",
    "set_from_json",
    "universe_to_json",
    "universe_from_json",
    "condition_to_json",
    "condition_from_json",
    "icondition_to_json",
    "icondition_from_json",
    "tree_to_json",
    "tree_from_json",
    "structure_to_json",
    "structure_from_json",
    "product_fn_to_json",
    "product_fn_from_json",
    "derivation_to_json",
    "derivation_from_json",
    "load_document",
]


def _ord(text: Any) -> Ordinal:
    if not isinstance(text, str):
        raise ParseError(f"expected an ordinal literal, got {text!r}")
    return parse_ordinal(text)


def set_to_json(s: OrdinalSet) -> list:
    out: list[Any] = []
    for p in s.pieces:
        if p.levels is not None:
            out.append(
                {
                    "lo": format_ordinal(p.lo),
                    "hi": format_ordinal(p.hi),
                    "levels": [format_ordinal(x) for x in sorted(p.levels)],
                }
            )
        elif p.hi == p.lo.successor():
            out.append(format_ordinal(p.lo))
        else:
            out.append([format_ordinal(p.lo), format_ordinal(p.hi)])
    return out


def set_from_json(doc: Any) -> OrdinalSet:
    if isinstance(doc, str):
        return parse_set(doc)
    if not isinstance(doc, list):
        raise ParseError(f"expected a set literal, got {doc!r}")
    pieces = []
    for item in doc:
        if isinstance(item, str):
            g = _ord(item)
            pieces.append(Piece(g, g.successor()))
        elif isinstance(item, list) and len(item) == 2:
            pieces.append(Piece(_ord(item[0]), _ord(item[1])))
        elif isinstance(item, dict):
            levels = frozenset(_ord(x) for x in item.get("levels", []))
            pieces.append(Piece(_ord(item["lo"]), _ord(item["hi"]), levels))
        else:
            raise ParseError(f"bad set piece {item!r}")
    return OrdinalSet(tuple(pieces))


def universe_to_json(u: ToyUniverse) -> dict:
    return {
        "lambda0": format_ordinal(u.lambda0),
        "delta0_bound": format_ordinal(u.delta0_bound),
        "cores": [
            {
                "beta": format_ordinal(beta),
                "xi": format_ordinal(xi),
                "core": set_to_json(core),
            }
            for (beta, xi), core in sorted(u.cores.items())
        ],
    }


def universe_from_json(doc: dict) -> ToyUniverse:
    cores = {}
    for entry in doc.get("cores", []):
        key = (_ord(entry["beta"]), _ord(entry["xi"]))
        cores[key] = set_from_json(entry["core"])
    return ToyUniverse(_ord(doc["lambda0"]), _ord(doc["delta0_bound"]), cores)


def _blocks_to_json(blocks) -> list:
    return [
        {
            "kappa": format_ordinal(b.kappa),
            "B": None if b.measure_set is None else set_to_json(b.measure_set),
        }
        for b in blocks
    ]


def _blocks_from_json(doc: list) -> tuple[Block, ...]:
    out = []
    for entry in doc:
        B = entry.get("B")
        out.append(Block(_ord(entry["kappa"]), None if B is None else set_from_json(B)))
    return tuple(out)


def _resolve_universe(spec: Any) -> ToyUniverse:
    """The "universe" field is a path or an inline document."""
    if isinstance(spec, str):
        return universe_from_json(load_document(spec))
    return universe_from_json(spec)


def condition_to_json(p: MagidorCondition) -> dict:
    return {
        "universe": universe_to_json(p.universe),
        "blocks": _blocks_to_json(p.blocks),
    }


def condition_from_json(doc: dict, universe: ToyUniverse | None = None) -> MagidorCondition:
    u = universe or _resolve_universe(doc["universe"])
    return MagidorCondition(u, _blocks_from_json(doc["blocks"]))


def icondition_to_json(q: ICondition) -> dict:
    return {
        "universe": universe_to_json(q.universe),
        "index": set_to_json(q.index_set.points),
        "blocks": _blocks_to_json(q.blocks),
    }


def icondition_from_json(doc: dict, universe: ToyUniverse | None = None) -> ICondition:
    u = universe or _resolve_universe(doc["universe"])
    return ICondition(
        u, IndexSet(set_from_json(doc["index"])), _blocks_from_json(doc["blocks"])
    )


def tree_to_json(t: TreeCondition) -> dict:
    return {
        "trunk": list(t.trunk),
        "depth": t.depth,
        "successors": [
            {"node": list(a), "set": sorted(s)}
            for a, s in sorted(t.successors.items())
        ],
    }


def tree_from_json(doc: dict) -> TreeCondition:
    return TreeCondition(
        tuple(doc["trunk"]),
        doc["depth"],
        {
            tuple(entry["node"]): frozenset(entry["set"])
            for entry in doc.get("successors", [])
        },
    )


def _assignment_to_json(ua: UltraAssignment) -> dict:
    return {
        "core": sorted(ua.core),
        "pi": None if ua.proj is None else [list(vw) for vw in sorted(ua.proj)],
    }


def _assignment_from_json(doc: dict) -> UltraAssignment:
    proj = doc.get("pi")
    return UltraAssignment(
        frozenset(doc["core"]),
        None if proj is None else tuple(tuple(vw) for vw in proj),
    )


def structure_to_json(u: ToyUltraStructure) -> dict:
    return {
        "ground": list(u.ground),
        "nodes": [
            {"node": list(a), **_assignment_to_json(ua)}
            for a, ua in sorted(u.nodes.items())
        ],
        "levels": [
            {"level": n, **_assignment_to_json(ua)}
            for n, ua in sorted(u.levels.items())
        ],
        "default": None if u.default is None else _assignment_to_json(u.default),
        "tail_default": u.tail_default,
    }


def structure_from_json(doc: dict) -> ToyUltraStructure:
    return ToyUltraStructure(
        tuple(doc["ground"]),
        {
            tuple(entry["node"]): _assignment_from_json(entry)
            for entry in doc.get("nodes", [])
        },
        {
            entry["level"]: _assignment_from_json(entry)
            for entry in doc.get("levels", [])
        },
        None if doc.get("default") is None else _assignment_from_json(doc["default"]),
        bool(doc.get("tail_default", False)),
    )


def product_fn_to_json(F: FiniteProductFn) -> dict:
    return {
        "factors": [list(f) for f in F.factors],
        "table": [
            {"args": list(t), "value": v} for t, v in sorted(F.table.items())
        ],
    }


def product_fn_from_json(doc: dict) -> FiniteProductFn:
    return FiniteProductFn(
        tuple(tuple(f) for f in doc["factors"]),
        {tuple(entry["args"]): entry["value"] for entry in doc["table"]},
    )


def derivation_to_json(d: Derivation) -> dict:
    tables = []
    for f in d.fns:
        if not hasattr(f, "items"):
            raise ParseError("only table-backed derivations are serializable")
        tables.append([{"args": list(t), "value": v} for t, v in sorted(f.items())])
    return {"levels": list(d.levels), "tables": tables}


def derivation_from_json(doc: dict) -> Derivation:
    fns = tuple(
        {tuple(entry["args"]): entry["value"] for entry in table}
        for table in doc["tables"]
    )
    return Derivation(tuple(doc["levels"]), fns)


def load_document(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
