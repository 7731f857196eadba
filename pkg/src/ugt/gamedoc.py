"""Canonical JSON interchange format and DOT export for games.

The on-disk format is versioned JSON with sorted keys and rationals written
as "p/q" strings, so files are diffable and round-trip stable.  An optional
``provenance`` block may annotate a document (for example which payoffs are
documented versus constructed); it never takes part in structural equality
and parsing ignores it.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping, Optional

from .core import (
    Game,
    InfoSet,
    NodeData,
    StructuralError,
    validate_game,
)

FORMAT_VERSION = 1


class GameDocError(ValueError):
    """Base class for game-document problems."""


class DocSyntaxError(GameDocError):
    """Malformed JSON; carries the decoder's position."""

    def __init__(self, msg: str, line: int, column: int):
        super().__init__("syntax error at line %d column %d: %s"
                         % (line, column, msg))
        self.line = line
        self.column = column


class DocSemanticError(GameDocError):
    """Well-formed JSON that does not describe a game (missing fields,
    unknown ids, non-bijective successor maps, ...)."""


class DocAxiomError(GameDocError):
    """A structurally sound game that fails named axiom checks."""

    def __init__(self, report):
        self.report = report
        failed = report.failed()
        super().__init__("axiom failure: " + "; ".join(
            "%s (%s)" % (c.name, c.description) for c in failed))
        self.failed_names = [c.name for c in failed]


def _frac_str(x: Fraction) -> str:
    return "%d/%d" % (x.numerator, x.denominator)


def _parse_frac(s, where: str) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError):
        raise DocSemanticError("bad rational %r in %s" % (s, where)) from None


def serialize_game(g: Game, provenance: Optional[Mapping] = None) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    nodes = {}
    for n in sorted(g.nodes):
        nd = g.nodes[n]
        nodes[str(n)] = {
            "parent": nd.parent,
            "players": sorted(nd.players),
            "actions": {str(i): list(nd.actions[i]) for i in nd.actions},
            "children": [{"profile": list(p), "child": c}
                         for p, c in sorted(nd.children.items())],
            "payoffs": {str(i): _frac_str(v)
                        for i, v in sorted(nd.payoffs.items())},
        }
    doc = {
        "format_version": FORMAT_VERSION,
        "players": list(g.players),
        "trees": {t: sorted(ns) for t, ns in g.trees.items()},
        "nodes": nodes,
        "info": [{"player": i, "tree": t, "node": n,
                  "host": h.host, "members": list(h.members)}
                 for (i, t, n), h in sorted(g.info.items())],
    }
    if provenance is not None:
        doc["provenance"] = dict(provenance)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_game(text: str) -> Game:
    """Parse canonical JSON into a validated Game.

    Raises DocSyntaxError for malformed JSON, DocSemanticError for schema or
    structural problems, and DocAxiomError (with the full report) when a
    named axiom check fails.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocSyntaxError(e.msg, e.lineno, e.colno) from None
    if not isinstance(doc, dict):
        raise DocSemanticError("document is not an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise DocSemanticError("unsupported format_version %r" % (version,))
    for field in ("players", "trees", "nodes", "info"):
        if field not in doc:
            raise DocSemanticError("missing field %r" % field)
    try:
        players = [int(i) for i in doc["players"]]
        nodes = {}
        for key, nd in doc["nodes"].items():
            n = int(key)
            children = {}
            for entry in nd.get("children", []):
                children[tuple(entry["profile"])] = int(entry["child"])
            nodes[n] = NodeData(
                parent=None if nd.get("parent") is None else int(nd["parent"]),
                players=tuple(sorted(int(i) for i in nd.get("players", []))),
                actions={int(i): tuple(a)
                         for i, a in nd.get("actions", {}).items()},
                children=children,
                payoffs={int(i): _parse_frac(v, "payoffs of node %d" % n)
                         for i, v in nd.get("payoffs", {}).items()})
        trees = {t: [int(n) for n in ns] for t, ns in doc["trees"].items()}
        info = {}
        for entry in doc["info"]:
            key = (int(entry["player"]), entry["tree"], int(entry["node"]))
            info[key] = InfoSet(key[0], entry["host"],
                                tuple(sorted(int(m) for m in entry["members"])))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, GameDocError):
            raise
        raise DocSemanticError("malformed document: %s" % e) from None

    # completeness before construction, for pointed diagnostics
    for t, ns in trees.items():
        for n in ns:
            if n not in nodes:
                raise DocSemanticError(
                    "tree %s references unknown node %d" % (t, n))
    try:
        g = Game(players, trees, nodes, info)
    except StructuralError as e:
        raise DocSemanticError(str(e)) from None
    try:
        report = validate_game(g)
    except StructuralError as e:
        raise DocSemanticError(str(e)) from None
    if not report.ok:
        raise DocAxiomError(report)
    return g


# ---------------------------------------------------------------------------
# DOT export


def game_dot(g: Game) -> str:
    """Deterministic DOT rendering: one cluster per tree (poorest first),
    edges labeled with action profiles, information sets annotated."""
    lines = ["digraph game {", "  rankdir=TB;"]
    for t in g.tree_order():
        lines.append('  subgraph "cluster_%s" {' % t)
        lines.append('    label="%s";' % t)
        for n in sorted(g.trees[t]):
            nd = g.nodes[n]
            if g.terminal_in(t, n):
                pay = ",".join(_frac_str(nd.payoffs[i])
                               for i in g.players)
                label = "%d (%s)" % (n, pay)
                shape = "box"
            else:
                sets = [g.info[(i, t, n)].label()
                        for i in sorted(nd.players) if (i, t, n) in g.info]
                label = "%d %s" % (n, " ".join(sets))
                shape = "ellipse"
            lines.append('    "%s_%d" [shape=%s,label="%s"];'
                         % (t, n, shape, label))
        for n in sorted(g.trees[t]):
            for prof, c in sorted(g.children_in(t, n).items()):
                lines.append('    "%s_%d" -> "%s_%d" [label="%s"];'
                             % (t, n, t, c, ",".join(prof)))
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
