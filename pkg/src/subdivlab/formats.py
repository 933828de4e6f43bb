"""Plain-text edge-list formats.

Two UTF-8 grammars, one per graph kind.  Lines starting with ``#`` and blank
lines are ignored everywhere.

General graph::

    g <n>
    u v          # one edge per line, 0-based

Bipartite graph::

    bip <|A|> <|B|>
    a b          # a is an A-index, b is a B-index

Writers emit edges sorted, so write -> parse is the identity on graphs.
"""

from __future__ import annotations

from .errors import InputError
from .graphs import BipartiteGraph, Graph

__all__ = [
    "parse_graph_text",
    "parse_bipartite_text",
    "parse_any",
    "format_graph",
    "format_bipartite",
]


def _payload_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_graph_text(text: str) -> Graph:
    lines = _payload_lines(text)
    if not lines or not lines[0].startswith("g "):
        raise InputError("expected header 'g <n>'")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise InputError(f"bad graph header {lines[0]!r}") from exc
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"bad edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph(n, edges)


def parse_bipartite_text(text: str) -> BipartiteGraph:
    lines = _payload_lines(text)
    if not lines or not lines[0].startswith("bip "):
        raise InputError("expected header 'bip <|A|> <|B|>'")
    parts = lines[0].split()
    if len(parts) != 3:
        raise InputError(f"bad bipartite header {lines[0]!r}")
    try:
        na, nb = int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InputError(f"bad bipartite header {lines[0]!r}") from exc
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"bad edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return BipartiteGraph(na, nb, edges)


def parse_any(text: str) -> Graph | BipartiteGraph:
    """Dispatch on the header keyword."""
    lines = _payload_lines(text)
    if not lines:
        raise InputError("empty graph file")
    if lines[0].startswith("bip "):
        return parse_bipartite_text(text)
    if lines[0].startswith("g "):
        return parse_graph_text(text)
    raise InputError(f"unknown header {lines[0]!r}")


def format_graph(g: Graph) -> str:
    lines = [f"g {g.vertex_count}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges()))
    return "\n".join(lines) + "\n"


def format_bipartite(g: BipartiteGraph) -> str:
    lines = [f"bip {g.side_a_count} {g.side_b_count}"]
    lines.extend(f"{a} {b}" for a, b in sorted(g.edges()))
    return "\n".join(lines) + "\n"
