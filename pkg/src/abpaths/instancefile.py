"""Instance and result file formats.

Instance files are line-oriented text; ``#`` starts a comment anywhere.

    name      <string>                optional metadata
    seed      <int>                   optional metadata
    vertices  <n>
    edge      <u> <v> <length>        one line per edge
    terminals A <v1> <v2> ...         even count; required unless graph-only
    terminals B <v1> ...              optional (may be empty or absent)
    rotation  <v> <n1> <n2> ...       optional cyclic neighbor order per vertex

Result files echo the outcome one field per line: ``status`` (ok or
infeasible), ``length``, ``count`` (decimal, arbitrary precision), optional
``witness`` (space-separated u,v pairs), optional ``coeff <degree> <value>``
lines, a configuration echo, and timing fields (prefixed ``time_``), which
comparison tooling excludes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .graphs import Graph, Instance, PlanarEmbedding

__all__ = ["ParsedInstance", "parse_instance", "format_instance", "format_result", "parse_result"]


@dataclass(frozen=True)
class ParsedInstance:
    instance: Instance
    rotation: PlanarEmbedding | None
    name: str | None
    seed: int | None


def _int_field(tok: str, what: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno) from None


def parse_instance(text: str) -> ParsedInstance:
    vertices: int | None = None
    edges: list[tuple[int, int, int]] = []
    terminals: dict[str, list[int]] = {}
    rotation: dict[int, list[int]] = {}
    name = None
    seed = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0].lower()
        if keyword == "name":
            if len(tokens) != 2:
                raise ParseError("name takes one token", lineno)
            name = tokens[1]
        elif keyword == "seed":
            seed = _int_field(tokens[1], "seed", lineno) if len(tokens) == 2 else None
            if seed is None:
                raise ParseError("seed takes one integer", lineno)
        elif keyword == "vertices":
            if len(tokens) != 2:
                raise ParseError("vertices takes one integer", lineno)
            vertices = _int_field(tokens[1], "vertex count", lineno)
            if vertices < 0:
                raise ParseError("vertex count must be nonnegative", lineno)
        elif keyword == "edge":
            if len(tokens) != 4:
                raise ParseError("edge takes three integers: u v length", lineno)
            u = _int_field(tokens[1], "edge endpoint", lineno)
            v = _int_field(tokens[2], "edge endpoint", lineno)
            w = _int_field(tokens[3], "edge length", lineno)
            if vertices is None:
                raise ParseError("edge before the vertices line", lineno)
            if not (0 <= u < vertices and 0 <= v < vertices):
                raise ParseError(f"edge endpoint out of range 0..{vertices - 1}", lineno)
            edges.append((u, v, w))
        elif keyword == "terminals":
            if len(tokens) < 2 or tokens[1] not in ("A", "B"):
                raise ParseError("terminals line must start with A or B", lineno)
            terminals[tokens[1]] = [_int_field(t, "terminal", lineno) for t in tokens[2:]]
        elif keyword == "rotation":
            if vertices is None:
                raise ParseError("rotation before the vertices line", lineno)
            if len(tokens) < 2:
                raise ParseError("rotation takes a vertex and its neighbor order", lineno)
            v = _int_field(tokens[1], "rotation vertex", lineno)
            if not 0 <= v < vertices:
                raise ParseError("rotation vertex out of range", lineno)
            rotation[v] = [_int_field(t, "rotation neighbor", lineno) for t in tokens[2:]]
        else:
            raise ParseError(f"unknown keyword {tokens[0]!r}", lineno)

    if vertices is None:
        raise ParseError("missing vertices line")
    graph = Graph(vertices, edges)
    inst = Instance(graph, terminals.get("A", ()), terminals.get("B", ()))

    emb = None
    if rotation:
        rows = []
        for v in range(vertices):
            rows.append(tuple(rotation.get(v, ())))
        emb = PlanarEmbedding(rows)
        declared = {(min(u, v), max(u, v)) for u, nbrs in enumerate(rows) for v in nbrs}
        actual = {e.key() for e in graph.edges}
        if declared != actual:
            raise ParseError("rotation system does not list exactly the graph's edges")
        if not emb.euler_ok():
            raise ParseError("rotation system fails the Euler face-count check")
    return ParsedInstance(inst, emb, name, seed)


def format_instance(instance: Instance, rotation: PlanarEmbedding | None = None,
                    name: str | None = None, seed: int | None = None,
                    comment: str | None = None) -> str:
    lines = []
    if comment:
        for row in comment.splitlines():
            lines.append(f"# {row}")
    if name:
        lines.append(f"name {name}")
    if seed is not None:
        lines.append(f"seed {seed}")
    lines.append(f"vertices {instance.graph.num_vertices}")
    for e in instance.graph.edges:
        lines.append(f"edge {e.u} {e.v} {e.length}")
    lines.append("terminals A " + " ".join(str(v) for v in sorted(instance.A)))
    if instance.B:
        lines.append("terminals B " + " ".join(str(v) for v in sorted(instance.B)))
    if rotation is not None:
        for v, nbrs in enumerate(rotation.rotation):
            if nbrs:
                lines.append(f"rotation {v} " + " ".join(map(str, nbrs)))
    return "\n".join(lines) + "\n"


def format_result(status: str, length: int | None, count: int,
                  witness=None, poly=None, config=None, timings=None) -> str:
    lines = [f"status {status}"]
    if length is not None:
        lines.append(f"length {length}")
    lines.append(f"count {count}")
    if witness is not None:
        lines.append("witness " + " ".join(f"{u},{v}" for u, v in witness))
    if poly is not None:
        for degree, coeff in enumerate(poly):
            if coeff:
                lines.append(f"coeff {degree} {coeff}")
    for key, value in (config or {}).items():
        lines.append(f"{key} {value}")
    for key, value in (timings or {}).items():
        lines.append(f"time_{key} {value:.3f}")
    return "\n".join(lines) + "\n"


def parse_result(text: str) -> dict:
    """Parse a result file back into a dict; counts become exact ints."""
    out: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key in ("length", "count"):
            out[key] = int(rest)
        elif key == "witness":
            out[key] = tuple(tuple(map(int, pair.split(","))) for pair in rest.split())
        elif key == "coeff":
            d, c = rest.split()
            out.setdefault("coeffs", {})[int(d)] = int(c)
        else:
            out[key] = rest
    return out
