"""Graph and instance types, validation, planar embedding, and face structure.

Vertices are dense integers 0..n-1.  Edges are stored normalized with u < v
and sorted, so edge indices are stable identifiers throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .errors import NonPlanarError

__all__ = [
    "Edge",
    "Graph",
    "Instance",
    "PlanarEmbedding",
    "ValidationReport",
    "validate",
    "planar_embed",
    "faces",
]


@dataclass(frozen=True, order=True)
class Edge:
    u: int
    v: int
    length: int

    def key(self) -> tuple[int, int]:
        return (self.u, self.v)


def _normalize_edges(edges) -> tuple[Edge, ...]:
    out = []
    for e in edges:
        if isinstance(e, Edge):
            u, v, w = e.u, e.v, e.length
        else:
            u, v, w = e
        if u > v:
            u, v = v, u
        out.append(Edge(u, v, w))
    out.sort()
    return tuple(out)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with positive integer edge lengths."""

    num_vertices: int
    edges: tuple[Edge, ...]

    def __init__(self, num_vertices: int, edges):
        object.__setattr__(self, "num_vertices", num_vertices)
        object.__setattr__(self, "edges", _normalize_edges(edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.num_vertices
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        for nbrs in adj:
            nbrs.sort()
        return adj

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e.key(): i for i, e in enumerate(self.edges)}

    def total_length(self) -> int:
        return sum(e.length for e in self.edges)


@dataclass(frozen=True)
class Instance:
    """A graph together with the two disjoint terminal sets."""

    graph: Graph
    A: frozenset[int]
    B: frozenset[int]

    def __init__(self, graph: Graph, A, B=()):
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "A", frozenset(A))
        object.__setattr__(self, "B", frozenset(B))

    @property
    def terminals(self) -> frozenset[int]:
        return self.A | self.B


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(instance: Instance) -> ValidationReport:
    """Check every instance invariant; an empty report means well-formed."""
    g = instance.graph
    problems: list[str] = []
    n = g.num_vertices
    if n < 0:
        problems.append("vertex count is negative")

    seen: set[tuple[int, int]] = set()
    for e in g.edges:
        if not (0 <= e.u < n and 0 <= e.v < n):
            problems.append(f"edge ({e.u},{e.v}) has an endpoint out of range")
            continue
        if e.u == e.v:
            problems.append(f"self-loop at vertex {e.u}")
        if e.key() in seen:
            problems.append(f"parallel edge ({e.u},{e.v})")
        seen.add(e.key())
        if e.length < 1:
            problems.append(f"edge ({e.u},{e.v}) has non-positive length {e.length}")

    for v, d in enumerate(g.degrees()):
        if d > 3:
            problems.append(f"vertex {v} has degree {d} > 3")

    for name, terms in (("A", instance.A), ("B", instance.B)):
        for t in sorted(terms):
            if not (0 <= t < n):
                problems.append(f"terminal {t} in {name} is not a vertex")
        if len(terms) % 2 != 0:
            problems.append(f"|{name}| is odd")
    if not instance.A:
        problems.append("A is empty")
    overlap = instance.A & instance.B
    if overlap:
        problems.append(f"A and B intersect: {sorted(overlap)}")

    return ValidationReport(tuple(problems))


@dataclass(frozen=True)
class PlanarEmbedding:
    """Combinatorial planar embedding: a cyclic neighbor order per vertex.

    Faces are traced with the standard half-edge rule: after entering v along
    (u, v), leave along the neighbor preceding u in v's rotation.
    """

    rotation: tuple[tuple[int, ...], ...]
    _faces: tuple = field(default=None, compare=False, repr=False)

    def __init__(self, rotation):
        object.__setattr__(self, "rotation", tuple(tuple(r) for r in rotation))
        object.__setattr__(self, "_faces", None)

    @property
    def num_vertices(self) -> int:
        return len(self.rotation)

    def edge_keys(self) -> list[tuple[int, int]]:
        out = set()
        for u, nbrs in enumerate(self.rotation):
            for v in nbrs:
                out.add((min(u, v), max(u, v)))
        return sorted(out)

    def faces(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        if self._faces is not None:
            return self._faces
        pos = {}
        for u, nbrs in enumerate(self.rotation):
            for i, v in enumerate(nbrs):
                pos[(u, v)] = i
        out = []
        visited: set[tuple[int, int]] = set()
        for u in range(len(self.rotation)):
            for v in self.rotation[u]:
                if (u, v) in visited:
                    continue
                face = []
                a, b = u, v
                while (a, b) not in visited:
                    visited.add((a, b))
                    face.append((a, b))
                    nbrs = self.rotation[b]
                    a, b = b, nbrs[(pos[(b, a)] - 1) % len(nbrs)]
                out.append(tuple(face))
        out = tuple(out)
        object.__setattr__(self, "_faces", out)
        return out

    def euler_ok(self) -> bool:
        """Face count matches Euler's formula V - E + F = 2 per component."""
        n = self.num_vertices
        edges = self.edge_keys()
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        components = len({find(v) for v in range(n)}) if n else 0
        # Each connected component is embedded on its own sphere; a vertex
        # with no edges has the one all-surrounding face, which the half-edge
        # walk cannot produce.
        isolated = sum(1 for v in range(n) if not self.rotation[v])
        return n - len(edges) + len(self.faces()) + isolated == 2 * components


def planar_embed(graph: Graph) -> PlanarEmbedding:
    """Compute a rotation system for the graph or raise NonPlanarError.

    Deterministic for a fixed input: the underlying graph is always built in
    sorted vertex and edge order.
    """
    G = nx.Graph()
    G.add_nodes_from(range(graph.num_vertices))
    G.add_edges_from((e.u, e.v) for e in graph.edges)
    ok, emb = nx.check_planarity(G)
    if not ok:
        raise NonPlanarError("graph contains a K5 or K3,3 subdivision")
    data = emb.get_data()
    rotation = [tuple(data.get(v, ())) for v in range(graph.num_vertices)]
    embedding = PlanarEmbedding(rotation)
    if not embedding.euler_ok():
        raise NonPlanarError("embedding failed the Euler face-count check")
    return embedding


def faces(embedding: PlanarEmbedding):
    """All faces of the embedding as cyclic sequences of directed edges."""
    return embedding.faces()
