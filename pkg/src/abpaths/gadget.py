"""Expansion of a cubic planar instance into the matching gadget graph.

Every nonterminal vertex becomes a triangle, every terminal a 3-star with a
center hub.  Each original edge becomes one external edge between connector
vertices, attached in the same cyclic order as the original rotation, which
yields a valid embedding of the expanded graph without re-running planarity.
External edges carry the original edge's length as a weight exponent;
internal edges carry exponent 0 (weight 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInconsistencyError
from .graphs import Instance, PlanarEmbedding

__all__ = ["GadgetEdge", "GadgetGraph", "build_gadget_graph", "subgraph_HX"]

INTERNAL = "internal"
EXTERNAL = "external"


@dataclass(frozen=True)
class GadgetEdge:
    a: int
    b: int
    kind: str
    exponent: int  # weight is s**exponent; 0 for internal edges
    orig_index: int | None = None  # index into the instance edge list for externals


@dataclass(frozen=True)
class GadgetGraph:
    num_vertices: int
    edges: tuple[GadgetEdge, ...]
    embedding: PlanarEmbedding
    connectors: dict  # instance vertex -> (h0, h1, h2) aligned with its rotation
    centers: dict  # terminal -> hub vertex id
    external_ends: dict  # orig edge index -> (f, g) connector pair, f on the lower endpoint
    parent_map: tuple[int, ...] | None = None  # H(X) vertex -> vertex id in H

    @property
    def num_external(self) -> int:
        return sum(1 for e in self.edges if e.kind == EXTERNAL)

    @property
    def num_internal(self) -> int:
        return sum(1 for e in self.edges if e.kind == INTERNAL)


def build_gadget_graph(instance: Instance, embedding: PlanarEmbedding) -> GadgetGraph:
    """Build the expanded graph for a cubic planar instance."""
    g = instance.graph
    n = g.num_vertices
    terminals = instance.terminals
    for v, d in enumerate(g.degrees()):
        if d != 3:
            raise InternalInconsistencyError(f"gadget expansion needs a cubic graph, vertex {v} has degree {d}")

    connectors: dict[int, tuple[int, int, int]] = {}
    centers: dict[int, int] = {}
    next_id = 0
    for v in range(n):
        connectors[v] = (next_id, next_id + 1, next_id + 2)
        next_id += 3
        if v in terminals:
            centers[v] = next_id
            next_id += 1

    edge_at = g.edge_index()
    edges: list[GadgetEdge] = []
    external_ends: dict[int, tuple[int, int]] = {}
    rotation: list[list[int]] = [[] for _ in range(next_id)]

    # Externals first: connector k of v serves the k-th neighbor in v's rotation.
    for v in range(n):
        for k, nbr in enumerate(embedding.rotation[v]):
            if nbr < v:
                continue
            idx = edge_at[(v, nbr)]
            ku = k
            kv = embedding.rotation[nbr].index(v)
            f = connectors[v][ku]
            gg = connectors[nbr][kv]
            edges.append(GadgetEdge(min(f, gg), max(f, gg), EXTERNAL, g.edges[idx].length, idx))
            external_ends[idx] = (f, gg)

    ext_partner = {}
    for idx, (f, gg) in external_ends.items():
        ext_partner[f] = gg
        ext_partner[gg] = f

    for v in range(n):
        c = connectors[v]
        if v in terminals:
            hub = centers[v]
            for k in range(3):
                edges.append(GadgetEdge(min(c[k], hub), max(c[k], hub), INTERNAL, 0))
                rotation[c[k]] = [ext_partner[c[k]], hub]
            rotation[hub] = [c[0], c[1], c[2]]
        else:
            for k in range(3):
                edges.append(GadgetEdge(min(c[k], c[(k + 1) % 3]), max(c[k], c[(k + 1) % 3]), INTERNAL, 0))
                # Mounted inside the vertex's rotation circle: the external edge,
                # then the two triangle partners in rotation order.
                rotation[c[k]] = [ext_partner[c[k]], c[(k + 1) % 3], c[(k + 2) % 3]]

    edges.sort(key=lambda e: (e.a, e.b))
    return GadgetGraph(
        num_vertices=next_id,
        edges=tuple(edges),
        embedding=PlanarEmbedding(rotation),
        connectors=connectors,
        centers=centers,
        external_ends=external_ends,
    )


def subgraph_HX(H: GadgetGraph, X) -> GadgetGraph:
    """The gadget graph with the hubs of terminals outside X removed.

    Vertices are renumbered densely; ``parent_map`` records the original ids.
    """
    X = frozenset(X)
    dropped = {hub for z, hub in H.centers.items() if z not in X}
    alive = [v for v in range(H.num_vertices) if v not in dropped]
    relabel = {v: i for i, v in enumerate(alive)}

    edges = []
    for e in H.edges:
        if e.a in dropped or e.b in dropped:
            continue
        a, b = relabel[e.a], relabel[e.b]
        if a > b:
            a, b = b, a
        edges.append(GadgetEdge(a, b, e.kind, e.exponent, e.orig_index))
    edges.sort(key=lambda e: (e.a, e.b))

    rotation = []
    for v in alive:
        rotation.append([relabel[u] for u in H.embedding.rotation[v] if u not in dropped])

    return GadgetGraph(
        num_vertices=len(alive),
        edges=tuple(edges),
        embedding=PlanarEmbedding(rotation),
        connectors={v: tuple(relabel[c] for c in cs) for v, cs in H.connectors.items()},
        centers={z: relabel[hub] for z, hub in H.centers.items() if z in X},
        external_ends={i: (relabel[f], relabel[g]) for i, (f, g) in H.external_ends.items()},
        parent_map=tuple(alive),
    )
