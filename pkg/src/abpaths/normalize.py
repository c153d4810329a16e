"""Reduction of valid max-degree-3 instances to cubic instances.

Rules applied to a fixpoint, lowest-id vertex first within each priority
class:

* nonterminal of degree 0 or 1: delete (no solution path can use it);
* terminal of degree 0, or one whose every neighbor is a terminal of the
  opposite set: infeasible (it can neither end nor continue a path there);
* degree-1 terminal next to a nonterminal: drop the edge, move the terminal
  role inward, and credit the edge length to the offset;
* degree-1 terminal next to a same-set terminal: the edge is a forced path;
  remove both endpoints and credit the length;
* degree-2 nonterminal: contract its two edges into one.  If that edge would
  parallel an existing one, keep only the strictly shorter route; on a length
  tie, splice in a 4-vertex widget whose two 2-edge routes reproduce both
  original routes exactly (its 3-edge detours are strictly longer and never
  optimal);
* degree-2 terminal: splice in the 4-vertex diamond with unit internal
  lengths; the optimum in the rewritten instance rises by exactly one.

Solution counts are preserved exactly under every rule, and the trace maps
reduced edges back to original edge sets bijectively on optimal solutions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InfeasibleError, InternalInconsistencyError
from .graphs import Graph, Instance

__all__ = ["ReductionTrace", "normalize_to_cubic"]


@dataclass(frozen=True)
class ReductionTrace:
    """How to map results on the reduced instance back to the original."""

    length_offset: int
    edge_map: dict = field(default_factory=dict)  # reduced (u,v) -> frozenset of original edge indices
    forced_paths: tuple[frozenset[int], ...] = ()

    def forced_edges(self) -> frozenset[int]:
        out: set[int] = set()
        for p in self.forced_paths:
            out |= p
        return frozenset(out)

    def carrier_of(self) -> dict[int, tuple[int, int]]:
        """Original edge index -> the unique reduced edge whose presence implies it."""
        carriers: dict[int, tuple[int, int]] = {}
        for key, originals in self.edge_map.items():
            for idx in originals:
                carriers[idx] = key
        return carriers

    def map_back(self, reduced_edge_keys) -> frozenset[int]:
        """Original edge indices of a reduced-instance solution."""
        out = set(self.forced_edges())
        for key in reduced_edge_keys:
            out |= self.edge_map.get(tuple(sorted(key)), frozenset())
        return frozenset(out)


class _WorkEdge:
    __slots__ = ("u", "v", "length", "originals")

    def __init__(self, u, v, length, originals):
        self.u = u
        self.v = v
        self.length = length
        self.originals = originals


class _Workspace:
    def __init__(self, instance: Instance):
        g = instance.graph
        self.role: dict[int, str | None] = {}
        for v in range(g.num_vertices):
            self.role[v] = "A" if v in instance.A else "B" if v in instance.B else None
        self.adj: dict[int, dict[int, int]] = {v: {} for v in range(g.num_vertices)}
        self.edges: dict[int, _WorkEdge] = {}
        self._next_eid = 0
        self._next_vid = g.num_vertices
        self.offset = 0
        self.forced: list[frozenset[int]] = []
        for idx, e in enumerate(g.edges):
            self.add_edge(e.u, e.v, e.length, frozenset({idx}))

    def add_vertex(self, role=None) -> int:
        v = self._next_vid
        self._next_vid += 1
        self.role[v] = role
        self.adj[v] = {}
        return v

    def add_edge(self, u, v, length, originals) -> int:
        if v in self.adj[u]:
            raise InternalInconsistencyError(f"parallel edge ({u},{v}) during reduction")
        eid = self._next_eid
        self._next_eid += 1
        self.edges[eid] = _WorkEdge(u, v, length, originals)
        self.adj[u][v] = eid
        self.adj[v][u] = eid
        return eid

    def remove_edge(self, eid):
        e = self.edges.pop(eid)
        del self.adj[e.u][e.v]
        del self.adj[e.v][e.u]

    def remove_vertex(self, v):
        for eid in list(self.adj[v].values()):
            self.remove_edge(eid)
        del self.adj[v]
        del self.role[v]

    def degree(self, v) -> int:
        return len(self.adj[v])

    # -- rules ------------------------------------------------------------

    def check_stuck_terminals(self):
        for v in sorted(self.adj):
            r = self.role[v]
            if r is None:
                continue
            if self.degree(v) == 0:
                raise InfeasibleError(f"terminal {v} is isolated")
            other = "B" if r == "A" else "A"
            if all(self.role[u] == other for u in self.adj[v]):
                raise InfeasibleError(
                    f"terminal {v} is enclosed by terminals of the opposite set"
                )

    def contract_degree2_nonterminal(self, x):
        (u, e1), (v, e2) = sorted(self.adj[x].items())
        ed1, ed2 = self.edges[e1], self.edges[e2]
        length = ed1.length + ed2.length
        originals = ed1.originals | ed2.originals
        self.remove_vertex(x)
        existing = self.adj[u].get(v)
        if existing is None:
            self.add_edge(u, v, length, originals)
            return
        e0 = self.edges[existing]
        if e0.length < length:
            return  # the contracted route is strictly longer, never optimal
        if e0.length > length:
            self.remove_edge(existing)
            self.add_edge(u, v, length, originals)
            return
        # Equal-length parallel routes: both can appear in optimal solutions,
        # so neither may be dropped.  Replace the pair by a widget with two
        # unit-fronted routes of the same total length.
        old_originals = e0.originals
        self.remove_edge(existing)
        a = self.add_vertex()
        w = self.add_vertex()
        self.add_edge(u, a, 1, old_originals)
        self.add_edge(a, v, length - 1, frozenset())
        self.add_edge(u, w, 1, originals)
        self.add_edge(w, v, length - 1, frozenset())
        self.add_edge(a, w, 1, frozenset())

    def handle_degree1_terminal(self, a):
        ((u, eid),) = self.adj[a].items()
        e = self.edges[eid]
        ra, ru = self.role[a], self.role[u]
        if ru is None:
            self.offset += e.length
            self.forced.append(e.originals)
            self.remove_vertex(a)
            self.role[u] = ra
        elif ru == ra:
            self.offset += e.length
            self.forced.append(e.originals)
            self.remove_vertex(a)
            self.remove_vertex(u)
        else:
            raise InfeasibleError(
                f"degree-1 terminal {a} is attached to the opposite-set terminal {u}"
            )

    def insert_diamond(self, a):
        (u, e1), (v, e2) = sorted(self.adj[a].items())
        ed1, ed2 = self.edges[e1], self.edges[e2]
        self.remove_edge(e1)
        self.remove_edge(e2)
        up = self.add_vertex()
        w = self.add_vertex()
        vp = self.add_vertex()
        self.add_edge(u, up, ed1.length, ed1.originals)
        self.add_edge(up, a, 1, frozenset())
        self.add_edge(up, w, 1, frozenset())
        self.add_edge(a, w, 1, frozenset())
        self.add_edge(a, vp, 1, frozenset())
        self.add_edge(w, vp, 1, frozenset())
        self.add_edge(vp, v, ed2.length, ed2.originals)
        self.offset -= 1

    def simplify(self):
        while True:
            self.check_stuck_terminals()
            target = None
            kind = None
            for v in sorted(self.adj):
                d = self.degree(v)
                r = self.role[v]
                if d == 0 and r is None:
                    target, kind = v, "drop"
                    break
                if d == 1:
                    target, kind = v, "drop" if r is None else "leaf-terminal"
                    break
                if d == 2 and r is None:
                    target, kind = v, "contract"
                    break
                if d == 2 and kind is None:
                    target, kind = v, "diamond"
            if target is None:
                break
            if kind == "drop":
                self.remove_vertex(target)
            elif kind == "leaf-terminal":
                self.handle_degree1_terminal(target)
            elif kind == "contract":
                self.contract_degree2_nonterminal(target)
            else:
                self.insert_diamond(target)
        if any(self.degree(v) != 3 for v in self.adj):
            raise InternalInconsistencyError("reduction left a non-cubic vertex")


def normalize_to_cubic(instance: Instance) -> tuple[Instance, ReductionTrace]:
    """Rewrite a valid max-degree-3 instance into an equivalent cubic one.

    Returns the cubic instance and the trace mapping its optimal solutions
    and optimal value back to the original.  Raises InfeasibleError when a
    rule proves there is no solution at all.
    """
    work = _Workspace(instance)
    work.simplify()

    alive = sorted(work.adj)
    relabel = {v: i for i, v in enumerate(alive)}
    edges = []
    edge_map: dict[tuple[int, int], frozenset[int]] = {}
    for e in work.edges.values():
        u, v = relabel[e.u], relabel[e.v]
        if u > v:
            u, v = v, u
        edges.append((u, v, e.length))
        edge_map[(u, v)] = e.originals
    reduced = Instance(
        Graph(len(alive), edges),
        frozenset(relabel[v] for v in alive if work.role[v] == "A"),
        frozenset(relabel[v] for v in alive if work.role[v] == "B"),
    )
    trace = ReductionTrace(work.offset, edge_map, tuple(work.forced))
    return reduced, trace
