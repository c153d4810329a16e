"""Brute-force reference implementations used as ground truth in tests.

Everything here is deliberately simple and independent of the production
solver: disjoint-path enumeration works directly on the instance graph,
matching counts recurse over the lowest unmatched vertex, and independent
sets are enumerated with plain include/exclude branching.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .errors import InstanceTooLargeError
from .graphs import Graph, Instance

__all__ = [
    "SolutionSet",
    "enumerate_solutions",
    "count_pm_brute",
    "max_independent_sets",
    "count_shortest_paths",
]


@dataclass(frozen=True)
class SolutionSet:
    """Minimum length and every optimal edge set, canonically ordered."""

    min_length: int | None
    solutions: tuple[frozenset[int], ...]

    @property
    def count(self) -> int:
        return len(self.solutions)


def characteristic_key(solution: frozenset[int], num_edges: int) -> tuple[int, ...]:
    """Lexicographic sort key: absent edge < present edge, lowest index first."""
    return tuple(1 if i in solution else 0 for i in range(num_edges))


def _pairings(items: list[int]):
    if not items:
        yield []
        return
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1 :]
        for tail in _pairings(rest):
            yield [(first, items[i])] + tail


def _dijkstra(adj, source, n, blocked=()):
    """Distances from source; vertices in ``blocked`` may end but not relay."""
    dist = [None] * n
    dist[source] = 0
    heap = [(0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d != dist[v]:
            continue
        if v != source and v in blocked:
            continue
        for u, _eidx, w in adj[v]:
            nd = d + w
            if dist[u] is None or nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    return dist


def enumerate_solutions(instance: Instance, cap: int = 16) -> SolutionSet:
    """Exhaustively find the shortest disjoint A,B-paths and all optima.

    Searches over within-A and within-B pairings of the terminals and, for
    each pairing, over systems of vertex-disjoint paths.  Terminals are never
    interior vertices of a path.  Prunes with single-pair shortest-path lower
    bounds, which are admissible because they ignore disjointness.
    """
    g = instance.graph
    n = g.num_vertices
    if n > cap:
        raise InstanceTooLargeError(f"{n} vertices exceeds the oracle cap {cap}")

    adj: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for idx, e in enumerate(g.edges):
        adj[e.u].append((e.v, idx, e.length))
        adj[e.v].append((e.u, idx, e.length))

    terminals = instance.terminals
    # Solution paths never relay through a terminal, so terminal-avoiding
    # distances are valid (and much sharper) lower bounds per pair.
    term_dist = {t: _dijkstra(adj, t, n, blocked=terminals) for t in terminals}

    best: int | None = None
    found: set[frozenset[int]] = set()

    def pair_bound(pairs, k):
        total = 0
        for s, t in pairs[k:]:
            d = term_dist[t][s]
            if d is None:
                return None
            total += d
        return total

    def search(pairs, k, used, chosen, total):
        nonlocal best, found
        if k == len(pairs):
            if best is None or total < best:
                best = total
                found = {frozenset(chosen)}
            elif total == best:
                found.add(frozenset(chosen))
            return
        bound = pair_bound(pairs, k)
        if bound is None or (best is not None and total + bound > best):
            return
        s, t = pairs[k]
        dist_t = term_dist[t]

        def walk(cur, length):
            if best is not None:
                rest = pair_bound(pairs, k + 1)
                if rest is None:
                    return
                d = dist_t[cur]
                if d is None or total + length + d + rest > best:
                    return
            for nbr, eidx, w in adj[cur]:
                if eidx in chosen:
                    continue
                if nbr == t:
                    chosen.add(eidx)
                    search(pairs, k + 1, used | {t}, chosen, total + length + w)
                    chosen.remove(eidx)
                elif nbr not in used and nbr not in terminals:
                    used.add(nbr)
                    chosen.add(eidx)
                    walk(nbr, length + w)
                    chosen.remove(eidx)
                    used.remove(nbr)

        walk(s, 0)

    def feasible_pairings(items: list[int]):
        # Prune pairings containing a pair with no terminal-avoiding path.
        if not items:
            yield []
            return
        first = items[0]
        for i in range(1, len(items)):
            if term_dist[first][items[i]] is None:
                continue
            rest = items[1:i] + items[i + 1 :]
            for tail in feasible_pairings(rest):
                yield [(first, items[i])] + tail

    for pa in feasible_pairings(sorted(instance.A)):
        for pb in feasible_pairings(sorted(instance.B)):
            pairs = pa + pb
            search(pairs, 0, set(terminals), set(), 0)

    ordered = sorted(found, key=lambda s: characteristic_key(s, g.num_edges))
    return SolutionSet(best, tuple(ordered))


def count_pm_brute(num_vertices: int, weighted_edges, cap: int = 40) -> int:
    """Weighted perfect-matching count: sum over matchings of the weight product.

    ``weighted_edges`` holds (u, v, weight) triples with integer weights.
    Recursion always matches the lowest-id unmatched vertex; results are
    memoized on the matched-vertex bitmask.
    """
    n = num_vertices
    if n > cap:
        raise InstanceTooLargeError(f"{n} vertices exceeds the matching cap {cap}")
    if n % 2 != 0:
        return 0
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, w in weighted_edges:
        adj[u].append((v, w))
        adj[v].append((u, w))

    full = (1 << n) - 1
    memo: dict[int, int] = {}

    def rec(mask: int) -> int:
        if mask == full:
            return 1
        cached = memo.get(mask)
        if cached is not None:
            return cached
        v = ((~mask) & (mask + 1)).bit_length() - 1  # lowest unmatched vertex
        total = 0
        for u, w in adj[v]:
            if not (mask >> u) & 1:
                total += w * rec(mask | (1 << v) | (1 << u))
        memo[mask] = total
        return total

    return rec(0)


def max_independent_sets(num_vertices: int, edges, cap: int = 20) -> tuple[int, int]:
    """Exact (maximum independent set size, number of maximum sets)."""
    n = num_vertices
    if n > cap:
        raise InstanceTooLargeError(f"{n} vertices exceeds the MIS cap {cap}")
    adj_mask = [0] * n
    for e in edges:
        u, v = (e.u, e.v) if hasattr(e, "u") else (e[0], e[1])
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u

    best = -1
    count = 0

    def rec(i: int, size: int, blocked: int):
        nonlocal best, count
        if size + (n - i) < best:
            return
        if i == n:
            if size > best:
                best, count = size, 1
            elif size == best:
                count += 1
            return
        if not (blocked >> i) & 1:
            rec(i + 1, size + 1, blocked | adj_mask[i])
        rec(i + 1, size, blocked)

    rec(0, 0, 0)
    return best, count


def count_shortest_paths(graph: Graph, s: int, t: int) -> tuple[int | None, int]:
    """Shortest s-t distance and the exact number of shortest paths."""
    n = graph.num_vertices
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e in graph.edges:
        adj[e.u].append((e.v, e.length))
        adj[e.v].append((e.u, e.length))
    dist: list[int | None] = [None] * n
    ways = [0] * n
    dist[s] = 0
    ways[s] = 1
    heap = [(0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if d != dist[v]:
            continue
        for u, w in adj[v]:
            nd = d + w
            if dist[u] is None or nd < dist[u]:
                dist[u] = nd
                ways[u] = ways[v]
                heapq.heappush(heap, (nd, u))
            elif nd == dist[u]:
                ways[u] += ways[v]
    return dist[t], ways[t]
