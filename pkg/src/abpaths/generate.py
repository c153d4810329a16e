"""Seed-deterministic random planar instance generation.

Cubic planar graphs grow from K4 by repeatedly subdividing two distinct
edges on a common face and joining the two new vertices; both operations
stay inside one face, so planarity holds by construction.  Optional edge
subdivisions (degree-2 vertices) and connectivity-preserving deletions
produce general max-degree-3 instances that exercise the reduction rules.
"""

from __future__ import annotations

import random

from .errors import InfeasibleParametersError
from .graphs import Graph, Instance, planar_embed

__all__ = ["random_cubic_planar_graph", "random_instance"]

_K4_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def random_cubic_planar_graph(n: int, rng: random.Random) -> list[tuple[int, int]]:
    """A connected cubic planar graph on n vertices (n even, n >= 4)."""
    if n < 4 or n % 2:
        raise InfeasibleParametersError("cubic graphs need an even vertex count >= 4")
    edges = {tuple(e) for e in _K4_EDGES}
    count = 4
    while count < n:
        emb = planar_embed(Graph(count, [(u, v, 1) for u, v in sorted(edges)]))
        face = rng.choice(emb.faces())
        if len(face) < 2:
            continue
        e1, e2 = rng.sample(range(len(face)), 2)
        (a1, b1), (a2, b2) = face[e1], face[e2]
        if {a1, b1} == {a2, b2}:
            continue  # both directions of a bridge bound the same face
        x, y = count, count + 1
        for a, b in ((a1, b1), (a2, b2)):
            edges.discard((min(a, b), max(a, b)))
        edges.add((min(a1, x), max(a1, x)))
        edges.add((min(b1, x), max(b1, x)))
        edges.add((min(a2, y), max(a2, y)))
        edges.add((min(b2, y), max(b2, y)))
        edges.add((x, y))
        count += 2
    return sorted(edges)


def _connected(n: int, edges) -> bool:
    if n == 0:
        return True
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == n


def random_instance(
    n: int,
    max_length: int,
    a_size: int,
    b_size: int,
    seed: int,
    subdivide: int = 0,
    delete: int = 0,
) -> Instance:
    """A random connected max-degree-3 planar instance, seed-deterministic.

    ``n`` is the size of the cubic skeleton; ``subdivide`` extra degree-2
    vertices and ``delete`` connectivity-preserving edge removals turn it
    into a general max-degree-3 instance.
    """
    if a_size < 2 or a_size % 2 or b_size % 2 or b_size < 0:
        raise InfeasibleParametersError("terminal set sizes must be even with |A| >= 2")
    rng = random.Random(seed)
    pairs = random_cubic_planar_graph(n, rng)

    for _ in range(delete):
        candidates = [e for e in pairs if _connected(n, [f for f in pairs if f != e])]
        if not candidates:
            break
        pairs.remove(rng.choice(candidates))

    count = n
    for _ in range(subdivide):
        u, v = pairs.pop(rng.randrange(len(pairs)))
        pairs.append((min(u, count), max(u, count)))
        pairs.append((min(v, count), max(v, count)))
        count += 1
    pairs.sort()

    edges = [(u, v, rng.randint(1, max_length)) for u, v in pairs]
    if a_size + b_size > count:
        raise InfeasibleParametersError("more terminals than vertices")
    chosen = rng.sample(range(count), a_size + b_size)
    return Instance(Graph(count, edges), chosen[:a_size], chosen[a_size:])
