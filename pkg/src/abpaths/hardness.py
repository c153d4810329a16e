"""Reduction from counting maximum independent sets in cubic planar graphs
to shortest disjoint A,B-paths, and the solver-powered MIS counter.

Per input vertex the instance gets an 8-cycle whose two special terminals
can be joined either by a single length-12 edge or by the length-11 rest of
the cycle; taking the long way around encodes membership in the independent
set.  Per input edge two B-terminals attach by unit edges to the two
endpoint cycles; their pairing path must cross one of the cycles, blocking
the length-11 option there.  The optimum satisfies

    alpha(G) = 12*|V| + 3*|E| - length,
    #maximum independent sets = count / 2^(|E| - 3*alpha).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInconsistencyError, NonCubicError, WorkLimitExceededError
from .graphs import Graph, Instance, PlanarEmbedding, planar_embed
from .normalize import normalize_to_cubic
from .solver import solve

__all__ = ["MisReductionInstance", "reduce_mis", "mis_via_solver", "solver_work_estimate"]

# Cycle edge lengths around each vertex gadget: (v1,v2)=2, (v2,v3)=1, ...,
# (v7,v8)=2, and the closing edge (v8,v1)=12.
_CYCLE_LENGTHS = (2, 1, 2, 1, 2, 1, 2, 12)
# The three original edges at a vertex attach, in rotation order, to these
# consecutive cycle positions (0-based pairs (1,2), (3,4), (5,6)).
_SLOTS = ((1, 2), (3, 4), (5, 6))


@dataclass(frozen=True)
class MisReductionInstance:
    instance: Instance
    cycle_of: dict  # input vertex -> tuple of its 8 cycle vertex ids
    pair_of: dict  # input edge (u, v) -> (w1, w2) terminal ids


def reduce_mis(graph: Graph, embedding: PlanarEmbedding | None = None) -> MisReductionInstance:
    """Build the disjoint-paths instance whose optimum encodes MIS counting."""
    degs = graph.degrees()
    if any(d != 3 for d in degs):
        raise NonCubicError("the MIS reduction needs a cubic graph")
    if embedding is None:
        embedding = planar_embed(graph)

    n = graph.num_vertices
    cycle_of = {v: tuple(8 * v + k for k in range(8)) for v in range(n)}
    next_id = 8 * n
    edges: list[tuple[int, int, int]] = []
    A: list[int] = []
    B: list[int] = []

    for v in range(n):
        cyc = cycle_of[v]
        for k in range(8):
            edges.append((cyc[k], cyc[(k + 1) % 8], _CYCLE_LENGTHS[k]))
        A.append(cyc[0])
        A.append(cyc[7])

    # Slot assignment follows each vertex's rotation, so the two unit edges
    # of every edge gadget leave u between consecutive cycle vertices and
    # enter v between consecutive cycle vertices without crossing.
    slot_at: dict[tuple[int, int], tuple[int, int]] = {}
    for v in range(n):
        for k, nbr in enumerate(embedding.rotation[v]):
            i, j = _SLOTS[k]
            slot_at[(v, nbr)] = (cycle_of[v][i], cycle_of[v][j])

    pair_of = {}
    for e in graph.edges:
        w1, w2 = next_id, next_id + 1
        next_id += 2
        B.extend((w1, w2))
        ui, uj = slot_at[(e.u, e.v)]
        vi, vj = slot_at[(e.v, e.u)]
        # The index direction flips on the far side, keeping the channel planar.
        edges.append((w1, ui, 1))
        edges.append((w2, uj, 1))
        edges.append((w1, vj, 1))
        edges.append((w2, vi, 1))
        pair_of[e.key()] = (w1, w2)

    inst = Instance(Graph(next_id, edges), A, B)
    return MisReductionInstance(inst, cycle_of, pair_of)


def solver_work_estimate(instance: Instance) -> float:
    """Rough count of kernel word operations a full solve would need.

    The evaluation grid has 2*Lambda + 1 points and 2^(|Z|-1) even terminal
    subsets; each evaluation eliminates a matrix with about n + 2|Z| dense
    rows over roughly Lambda/30 word-sized primes.
    """
    reduced, _ = normalize_to_cubic(instance)
    lam = reduced.graph.total_length()
    z = len(reduced.terminals)
    points = 2 * lam + 1
    subsets = 2 ** max(z - 1, 0)
    dense = reduced.graph.num_vertices + 2 * z
    per_det = dense**3 * max(lam // 30, 1)
    return float(points) * subsets * per_det


def mis_via_solver(graph: Graph, embedding: PlanarEmbedding | None = None,
                   threads: int = 1, work_limit: float = 5e12) -> tuple[int, int]:
    """Maximum independent set size and count, via the paths solver.

    Raises WorkLimitExceededError when the solve is estimated to exceed
    ``work_limit`` kernel operations; the reduction makes |A| + |B| equal to
    2|V| + 2|E|, and the solver's subset enumeration is exponential in that.
    """
    red = reduce_mis(graph, embedding)
    estimate = solver_work_estimate(red.instance)
    if estimate > work_limit:
        raise WorkLimitExceededError(
            f"solving the reduced instance needs about {estimate:.2e} kernel operations "
            f"(limit {work_limit:.2e}): it has {len(red.instance.A)} + {len(red.instance.B)} "
            "terminals and the subset enumeration is exponential in their number",
            estimate,
        )
    summary = solve(red.instance, threads)
    nv = graph.num_vertices
    ne = graph.num_edges
    alpha = 12 * nv + 3 * ne - summary.length
    if alpha < 0 or ne < 3 * alpha:
        raise InternalInconsistencyError(f"implausible MIS size {alpha} recovered")
    divisor = 1 << (ne - 3 * alpha)
    count, rem = divmod(summary.count, divisor)
    if rem:
        raise InternalInconsistencyError(
            f"count {summary.count} is not divisible by 2^(|E|-3*alpha) = {divisor}"
        )
    return alpha, count
