"""Kasteleyn orientations and exact weighted perfect-matching counts.

An orientation maps each undirected edge (u, v) with u < v to +1 (directed
u -> v) or -1.  The Kasteleyn condition used here: in every face except one
root face per connected component, the number of boundary edges directed
against the face traversal is odd.  Under such an orientation the skew
adjacency matrix satisfies det = pm^2.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from . import detbackend
from .errors import InternalInconsistencyError, NotPerfectSquareError
from .gadget import GadgetGraph
from .graphs import PlanarEmbedding

__all__ = [
    "Orientation",
    "SkewMatrix",
    "kasteleyn_orient",
    "verify_orientation",
    "build_skew_matrix",
    "det_exact",
    "isqrt_exact",
    "count_pm",
]

Orientation = dict  # (u, v) with u < v -> +1 or -1


@dataclass(frozen=True)
class SkewMatrix:
    size: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for i in range(self.size):
            if self.rows[i][i] != 0:
                raise InternalInconsistencyError("nonzero diagonal in skew matrix")
            for j in range(i + 1, self.size):
                if self.rows[i][j] != -self.rows[j][i]:
                    raise InternalInconsistencyError("matrix is not skew-symmetric")


def _components(embedding: PlanarEmbedding) -> list[list[int]]:
    n = embedding.num_vertices
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for u in embedding.rotation[v]:
                if not seen[u]:
                    seen[u] = True
                    comp.append(u)
                    queue.append(u)
        comps.append(comp)
    return comps


def _against_parity(face, orientation) -> int:
    parity = 0
    for a, b in face:
        if a < b:
            if orientation[(a, b)] < 0:
                parity ^= 1
        else:
            if orientation[(b, a)] > 0:
                parity ^= 1
    return parity


def kasteleyn_orient(embedding: PlanarEmbedding) -> Orientation:
    """Construct a Pfaffian orientation of a planar embedded graph.

    Spanning-tree edges are oriented low-to-high; the remaining edges are
    fixed one face at a time walking a dual spanning tree bottom-up, making
    every non-root face's against-traversal count odd.
    """
    faces = embedding.faces()
    orientation: Orientation = {}

    # Spanning forest (BFS over sorted adjacency).
    tree_edges: set[tuple[int, int]] = set()
    for comp in _components(embedding):
        seen = {comp[0]}
        queue = deque([comp[0]])
        while queue:
            v = queue.popleft()
            for u in sorted(embedding.rotation[v]):
                if u not in seen:
                    seen.add(u)
                    tree_edges.add((min(u, v), max(u, v)))
                    queue.append(u)

    for key in embedding.edge_keys():
        if key in tree_edges:
            orientation[key] = 1

    # Dual adjacency through non-tree edges only.
    face_of: dict[tuple[int, int], int] = {}
    for fi, face in enumerate(faces):
        for he in face:
            face_of[he] = fi
    dual: list[list[tuple[int, tuple[int, int]]]] = [[] for _ in faces]
    for key in embedding.edge_keys():
        if key in tree_edges:
            continue
        u, v = key
        f1, f2 = face_of[(u, v)], face_of[(v, u)]
        dual[f1].append((f2, key))
        dual[f2].append((f1, key))

    # One root face per component of the dual (= per component of the graph).
    fseen = [False] * len(faces)
    for root in range(len(faces)):
        if fseen[root]:
            continue
        fseen[root] = True
        order = [root]
        parent_edge: dict[int, tuple[int, int]] = {}
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for g, key in dual[f]:
                if not fseen[g]:
                    fseen[g] = True
                    parent_edge[g] = key
                    order.append(g)
                    queue.append(g)
        for f in reversed(order):
            if f == root:
                continue
            u, v = parent_edge[f]
            orientation[(u, v)] = 1
            if _against_parity(faces[f], orientation) == 0:
                orientation[(u, v)] = -1
    return orientation


def verify_orientation(embedding: PlanarEmbedding, orientation: Orientation) -> bool:
    """True iff at most one face per component has even against-parity."""
    faces = embedding.faces()
    face_vertex = [face[0][0] for face in faces]
    comp_of = {}
    for ci, comp in enumerate(_components(embedding)):
        for v in comp:
            comp_of[v] = ci
    even_faces: dict[int, int] = {}
    for face, v in zip(faces, face_vertex):
        if _against_parity(face, orientation) == 0:
            ci = comp_of[v]
            even_faces[ci] = even_faces.get(ci, 0) + 1
            if even_faces[ci] > 1:
                return False
    return True


def build_skew_matrix(H_X: GadgetGraph, orientation: Orientation, s: int) -> SkewMatrix:
    """Skew adjacency matrix of the oriented gadget subgraph at the point s.

    External edges carry s**length, internal edges carry 1.
    """
    n = H_X.num_vertices
    rows = [[0] * n for _ in range(n)]
    for e in H_X.edges:
        w = s ** e.exponent if e.exponent else 1
        q = orientation[(e.a, e.b)]
        rows[e.a][e.b] = q * w
        rows[e.b][e.a] = -q * w
    return SkewMatrix(n, tuple(tuple(r) for r in rows))


def det_exact(matrix) -> int:
    """Exact determinant of a skew-symmetric integer matrix."""
    rows = matrix.rows if isinstance(matrix, SkewMatrix) else matrix
    return detbackend.det_skew_nonneg(rows)


def isqrt_exact(x: int) -> int:
    """Integer square root of a perfect square."""
    if x < 0:
        raise NotPerfectSquareError(f"{x} is negative")
    r = math.isqrt(x)
    if r * r != x:
        raise NotPerfectSquareError(f"{x} is not a perfect square")
    return r


def unit_pivot_pairs(H_X: GadgetGraph) -> list[tuple[int, int]]:
    """Disjoint internal edges usable as 2x2 unit pivots in elimination.

    One internal edge per triangle and one hub-leaf edge per surviving star;
    together they cover most vertices, which keeps the dense elimination
    block near one third of the full dimension.
    """
    pairs = []
    used: set[int] = set()
    for e in H_X.edges:
        if e.kind != "internal":
            continue
        if e.a in used or e.b in used:
            continue
        pairs.append((e.a, e.b))
        used.add(e.a)
        used.add(e.b)
    return pairs


def count_pm(H_X: GadgetGraph, s: int) -> int:
    """Weighted perfect-matching count of the gadget subgraph at the point s."""
    if H_X.num_vertices % 2 == 1:
        return 0
    if H_X.num_vertices == 0:
        return 1
    orientation = kasteleyn_orient(H_X.embedding)
    matrix = build_skew_matrix(H_X, orientation, s)
    det = detbackend.det_skew_nonneg(matrix.rows, unit_pivot_pairs(H_X))
    return isqrt_exact(det)
