"""Exact determinant backends: compiled multimodular kernel with a pure-Python
fraction-free fallback, selected at import.

Set ABPATHS_DET_BACKEND=python or =compiled to force a backend; the default
(auto) uses the compiled kernel when the extension module imported cleanly.
Both backends are exact and bit-identical; ``benchmarks/bench_det.py``
compares them.
"""

from __future__ import annotations

import math
import os

try:
    from . import _detcore
except ImportError:  # extension not built; pure-Python fallback
    _detcore = None

__all__ = [
    "backend_name",
    "have_compiled",
    "bareiss_det",
    "det_skew_nonneg",
    "SkewStructure",
    "eval_structural_dets",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin for n < 2**64
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_primes: list[int] = []
_next_candidate = (1 << 62) + 1


def primes(count: int) -> list[int]:
    """The first ``count`` 62-bit primes, cached across calls."""
    global _next_candidate
    while len(_primes) < count:
        if _is_prime(_next_candidate):
            _primes.append(_next_candidate)
        _next_candidate += 2
    return _primes[:count]


def crt_nonneg(residues, prime_list) -> int:
    """Combine residues into the unique value in [0, prod(primes))."""
    x = 0
    modulus = 1
    for r, p in zip(residues, prime_list):
        t = ((r - x) * pow(modulus, -1, p)) % p
        x += modulus * t
        modulus *= p
    return x


def _forced_mode() -> str:
    return os.environ.get("ABPATHS_DET_BACKEND", "auto")


def have_compiled() -> bool:
    return _detcore is not None and _forced_mode() != "python"


def backend_name() -> str:
    mode = _forced_mode()
    if mode == "compiled" and _detcore is None:
        raise RuntimeError("compiled determinant kernel requested but not built")
    return "compiled" if have_compiled() else "python"


def bareiss_det(rows) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def unit_pair_reduce(rows, pairs):
    """Eliminate disjoint 2x2 blocks with +-1 pivots; returns the dense rest.

    Exact integer Schur steps: each applied pair contributes a factor of 1 to
    the determinant, so det(input) == det(output).  Pairs whose pivot entry is
    no longer +-1 (fill-in) are skipped.
    """
    n = len(rows)
    m = [list(r) for r in rows]
    alive = [True] * n
    for a, b in pairs:
        w = m[a][b]
        if w not in (1, -1):
            continue
        touch = [i for i in range(n) if alive[i] and i != a and i != b and (m[i][a] or m[i][b])]
        cols = [j for j in range(n) if alive[j] and j != a and j != b and (m[a][j] or m[b][j])]
        for i in touch:
            ra, rb = m[i][a], m[i][b]
            row = m[i]
            for j in cols:
                row[j] -= w * (rb * m[a][j] - ra * m[b][j])
        alive[a] = alive[b] = False
    keep = [i for i in range(n) if alive[i]]
    return [[m[i][j] for j in keep] for i in keep]


def _hadamard_bits_dense(rows) -> int:
    bits = 0
    for row in rows:
        sq = sum(x * x for x in row)
        bits += (max(sq, 1).bit_length() + 1) // 2 + 1
    return bits


def det_skew_nonneg(rows, pairs=()) -> int:
    """Determinant of an even-dimensional skew-symmetric integer matrix.

    Such determinants are squares of Pfaffians, hence nonnegative; odd
    dimensions give 0 identically.
    """
    n = len(rows)
    if n == 0:
        return 1
    if n % 2 == 1:
        return 0
    if have_compiled() and all(abs(x) < (1 << 62) for row in rows for x in row):
        nprimes = _hadamard_bits_dense(rows) // 61 + 1
        plist = primes(nprimes)
        residues = _detcore.det_skew_dense([list(r) for r in rows], plist, nprimes)
        return crt_nonneg(residues, plist)
    reduced = unit_pair_reduce(rows, pairs)
    return bareiss_det(reduced)


class SkewStructure:
    """Structural description of the skew matrix family D(X, s).

    ``src[k]`` is the reduced-instance edge index whose length is the weight
    exponent of structural edge k, or -1 for internal (weight-1) edges.
    ``pairs`` lists disjoint off-diagonal unit pivots eliminated first.
    """

    __slots__ = ("n", "ei", "ej", "sign", "src", "pairs_a", "pairs_b", "_row_edges")

    def __init__(self, n, ei, ej, sign, src, pairs):
        self.n = n
        self.ei = list(ei)
        self.ej = list(ej)
        self.sign = list(sign)
        self.src = list(src)
        self.pairs_a = [a for a, _ in pairs]
        self.pairs_b = [b for _, b in pairs]
        row_edges = [[] for _ in range(n)]
        for k in range(len(self.ei)):
            row_edges[self.ei[k]].append(k)
            row_edges[self.ej[k]].append(k)
        self._row_edges = row_edges

    def exponents(self, lengths) -> list[int]:
        return [lengths[s] if s >= 0 else 0 for s in self.src]

    def det_bits_bound(self, exps, s: int) -> int:
        """Hadamard-style bound on log2|det| at evaluation point s."""
        log2s = math.log2(s) if s >= 2 else 0.0
        total = 0.0
        for edges in self._row_edges:
            if not edges:
                continue
            maxexp = max(exps[k] for k in edges) if s >= 2 else 0
            total += 0.5 * math.log2(len(edges)) + maxexp * log2s
        return int(total) + 2

    def build_rows(self, exps, s: int):
        rows = [[0] * self.n for _ in range(self.n)]
        for k in range(len(self.ei)):
            w = s ** exps[k] if exps[k] else 1
            if self.sign[k] < 0:
                w = -w
            rows[self.ei[k]][self.ej[k]] = w
            rows[self.ej[k]][self.ei[k]] = -w
        return rows


def eval_structural_det_bigpoint(struct: SkewStructure, lengths, s: int) -> int:
    """Exact det(D(s)) at a single point too large for a machine word."""
    n = struct.n
    if n % 2 == 1:
        return 0
    if n == 0:
        return 1
    exps = struct.exponents(lengths)
    if have_compiled():
        log2s = max(s.bit_length(), 1)
        bits = 2
        for edges in struct._row_edges:
            if edges:
                maxexp = max(exps[k] for k in edges)
                bits += int(0.5 * math.log2(len(edges)) + maxexp * log2s) + 1
        nprimes = bits // 61 + 1
        plist = primes(nprimes)
        residues = _detcore.det_skew_residues(
            n, struct.ei, struct.ej, exps, struct.sign,
            struct.pairs_a, struct.pairs_b, [s % p for p in plist], plist,
        )
        return crt_nonneg(residues, plist)
    pairs = list(zip(struct.pairs_a, struct.pairs_b))
    rows = struct.build_rows(exps, s)
    return bareiss_det(unit_pair_reduce(rows, pairs))


def eval_structural_dets(struct: SkewStructure, lengths, s_values) -> list[int]:
    """Exact det(D(s)) for each s, via the selected backend."""
    n = struct.n
    if n % 2 == 1:
        return [0] * len(s_values)
    if n == 0:
        return [1] * len(s_values)
    exps = struct.exponents(lengths)
    if have_compiled():
        nprimes = [struct.det_bits_bound(exps, s) // 61 + 1 for s in s_values]
        plist = primes(max(nprimes))
        residue_lists = _detcore.det_skew_batch(
            n, struct.ei, struct.ej, exps, struct.sign,
            struct.pairs_a, struct.pairs_b, list(s_values), nprimes, plist,
        )
        return [crt_nonneg(res, plist) for res in residue_lists]
    pairs = list(zip(struct.pairs_a, struct.pairs_b))
    out = []
    for s in s_values:
        rows = struct.build_rows(exps, s)
        out.append(bareiss_det(unit_pair_reduce(rows, pairs)))
    return out
