"""The exact solver: signed matching-count evaluation, interpolation, witness
extraction, and uniform sampling.

For the reduced cubic instance with terminal set Z and total edge length L,
the signed sum over even terminal subsets X of

    (-1)^{|X cap A|} * pm(H(X), s) * pm(H(Z\\X), s)

is a polynomial in s of degree at most 2L whose top monomial c*s^d encodes
the optimum: length = 2L - d (plus the reduction offset) and the solution
count is c / 2^{|Z|/2}.  The polynomial is recovered exactly from the
evaluations at s = 0..2L.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

from . import detbackend
from .errors import (
    InfeasibleError,
    InternalInconsistencyError,
    NonIntegerCoefficientError,
    ValidationError,
    WitnessIndexError,
)
from .gadget import build_gadget_graph, subgraph_HX
from .graphs import Instance, planar_embed, validate
from .normalize import ReductionTrace, normalize_to_cubic
from .pfaffian import isqrt_exact, kasteleyn_orient, unit_pivot_pairs

__all__ = [
    "SolutionSummary",
    "SolveReport",
    "prepare",
    "evaluate_p",
    "interpolate",
    "solve",
    "solve_report",
    "witness",
    "iter_witnesses",
    "sample",
]


@dataclass(frozen=True)
class SolutionSummary:
    """Optimal length (None when infeasible), exact count, optional witness."""

    length: int | None
    count: int
    witness: tuple[tuple[int, int], ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.length is not None


@dataclass(frozen=True)
class SolveReport:
    summary: SolutionSummary
    lambda_total: int  # total edge length of the reduced instance
    poly: tuple[int, ...]  # coefficients of p for the reduced instance, low degree first
    reduced: Instance
    trace: ReductionTrace


class _SubsetEval:
    """Cached evaluation machinery for one reduced cubic instance.

    The per-subset matrix structure (gadget subgraph, Pfaffian orientation,
    pivot pairs) depends only on the graph, so witness extraction can re-count
    under modified edge lengths without rebuilding any of it.
    """

    def __init__(self, reduced: Instance):
        self.reduced = reduced
        self.embedding = planar_embed(reduced.graph)
        self.H = build_gadget_graph(reduced, self.embedding)
        z = sorted(reduced.terminals)
        self.subsets: list[frozenset[int]] = [
            frozenset(c) for k in range(0, len(z) + 1, 2) for c in combinations(z, k)
        ]
        self.signs = {x: -1 if len(x & reduced.A) % 2 else 1 for x in self.subsets}
        self.complement = {x: frozenset(z) - x for x in self.subsets}
        self.structs = {x: self._structure(x) for x in self.subsets}

    def _structure(self, x: frozenset[int]) -> detbackend.SkewStructure:
        hx = subgraph_HX(self.H, x)
        orientation = kasteleyn_orient(hx.embedding)
        ei, ej, sign, src = [], [], [], []
        for e in hx.edges:
            ei.append(e.a)
            ej.append(e.b)
            sign.append(orientation[(e.a, e.b)])
            src.append(e.orig_index if e.orig_index is not None else -1)
        return detbackend.SkewStructure(hx.num_vertices, ei, ej, sign, src, unit_pivot_pairs(hx))

    def pm_values(self, lengths, s_values, threads: int = 1) -> dict:
        """pm(H(X), s) for every even subset and every requested s."""

        def run(x):
            dets = detbackend.eval_structural_dets(self.structs[x], lengths, s_values)
            return [isqrt_exact(d) for d in dets]

        if threads > 1 and len(self.subsets) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, self.subsets))
            return dict(zip(self.subsets, results))
        return {x: run(x) for x in self.subsets}

    def p_values(self, lengths, threads: int = 1) -> tuple[int, list[int]]:
        """Total reduced length and the evaluations p(0), ..., p(2*total)."""
        lam = sum(lengths)
        s_values = list(range(2 * lam + 1))
        pm = self.pm_values(lengths, s_values, threads)
        values = []
        for si in range(len(s_values)):
            acc = 0
            for x in self.subsets:
                acc += self.signs[x] * pm[x][si] * pm[self.complement[x]][si]
            values.append(acc)
        return lam, values

    def pm_values_bigpoint(self, lengths, s: int, threads: int = 1) -> dict:
        def run(x):
            return isqrt_exact(detbackend.eval_structural_det_bigpoint(self.structs[x], lengths, s))

        if threads > 1 and len(self.subsets) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(run, self.subsets))
            return dict(zip(self.subsets, results))
        return {x: run(x) for x in self.subsets}

    def coefficient_at(self, lengths, degree: int, threads: int = 1) -> int:
        """The coefficient of s**degree, exact, assuming deg p <= degree.

        Two evaluations: the unsigned term sum U at s = 1 bounds the absolute
        coefficient sum, so at s0 = 2U + 2 the lower-degree part contributes
        less than half of s0**degree in absolute value and rounding the
        quotient recovers the coefficient.
        """
        if degree < 0:
            return 0
        pm1 = self.pm_values(lengths, [1], threads)
        unsigned = sum(pm1[x][0] * pm1[self.complement[x]][0] for x in self.subsets)
        if unsigned == 0:
            return 0
        s0 = 2 * unsigned + 2
        pm0 = self.pm_values_bigpoint(lengths, s0, threads)
        value = sum(self.signs[x] * pm0[x] * pm0[self.complement[x]] for x in self.subsets)
        modulus = s0**degree
        q, r = divmod(value, modulus)
        if 2 * r >= modulus:
            q += 1
        if not -1 <= q <= unsigned:
            raise InternalInconsistencyError("coefficient extraction out of range; degree bound violated")
        return max(q, 0)


@dataclass(frozen=True)
class Prepared:
    instance: Instance
    reduced: Instance
    trace: ReductionTrace
    core: _SubsetEval
    infeasible_early: bool


@lru_cache(maxsize=64)
def _prepare_cached(instance: Instance) -> Prepared:
    report = validate(instance)
    if not report.ok:
        raise ValidationError(report)
    planar_embed(instance.graph)  # rejects nonplanar inputs up front
    try:
        reduced, trace = normalize_to_cubic(instance)
    except InfeasibleError:
        return Prepared(instance, instance, ReductionTrace(0), None, True)
    return Prepared(instance, reduced, trace, _SubsetEval(reduced), False)


def prepare(instance: Instance) -> Prepared:
    """Validate, normalize, and build the cached evaluation structures."""
    return _prepare_cached(instance)


def _leading_from_values(values) -> tuple[int, int] | None:
    """Degree and coefficient of the top monomial from values at 0..len-1.

    Finite differences of exact integer samples on consecutive points: the
    polynomial has degree d iff the d-th difference row is a nonzero constant
    and the next row vanishes.  Returns None for the zero polynomial.
    """
    row = list(values)
    level = 0
    top_row = None
    top_level = None
    while row and any(row):
        top_row, top_level = row, level
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
        level += 1
    if top_level is None:
        return None
    if any(v != top_row[0] for v in top_row):
        raise InternalInconsistencyError("finite-difference table is not consistent with the sample count")
    c, rem = divmod(top_row[0], factorial(top_level))
    if rem:
        raise NonIntegerCoefficientError("leading coefficient is not an integer")
    return top_level, c


def interpolate(points, degree_bound: int | None = None) -> list[int]:
    """Exact polynomial interpolation; returns integer coefficients, low first.

    Newton's divided differences over exact rationals.  Raises
    NonIntegerCoefficientError if any coefficient is not an integer.
    """
    pts = list(points)
    xs = [p[0] for p in pts]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation points must have distinct abscissae")
    if degree_bound is not None and len(pts) != degree_bound + 1:
        raise ValueError("need exactly degree_bound + 1 points")
    table = [Fraction(p[1]) for p in pts]
    for k in range(1, len(pts)):
        for i in range(len(pts) - 1, k - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - k])
    # Horner expansion of the Newton form into monomial coefficients.
    coeffs = [table[-1]]
    for k in range(len(pts) - 2, -1, -1):
        new = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            new[i + 1] += c
            new[i] -= c * xs[k]
        new[0] += table[k]
        coeffs = new
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise NonIntegerCoefficientError(f"coefficient {c} is not an integer")
        out.append(int(c))
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def evaluate_p(prepared: Prepared, s: int, threads: int = 1) -> int:
    """Exact value of the signed matching-count sum at a single point."""
    if prepared.infeasible_early:
        return 0
    core = prepared.core
    lengths = [e.length for e in prepared.reduced.graph.edges]
    pm = core.pm_values(lengths, [s], threads)
    return sum(core.signs[x] * pm[x][0] * pm[core.complement[x]][0] for x in core.subsets)


def _extract(core: _SubsetEval, lam: int, values, trace_offset: int, z_count: int):
    lead = _leading_from_values(values)
    if lead is None:
        return SolutionSummary(None, 0)
    d, c = lead
    if c <= 0:
        raise InternalInconsistencyError(f"leading coefficient {c} is not positive")
    if d > 2 * lam:
        raise InternalInconsistencyError("polynomial degree exceeds the bound")
    half = 1 << (z_count // 2)
    count, rem = divmod(c, half)
    if rem:
        raise InternalInconsistencyError(
            f"leading coefficient {c} is not divisible by 2^(|Z|/2) = {half}"
        )
    return SolutionSummary(2 * lam - d + trace_offset, count)


def solve(instance: Instance, threads: int = 1) -> SolutionSummary:
    """Optimal length and the exact number of optimal solutions."""
    prepared = prepare(instance)
    if prepared.infeasible_early:
        return SolutionSummary(None, 0)
    lengths = [e.length for e in prepared.reduced.graph.edges]
    lam, values = prepared.core.p_values(lengths, threads)
    return _extract(prepared.core, lam, values, prepared.trace.length_offset,
                    len(prepared.reduced.terminals))


def solve_report(instance: Instance, threads: int = 1) -> SolveReport:
    """Like solve, but retains the full polynomial of the reduced instance."""
    prepared = prepare(instance)
    if prepared.infeasible_early:
        return SolveReport(SolutionSummary(None, 0), 0, (0,), prepared.reduced, prepared.trace)
    lengths = [e.length for e in prepared.reduced.graph.edges]
    lam, values = prepared.core.p_values(lengths, threads)
    summary = _extract(prepared.core, lam, values, prepared.trace.length_offset,
                       len(prepared.reduced.terminals))
    coeffs = interpolate(list(enumerate(values)))
    return SolveReport(summary, lam, tuple(coeffs), prepared.reduced, prepared.trace)


def _count_at(core: _SubsetEval, lengths, target: int, threads: int) -> int:
    """Number of solutions of the modified reduced instance achieving target.

    The walk's bookkeeping guarantees the modified optimum is at least the
    target, so the polynomial has no terms above degree 2*Lambda - target and
    the two-point coefficient extraction applies.  Setting
    ABPATHS_WITNESS_COUNT=interpolate forces the full-interpolation route
    (used as the reference in tests).
    """
    lam = sum(lengths)
    if os.environ.get("ABPATHS_WITNESS_COUNT") == "interpolate":
        values = core.p_values(lengths, threads)[1]
        summary = _extract(core, lam, values, 0, len(core.reduced.terminals))
        if not summary.feasible or summary.length > target:
            return 0
        if summary.length < target:
            raise InternalInconsistencyError("optimum dropped below the tracked target")
        return summary.count
    c = core.coefficient_at(lengths, 2 * lam - target, threads)
    if c == 0:
        return 0
    half = 1 << (len(core.reduced.terminals) // 2)
    count, rem = divmod(c, half)
    if rem:
        raise InternalInconsistencyError(
            f"coefficient {c} at the optimum is not divisible by {half}"
        )
    return count


class _WitnessWalk:
    """Shared state for the lexicographic self-reduction.

    All reduced-instance lengths are doubled up front so that an edge forced
    into the solution can be shortened by 1 (making everything that omits it
    strictly worse at the tracked optimum), while an edge forced out of the
    solution is lengthened by 1 (making everything that uses it strictly
    worse).  Counts at the tracked optimum then realize both branch sizes.
    """

    def __init__(self, prepared: Prepared, total: int, base_length: int, threads: int):
        self.core = prepared.core
        self.trace = prepared.trace
        self.threads = threads
        self.total = total
        reduced = prepared.reduced
        self.lengths = [2 * e.length for e in reduced.graph.edges]
        self.target = 2 * (base_length - prepared.trace.length_offset)
        pos_of = {e.key(): i for i, e in enumerate(reduced.graph.edges)}
        carriers = self.trace.carrier_of()
        forced = self.trace.forced_edges()
        m_orig = len(prepared.instance.graph.edges)
        seq: list[int] = []
        seen: set[int] = set()
        for orig in range(m_orig):
            if orig in forced:
                continue
            key = carriers.get(orig)
            if key is None:
                continue
            pos = pos_of[key]
            if pos not in seen:
                seen.add(pos)
                seq.append(pos)
        self.sequence = seq
        self.reduced_keys = [e.key() for e in reduced.graph.edges]

    def count_avoiding(self, lengths, pos, target) -> int:
        trial = list(lengths)
        trial[pos] += 1
        return _count_at(self.core, trial, target, self.threads)

    def solution_edges(self, present_positions, instance: Instance):
        indices = self.trace.map_back([self.reduced_keys[p] for p in present_positions])
        return tuple(sorted(instance.graph.edges[i].key() for i in indices))


def witness(instance: Instance, index: int, threads: int = 1):
    """The index-th optimal solution in the canonical order, as edge pairs.

    Solutions are ordered lexicographically by their characteristic vectors
    over the instance's sorted edge list, absent before present.
    """
    summary = solve(instance, threads)
    if not 1 <= index <= summary.count:
        raise WitnessIndexError(f"index {index} outside 1..{summary.count}")
    prepared = prepare(instance)
    walk = _WitnessWalk(prepared, summary.count, summary.length, threads)
    lengths = list(walk.lengths)
    target = walk.target
    i = index
    remaining = summary.count
    present: list[int] = []
    for pos in walk.sequence:
        avoid = walk.count_avoiding(lengths, pos, target)
        if i <= avoid:
            lengths[pos] += 1
            remaining = avoid
        else:
            i -= avoid
            remaining -= avoid
            lengths[pos] -= 1
            target -= 1
            present.append(pos)
    if remaining != 1 or i != 1:
        raise InternalInconsistencyError("witness walk did not isolate a unique solution")
    return walk.solution_edges(present, instance)


def iter_witnesses(instance: Instance, threads: int = 1):
    """All optimal solutions in the canonical order (shared-prefix recounting)."""
    summary = solve(instance, threads)
    if summary.count == 0:
        return
    prepared = prepare(instance)
    walk = _WitnessWalk(prepared, summary.count, summary.length, threads)

    def rec(k, lengths, target, remaining, present):
        if remaining == 0:
            return
        if k == len(walk.sequence):
            if remaining != 1:
                raise InternalInconsistencyError("witness enumeration did not isolate a unique solution")
            yield walk.solution_edges(present, instance)
            return
        pos = walk.sequence[k]
        avoid = walk.count_avoiding(lengths, pos, target)
        if avoid:
            absent_lengths = list(lengths)
            absent_lengths[pos] += 1
            yield from rec(k + 1, absent_lengths, target, avoid, present)
        if remaining - avoid:
            present_lengths = list(lengths)
            present_lengths[pos] -= 1
            yield from rec(k + 1, present_lengths, target - 1, remaining - avoid, present + [pos])

    yield from rec(0, list(walk.lengths), walk.target, summary.count, [])


def sample(instance: Instance, seed: int, threads: int = 1):
    """A uniformly random optimal solution, deterministic for a fixed seed."""
    summary = solve(instance, threads)
    if summary.count == 0:
        raise InfeasibleError("no solutions to sample from")
    rng = random.Random(seed)
    index = rng.randrange(summary.count) + 1
    return witness(instance, index, threads)
