# cython: boundscheck=False, wraparound=False, cdivision=True
"""Multimodular determinant kernel for skew-symmetric integer matrices.

Works one word-sized prime at a time: fill the matrix mod p, eliminate
disjoint 2x2 off-diagonal pivot blocks (the gadget-internal matching edges,
which keeps the dense part small), then finish with ordinary Gaussian
elimination.  The caller combines the residues by CRT; determinants of
even-dimensional skew matrices are perfect squares, hence nonnegative, so no
signed reconstruction is needed.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

cdef extern from *:
    """
    typedef unsigned __int128 abp_u128;
    static inline unsigned long long abp_mulmod(unsigned long long a,
                                                unsigned long long b,
                                                unsigned long long p) {
        return (unsigned long long)(((abp_u128)a * b) % p);
    }
    """
    unsigned long long abp_mulmod(unsigned long long a, unsigned long long b,
                                  unsigned long long p) nogil

ctypedef unsigned long long u64


cdef inline u64 submod(u64 a, u64 b, u64 p) nogil:
    # requires a, b < p
    if a >= b:
        return a - b
    return a + (p - b)


cdef inline u64 powmod(u64 base, u64 e, u64 p) nogil:
    cdef u64 r = 1 % p
    base = base % p
    while e:
        if e & 1:
            r = abp_mulmod(r, base, p)
        base = abp_mulmod(base, base, p)
        e >>= 1
    return r


cdef inline u64 invmod(u64 a, u64 p) nogil:
    return powmod(a, p - 2, p)


cdef u64 _gauss_det(int m, u64* M, u64 p, u64 det) noexcept nogil:
    """Eliminate the dense m x m block in place, folding into ``det``."""
    cdef int c, r, j, pr, sign = 1
    cdef u64 piv, winv, f, t
    for c in range(m):
        pr = -1
        for r in range(c, m):
            if M[r * m + c] != 0:
                pr = r
                break
        if pr < 0:
            return 0
        if pr != c:
            for j in range(c, m):
                t = M[c * m + j]
                M[c * m + j] = M[pr * m + j]
                M[pr * m + j] = t
            sign = -sign
        piv = M[c * m + c]
        det = abp_mulmod(det, piv, p)
        winv = invmod(piv, p)
        for r in range(c + 1, m):
            f = M[r * m + c]
            if f == 0:
                continue
            f = abp_mulmod(f, winv, p)
            M[r * m + c] = 0
            for j in range(c + 1, m):
                if M[c * m + j] != 0:
                    M[r * m + j] = submod(M[r * m + j], abp_mulmod(f, M[c * m + j], p), p)
    if sign < 0 and det != 0:
        det = p - det
    return det


cdef u64 _pair_reduce_and_det(int n, u64* M, u64 p, int npairs, int* pa, int* pb,
                              int* alive, int* idx) noexcept nogil:
    """Schur-eliminate the pivot pairs, compact, and eliminate the rest."""
    cdef int i, j, k, a, b, m
    cdef u64 det = 1 % p
    cdef u64 mab, winv, ra, rb, t
    for i in range(n):
        alive[i] = 1
    for k in range(npairs):
        a = pa[k]
        b = pb[k]
        mab = M[a * n + b]
        if mab == 0:
            continue  # fill-in killed the pivot mod p; leave for the dense part
        det = abp_mulmod(det, abp_mulmod(mab, mab, p), p)
        winv = invmod(mab, p)
        for i in range(n):
            if alive[i] == 0 or i == a or i == b:
                continue
            ra = M[i * n + a]
            rb = M[i * n + b]
            if ra == 0 and rb == 0:
                continue
            for j in range(n):
                if alive[j] == 0 or j == a or j == b:
                    continue
                if M[a * n + j] == 0 and M[b * n + j] == 0:
                    continue
                t = submod(abp_mulmod(rb, M[a * n + j], p), abp_mulmod(ra, M[b * n + j], p), p)
                M[i * n + j] = submod(M[i * n + j], abp_mulmod(winv, t, p), p)
        alive[a] = 0
        alive[b] = 0
    m = 0
    for i in range(n):
        if alive[i]:
            idx[m] = i
            m += 1
    if m == 0:
        return det
    # Gather the surviving block to the front; reads never precede writes.
    for i in range(m):
        for j in range(m):
            M[i * m + j] = M[idx[i] * n + idx[j]]
    return _gauss_det(m, M, p, det)


def det_skew_batch(int n, edges_i, edges_j, edges_exp, edges_sign,
                   pairs_a, pairs_b, s_values, nprimes, primes):
    """Residues of det(D(s)) for each requested evaluation point.

    The matrix is given structurally: entry (i, j) with i < j holds
    sign * s**exp, and (j, i) its negation.  Returns a list with one list of
    ``nprimes[si]`` residues per evaluation point, aligned with ``primes``.
    """
    cdef int ne = len(edges_i)
    cdef int npairs = len(pairs_a)
    cdef int ns = len(s_values)
    cdef int nprimes_max = 0
    cdef int k, si, pi, i, j
    for si in range(ns):
        if <int>nprimes[si] > nprimes_max:
            nprimes_max = <int>nprimes[si]
    if nprimes_max > len(primes):
        raise ValueError("not enough primes supplied")

    cdef int* ei = <int*>malloc(max(ne, 1) * sizeof(int))
    cdef int* ej = <int*>malloc(max(ne, 1) * sizeof(int))
    cdef long long* ex = <long long*>malloc(max(ne, 1) * sizeof(long long))
    cdef signed char* sg = <signed char*>malloc(max(ne, 1) * sizeof(signed char))
    cdef int* pa = <int*>malloc(max(npairs, 1) * sizeof(int))
    cdef int* pb = <int*>malloc(max(npairs, 1) * sizeof(int))
    cdef u64* svals = <u64*>malloc(max(ns, 1) * sizeof(u64))
    cdef int* nprim = <int*>malloc(max(ns, 1) * sizeof(int))
    cdef u64* prim = <u64*>malloc(max(nprimes_max, 1) * sizeof(u64))
    cdef u64* M = <u64*>malloc(max(n * n, 1) * sizeof(u64))
    cdef int* alive = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int* idx = <int*>malloc(max(n, 1) * sizeof(int))
    cdef u64* out = <u64*>malloc(max(ns * nprimes_max, 1) * sizeof(u64))

    try:
        if (ei == NULL or ej == NULL or ex == NULL or sg == NULL or pa == NULL
                or pb == NULL or svals == NULL or nprim == NULL or prim == NULL
                or M == NULL or alive == NULL or idx == NULL or out == NULL):
            raise MemoryError()
        for k in range(ne):
            ei[k] = edges_i[k]
            ej[k] = edges_j[k]
            ex[k] = edges_exp[k]
            sg[k] = edges_sign[k]
        for k in range(npairs):
            pa[k] = pairs_a[k]
            pb[k] = pairs_b[k]
        for si in range(ns):
            svals[si] = s_values[si]
            nprim[si] = nprimes[si]
        for pi in range(nprimes_max):
            prim[pi] = primes[pi]

        with nogil:
            for si in range(ns):
                _batch_point(n, ne, ei, ej, ex, sg, npairs, pa, pb,
                             svals[si], nprim[si], prim, M, alive, idx,
                             out + si * nprimes_max)

        result = []
        for si in range(ns):
            result.append([out[si * nprimes_max + pi] for pi in range(nprim[si])])
        return result
    finally:
        free(ei); free(ej); free(ex); free(sg); free(pa); free(pb)
        free(svals); free(nprim); free(prim); free(M); free(alive); free(idx); free(out)


cdef void _batch_point(int n, int ne, int* ei, int* ej, long long* ex, signed char* sg,
                       int npairs, int* pa, int* pb, u64 s, int np, u64* prim,
                       u64* M, int* alive, int* idx, u64* out) noexcept nogil:
    cdef int pi
    for pi in range(np):
        _fill_and_det(n, ne, ei, ej, ex, sg, npairs, pa, pb,
                      s % prim[pi], prim[pi], M, alive, idx, out + pi)


def det_skew_residues(int n, edges_i, edges_j, edges_exp, edges_sign,
                      pairs_a, pairs_b, s_mods, primes):
    """Residues of det(D(s)) at one point given as per-prime residues of s.

    Used for evaluation points too large for a machine word.
    """
    cdef int ne = len(edges_i)
    cdef int npairs = len(pairs_a)
    cdef int np = len(s_mods)
    cdef int k, pi
    if np > len(primes):
        raise ValueError("not enough primes supplied")
    cdef int* ei = <int*>malloc(max(ne, 1) * sizeof(int))
    cdef int* ej = <int*>malloc(max(ne, 1) * sizeof(int))
    cdef long long* ex = <long long*>malloc(max(ne, 1) * sizeof(long long))
    cdef signed char* sg = <signed char*>malloc(max(ne, 1) * sizeof(signed char))
    cdef int* pa = <int*>malloc(max(npairs, 1) * sizeof(int))
    cdef int* pb = <int*>malloc(max(npairs, 1) * sizeof(int))
    cdef u64* smod = <u64*>malloc(max(np, 1) * sizeof(u64))
    cdef u64* prim = <u64*>malloc(max(np, 1) * sizeof(u64))
    cdef u64* M = <u64*>malloc(max(n * n, 1) * sizeof(u64))
    cdef int* alive = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int* idx = <int*>malloc(max(n, 1) * sizeof(int))
    cdef u64* out = <u64*>malloc(max(np, 1) * sizeof(u64))
    try:
        if (ei == NULL or ej == NULL or ex == NULL or sg == NULL or pa == NULL
                or pb == NULL or smod == NULL or prim == NULL or M == NULL
                or alive == NULL or idx == NULL or out == NULL):
            raise MemoryError()
        for k in range(ne):
            ei[k] = edges_i[k]
            ej[k] = edges_j[k]
            ex[k] = edges_exp[k]
            sg[k] = edges_sign[k]
        for k in range(npairs):
            pa[k] = pairs_a[k]
            pb[k] = pairs_b[k]
        for pi in range(np):
            smod[pi] = s_mods[pi]
            prim[pi] = primes[pi]
        with nogil:
            for pi in range(np):
                _fill_and_det(n, ne, ei, ej, ex, sg, npairs, pa, pb,
                              smod[pi], prim[pi], M, alive, idx, out + pi)
        return [out[pi] for pi in range(np)]
    finally:
        free(ei); free(ej); free(ex); free(sg); free(pa); free(pb)
        free(smod); free(prim); free(M); free(alive); free(idx); free(out)


cdef void _fill_and_det(int n, int ne, int* ei, int* ej, long long* ex, signed char* sg,
                        int npairs, int* pa, int* pb, u64 smod, u64 p,
                        u64* M, int* alive, int* idx, u64* out) noexcept nogil:
    cdef int k
    cdef u64 w
    memset(M, 0, n * n * sizeof(u64))
    for k in range(ne):
        if ex[k] == 0:
            w = 1 % p
        elif smod == 0:
            w = 0
        else:
            w = powmod(smod, <u64>ex[k], p)
        if sg[k] < 0:
            w = (p - w) % p
        M[ei[k] * n + ej[k]] = w
        M[ej[k] * n + ei[k]] = (p - w) % p
    out[0] = _pair_reduce_and_det(n, M, p, npairs, pa, pb, alive, idx)


def det_skew_dense(rows, primes, int nprimes):
    """Residues of the determinant of a dense skew integer matrix.

    Entries must fit in a signed 64-bit word.
    """
    cdef int n = len(rows)
    cdef int i, j, pi
    cdef u64 p, w
    cdef long long v
    if nprimes > len(primes):
        raise ValueError("not enough primes supplied")
    cdef long long* A = <long long*>malloc(max(n * n, 1) * sizeof(long long))
    cdef u64* M = <u64*>malloc(max(n * n, 1) * sizeof(u64))
    cdef u64* prim = <u64*>malloc(max(nprimes, 1) * sizeof(u64))
    cdef u64* out = <u64*>malloc(max(nprimes, 1) * sizeof(u64))
    cdef int* alive = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int* idx = <int*>malloc(max(n, 1) * sizeof(int))
    try:
        if A == NULL or M == NULL or prim == NULL or out == NULL or alive == NULL or idx == NULL:
            raise MemoryError()
        for i in range(n):
            row = rows[i]
            for j in range(n):
                A[i * n + j] = row[j]
        for pi in range(nprimes):
            prim[pi] = primes[pi]
        with nogil:
            for pi in range(nprimes):
                p = prim[pi]
                for i in range(n):
                    for j in range(n):
                        v = A[i * n + j]
                        if v >= 0:
                            M[i * n + j] = (<u64>v) % p
                        else:
                            M[i * n + j] = (p - ((<u64>(-v)) % p)) % p
                out[pi] = _pair_reduce_and_det(n, M, p, 0, idx, idx, alive, idx)
        return [out[pi] for pi in range(nprimes)]
    finally:
        free(A); free(M); free(prim); free(out); free(alive); free(idx)
