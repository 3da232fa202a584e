# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_kernels_py``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


cdef int64_t _dim_sg_twice(int N, int m, int s, const int* mat, int64_t* kernel_out) noexcept nogil:
    # mat is row-major m x s; returns the undivided sum, kernel size via out param
    cdef int a[8]
    cdef int i, j, al, nz, ssum, torsion2, dp, dm
    cdef int64_t total = 0, kernel = 0
    for i in range(m):
        a[i] = 0
    while True:
        nz = 0
        ssum = 0
        torsion2 = 1
        for j in range(s):
            al = 0
            for i in range(m):
                al += a[i] * mat[i * s + j]
            al = al % N
            if al:
                nz += 1
                ssum += al
                if (2 * al) % N:
                    torsion2 = 0
        if nz == 0:
            kernel += 1
        else:
            dm = ssum // N - 1
            dp = nz - ssum // N - 1
            if torsion2:
                total += dp * (dp + 1)
            else:
                total += dp * dm
        # odometer over (Z/N)^m
        i = m - 1
        while i >= 0:
            a[i] += 1
            if a[i] < N:
                break
            a[i] = 0
            i -= 1
        if i < 0:
            break
    kernel_out[0] = kernel
    return total


def dim_sg_raw(int N, rows):
    cdef int m = len(rows)
    cdef int s = len(rows[0])
    if m > 8:
        raise ValueError("compiled kernel supports at most 8 rows")
    cdef int* mat = <int*> malloc(m * s * sizeof(int))
    cdef int64_t kernel = 0, total
    try:
        for i in range(m):
            for j in range(s):
                mat[i * s + j] = rows[i][j]
        total = _dim_sg_twice(N, m, s, mat, &kernel)
    finally:
        free(mat)
    if total % (2 * kernel):
        raise ArithmeticError("dim S(G) sum not divisible by 2|K|")
    return total // (2 * kernel)


def scan_shard(int N, int m, int s, int first, bint only_sg):
    if m > 8:
        raise ValueError("compiled kernel supports at most 8 rows")
    cdef int ncodes = 1
    cdef int i, j, c, pos, lc, target = s - 3
    cdef int64_t kernel, total
    for i in range(m):
        ncodes *= N
    cdef int* vecs = <int*> malloc(ncodes * m * sizeof(int))
    cdef int* codes = <int*> malloc(s * sizeof(int))
    cdef int* partial = <int*> malloc(s * m * sizeof(int))   # partial[pos*m + i]
    cdef int* mat = <int*> malloc(m * s * sizeof(int))
    hits = []
    try:
        for c in range(ncodes):
            lc = c
            for i in range(m - 1, -1, -1):
                vecs[c * m + i] = lc % N
                lc //= N
        codes[0] = first
        for i in range(m):
            partial[i] = vecs[first * m + i]
        pos = 1
        if s - 1 > 1:
            codes[1] = first - 1
        while pos >= 1:
            if pos == s - 1:
                # partial[(pos-1)*m ..] holds the sum of codes[0..pos-1]
                lc = 0
                for i in range(m):
                    lc = lc * N + ((N - partial[(pos - 1) * m + i] % N) % N)
                if lc != 0 and lc >= codes[pos - 1]:
                    codes[pos] = lc
                    keep = True
                    if only_sg:
                        for j in range(s):
                            for i in range(m):
                                mat[i * s + j] = vecs[codes[j] * m + i]
                        total = _dim_sg_twice(N, m, s, mat, &kernel)
                        keep = total == 2 * kernel * target
                    if keep:
                        hits.append(tuple([codes[j] for j in range(s)]))
                pos -= 1
                continue
            codes[pos] += 1
            if codes[pos] >= ncodes:
                pos -= 1
                continue
            c = codes[pos]
            for i in range(m):
                partial[pos * m + i] = (partial[(pos - 1) * m + i] + vecs[c * m + i]) % N
            pos += 1
            if pos < s - 1:
                codes[pos] = codes[pos - 1] - 1
    finally:
        free(vecs)
        free(codes)
        free(partial)
        free(mat)
    return hits


def hw_terms(exps, int upsilon, int64_t p, int sign):
    cdef int s = len(exps)
    if s == 0:
        return []
    cdef int emax = max(max(exps), 1)
    cdef int64_t* fact = <int64_t*> malloc((emax + 1) * sizeof(int64_t))
    cdef int64_t* inv = <int64_t*> malloc((emax + 1) * sizeof(int64_t))
    cdef int* e = <int*> malloc(s * sizeof(int))
    cdef int* tail = <int*> malloc((s + 1) * sizeof(int))
    cdef int* ls = <int*> malloc(s * sizeof(int))
    cdef int* rem = <int*> malloc((s + 1) * sizeof(int))
    cdef int64_t* coef = <int64_t*> malloc((s + 1) * sizeof(int64_t))
    cdef int i, j, lo
    cdef int64_t c
    out = []
    try:
        fact[0] = 1
        for i in range(1, emax + 1):
            fact[i] = fact[i - 1] * i % p
        inv[emax] = pow(int(fact[emax]), int(p - 2), int(p))
        for i in range(emax, 0, -1):
            inv[i - 1] = inv[i] * i % p
        for j in range(s):
            e[j] = exps[j]
        tail[s] = 0
        for j in range(s - 1, -1, -1):
            tail[j] = tail[j + 1] + e[j]
        if upsilon < 0 or upsilon > tail[0]:
            return out
        rem[0] = upsilon
        coef[0] = ((sign % p) + p) % p
        j = 0
        ls[0] = -1
        lo = rem[0] - tail[1]
        if lo > 0:
            ls[0] = lo - 1
        while j >= 0:
            if j == s - 1:
                if rem[j] <= e[j]:
                    c = coef[j] * (fact[e[j]] * inv[rem[j]] % p * inv[e[j] - rem[j]] % p) % p
                    if c:
                        ls[j] = rem[j]
                        out.append((tuple([ls[i] for i in range(s)]), c))
                j -= 1
                continue
            ls[j] += 1
            if ls[j] > e[j] or ls[j] > rem[j]:
                j -= 1
                continue
            coef[j + 1] = coef[j] * (fact[e[j]] * inv[ls[j]] % p * inv[e[j] - ls[j]] % p) % p
            rem[j + 1] = rem[j] - ls[j]
            j += 1
            if j < s - 1:
                lo = rem[j] - tail[j + 1]
                ls[j] = lo - 1 if lo > 0 else -1
    finally:
        free(fact)
        free(inv)
        free(e)
        free(tail)
        free(ls)
        free(rem)
        free(coef)
    return out
