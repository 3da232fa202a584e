"""Pure-Python kernels. Reference semantics for the compiled ``_ckernels``.

Column codes: a nonzero vector v in (Z/N)^m is encoded as the integer whose
base-N digits (most significant first) are the entries of v, so codes run
over 1 .. N^m - 1.
"""

import itertools


def decode(code, N, m):
    out = [0] * m
    for i in range(m - 1, -1, -1):
        out[i] = code % N
        code //= N
    return out


def encode(vec, N):
    code = 0
    for x in vec:
        code = code * N + x
    return code


def dim_sg_raw(N, rows):
    """dim S(G) from a reduced integer matrix (list of rows).

    Sums over all N^m functionals and divides by twice the presentation
    kernel size, so each character is counted once and each pair {n, -n}
    once.
    """
    m = len(rows)
    s = len(rows[0])
    total = 0
    kernel = 0
    for a in itertools.product(range(N), repeat=m):
        ssum = 0
        nz = 0
        torsion2 = True
        for j in range(s):
            al = 0
            for i in range(m):
                al += a[i] * rows[i][j]
            al %= N
            if al:
                nz += 1
                ssum += al
                if (2 * al) % N:
                    torsion2 = False
        if nz == 0:
            kernel += 1
            continue
        d_minus = ssum // N - 1
        d_plus = nz - ssum // N - 1
        if torsion2:
            total += d_plus * (d_plus + 1)
        else:
            total += d_plus * d_minus
    den = 2 * kernel
    if total % den:
        raise ArithmeticError("dim S(G) sum not divisible by 2|K|")
    return total // den


def scan_shard(N, m, s, first, only_sg):
    """Column multisets whose smallest code is ``first``.

    Each multiset of s nonzero columns summing to zero is produced exactly
    once, as its sorted code tuple. With ``only_sg`` only families with
    dim S(G) = s - 3 are returned.
    """
    vecs = [None] + [decode(c, N, m) for c in range(1, N ** m)]
    ncodes = N ** m
    hits = []
    target = s - 3
    codes = [first] * (s - 1)

    def rec(pos, partial):
        if pos == s - 1:
            last = [(-x) % N for x in partial]
            lc = encode(last, N)
            if lc == 0 or lc < codes[-1]:
                return
            tup = tuple(codes) + (lc,)
            if only_sg:
                rows = [[vecs[c][i] for c in tup] for i in range(m)]
                if dim_sg_raw(N, rows) != target:
                    return
            hits.append(tup)
            return
        for c in range(codes[pos - 1], ncodes):
            codes[pos] = c
            v = vecs[c]
            rec(pos + 1, [x + y for x, y in zip(partial, v)])

    rec(1, list(vecs[first]))
    return hits


def _binom_table(p, emax):
    fact = [1] * (emax + 1)
    for i in range(1, emax + 1):
        fact[i] = fact[i - 1] * i % p
    inv = [1] * (emax + 1)
    inv[emax] = pow(fact[emax], p - 2, p)
    for i in range(emax, 0, -1):
        inv[i - 1] = inv[i] * i % p
    return fact, inv


def hw_terms(exps, upsilon, p, sign):
    """Compositions l of ``upsilon`` with 0 <= l_j <= exps[j].

    Returns ``(l, c)`` pairs with ``c = sign * prod binom(exps[j], l_j) mod p``,
    dropping zero coefficients. Requires every exponent < p.
    """
    s = len(exps)
    emax = max(exps) if exps else 0
    fact, inv = _binom_table(p, max(emax, 1))

    def binom(n, k):
        return fact[n] * inv[k] % p * inv[n - k] % p

    tail = [0] * (s + 1)
    for j in range(s - 1, -1, -1):
        tail[j] = tail[j + 1] + exps[j]
    out = []
    ls = [0] * s

    def rec(j, remaining, coef):
        if j == s - 1:
            if remaining <= exps[j]:
                ls[j] = remaining
                c = coef * binom(exps[j], remaining) % p
                if c:
                    out.append((tuple(ls), c))
            return
        lo = max(0, remaining - tail[j + 1])
        hi = min(exps[j], remaining)
        for l in range(lo, hi + 1):
            ls[j] = l
            rec(j + 1, remaining - l, coef * binom(exps[j], l) % p)

    if s and 0 <= upsilon <= tail[0]:
        rec(0, upsilon, sign % p)
    return out
