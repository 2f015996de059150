"""Numba kernels for counting flags in a finite hermitian space.

Every closed flag S1 <= S2 has K = S2^curlyvee totally isotropic of dim l,
S2 = curlyvee^-1(K) and S1 = K + <v> for a line in S2/K. The kernels walk
all isotropic K in reduced echelon form (pivot set by pivot set, solving the
orthogonality constraints of each new row linearly) and then every line.

For every visited flag they record the four intersection dimensions

    dim S1 n S2^v, dim S1 n S1^v, dim S2 n S2^v, dim S2 n S1^v

which determine the relative position of the flag and its dual flag.
`fast` mode is valid over F_{q^2} only, where curlyvee is an involution:
there S2 = K^v, every line gives a closed flag, and dim S1 n S1^v is
l + [(v, v) = 0]. `full` mode recomputes all duals per flag by linear algebra.
"""

from __future__ import annotations

import numpy as np
from numba import njit, types
from numba.typed import Dict


@njit(cache=True)
def _rref(M, nrows, ncols, add, mul, neg, inv, piv):
    """In-place reduced echelon form of M[:nrows, :ncols]; returns rank, fills piv."""
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        sel = -1
        for i in range(r, nrows):
            if M[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for j in range(ncols):
                tmp = M[r, j]
                M[r, j] = M[sel, j]
                M[sel, j] = tmp
        iv = inv[M[r, c]]
        for j in range(ncols):
            M[r, j] = mul[iv, M[r, j]]
        for i in range(nrows):
            if i != r and M[i, c] != 0:
                f = neg[M[i, c]]
                for j in range(ncols):
                    if M[r, j] != 0:
                        M[i, j] = add[M[i, j], mul[f, M[r, j]]]
        piv[r] = c
        r += 1
    return r


@njit(cache=True)
def _coeff_rows(rows, nrows, g, d, add, mul, frq, out):
    """out[k, i] = sum_j g[i, j] rows[k, j]^q, so that (x, rows[k]) = sum_i x_i out[k, i]."""
    for k in range(nrows):
        for i in range(d):
            acc = 0
            for j in range(d):
                if g[i, j] != 0 and rows[k, j] != 0:
                    acc = add[acc, mul[g[i, j], frq[rows[k, j]]]]
            out[k, i] = acc


@njit(cache=True)
def _self_pair(x, g, d, add, mul, frq, diag):
    acc = 0
    if diag:
        for i in range(d):
            if x[i] != 0:
                acc = add[acc, mul[mul[x[i], g[i, i]], frq[x[i]]]]
    else:
        for i in range(d):
            if x[i] != 0:
                for j in range(d):
                    if x[j] != 0 and g[i, j] != 0:
                        acc = add[acc, mul[mul[x[i], g[i, j]], frq[x[j]]]]
    return acc


@njit(cache=True)
def _annihilator(rows, nrows, g, d, add, mul, neg, inv, frq, out):
    """Basis of {x : (x, rows) = 0} into out; returns its dimension."""
    A = np.zeros((max(nrows, 1), d), np.int64)
    _coeff_rows(rows, nrows, g, d, add, mul, frq, A)
    piv = np.zeros(d, np.int64)
    rk = _rref(A, nrows, d, add, mul, neg, inv, piv) if nrows > 0 else 0
    ispiv = np.zeros(d, np.bool_)
    for k in range(rk):
        ispiv[piv[k]] = True
    n = 0
    for f in range(d):
        if ispiv[f]:
            continue
        for j in range(d):
            out[n, j] = 0
        out[n, f] = 1
        for k in range(rk):
            out[n, piv[k]] = neg[A[k, f]]
        n += 1
    return n


@njit(cache=True)
def _rank_of(rows, nrows, d, add, mul, neg, inv):
    if nrows == 0:
        return 0
    M = rows[:nrows].copy()
    piv = np.zeros(d, np.int64)
    return _rref(M, nrows, d, add, mul, neg, inv, piv)


@njit(cache=True)
def _meet_dim(X, nx, Y, ny, d, add, mul, neg, inv):
    Z = np.zeros((nx + ny + 1, d), np.int64)
    for i in range(nx):
        Z[i] = X[i]
    for i in range(ny):
        Z[nx + i] = Y[i]
    return nx + ny - _rank_of(Z, nx + ny, d, add, mul, neg, inv)


@njit(cache=True)
def _iso_lines(G, dp, add, mul, frq, Q):
    """Number of lines c in F^dp with sum c_i G_ij c_j^q = 0 (brute force)."""
    c = np.zeros(dp, np.int64)
    count = 0
    total = Q ** dp
    for code in range(1, total):
        x = code
        lead = -1
        for i in range(dp):
            c[i] = x % Q
            x //= Q
            if lead < 0 and c[i] != 0:
                lead = c[i]
        if lead != 1:
            continue
        acc = 0
        for i in range(dp):
            if c[i] != 0:
                for j in range(dp):
                    if c[j] != 0 and G[i, j] != 0:
                        acc = add[acc, mul[mul[c[i], G[i, j]], frq[c[j]]]]
        if acc == 0:
            count += 1
    return count


@njit(cache=True)
def _code(a, b, c, e, d):
    return ((a * (d + 1) + b) * (d + 1) + c) * (d + 1) + e


@njit(cache=True)
def _process_fast(K, l, gap, g, d, add, mul, neg, inv, frq, Q, hist, memo, use_memo, diag):
    A = np.zeros((max(l, 1), d), np.int64)
    _coeff_rows(K, l, g, d, add, mul, frq, A)
    pivA = np.zeros(d, np.int64)
    rk = _rref(A, l, d, add, mul, neg, inv, pivA) if l > 0 else 0
    ispiv = np.zeros(d, np.bool_)
    for k in range(rk):
        ispiv[pivA[k]] = True
    freeA = np.zeros(d, np.int64)
    nfree = 0
    for f in range(d):
        if not ispiv[f]:
            freeA[nfree] = f
            nfree += 1
    # K in coordinates of the kernel basis = K restricted to the free columns
    Kf = np.zeros((max(l, 1), nfree), np.int64)
    for k in range(l):
        for j in range(nfree):
            Kf[k, j] = K[k, freeA[j]]
    pivK = np.zeros(nfree, np.int64)
    rkK = _rref(Kf, l, nfree, add, mul, neg, inv, pivK) if l > 0 else 0
    inK = np.zeros(nfree, np.bool_)
    for k in range(rkK):
        inK[pivK[k]] = True
    dp = nfree - rkK
    Wb = np.zeros((dp, d), np.int64)
    w = 0
    for j in range(nfree):
        if inK[j]:
            continue
        f = freeA[j]
        Wb[w, f] = 1
        for k in range(rk):
            Wb[w, pivA[k]] = neg[A[k, f]]
        w += 1
    G = np.zeros((dp, dp), np.int64)
    for i in range(dp):
        for j in range(dp):
            acc = 0
            for a in range(d):
                if Wb[i, a] == 0:
                    continue
                if diag:
                    if Wb[j, a] != 0:
                        acc = add[acc, mul[mul[Wb[i, a], g[a, a]], frq[Wb[j, a]]]]
                else:
                    for b in range(d):
                        if Wb[j, b] != 0 and g[a, b] != 0:
                            acc = add[acc, mul[mul[Wb[i, a], g[a, b]], frq[Wb[j, b]]]]
            G[i, j] = acc
    lines = (Q ** dp - 1) // (Q - 1)
    if use_memo:
        key = 0
        for i in range(dp):
            for j in range(i, dp):
                key = key * Q + G[i, j]
        if key in memo:
            iso = memo[key]
        else:
            iso = _iso_lines(G, dp, add, mul, frq, Q)
            memo[key] = iso
    else:
        iso = _iso_lines(G, dp, add, mul, frq, Q)
    hist[_code(l, l + 1, l, l + gap, d)] += iso
    hist[_code(l, l, l, l + gap, d)] += lines - iso


@njit(cache=True)
def _process_full(K, l, gap, g, d, add, mul, neg, inv, frq, fr2inv, Q, hist):
    # S2 = (Fr^-1 K)^v, so that S2^v = Fr(Fr^-1 K) = K
    Kt = np.zeros((max(l, 1), d), np.int64)
    for k in range(l):
        for j in range(d):
            Kt[k, j] = fr2inv[K[k, j]]
    S2 = np.zeros((d, d), np.int64)
    n2 = _annihilator(Kt, l, g, d, add, mul, neg, inv, frq, S2)
    if n2 != d - l:
        return
    # K must lie in S2
    Z = np.zeros((n2 + l + 1, d), np.int64)
    for i in range(n2):
        Z[i] = S2[i]
    for k in range(l):
        Z[n2 + k] = K[k]
    if _rank_of(Z, n2 + l, d, add, mul, neg, inv) != n2:
        return
    S2v = np.zeros((d, d), np.int64)
    n2v = _annihilator(S2, n2, g, d, add, mul, neg, inv, frq, S2v)
    # complement of K inside S2: reduce S2 rows modulo K
    M = np.zeros((l + n2 + 1, d), np.int64)
    for k in range(l):
        M[k] = K[k]
    piv = np.zeros(d, np.int64)
    rkK = _rref(M, l, d, add, mul, neg, inv, piv) if l > 0 else 0
    comp = np.zeros((n2, d), np.int64)
    nc = 0
    for i in range(n2):
        x = S2[i].copy()
        for k in range(rkK):
            f = x[piv[k]]
            if f != 0:
                nf = neg[f]
                for j in range(d):
                    if M[k, j] != 0:
                        x[j] = add[x[j], mul[nf, M[k, j]]]
        # keep x if independent of K and earlier complement vectors
        for j in range(d):
            comp[nc, j] = x[j]
        T = np.zeros((l + nc + 1, d), np.int64)
        for k in range(l):
            T[k] = K[k]
        for k in range(nc + 1):
            T[l + k] = comp[k]
        if _rank_of(T, l + nc + 1, d, add, mul, neg, inv) == l + nc + 1:
            nc += 1
    dp = nc
    c = np.zeros(dp, np.int64)
    S1 = np.zeros((l + 1, d), np.int64)
    for k in range(l):
        S1[k] = K[k]
    S1v = np.zeros((d, d), np.int64)
    total = Q ** dp
    for code in range(1, total):
        x = code
        lead = -1
        for i in range(dp):
            c[i] = x % Q
            x //= Q
            if lead < 0 and c[i] != 0:
                lead = c[i]
        if lead != 1:
            continue
        for j in range(d):
            acc = 0
            for i in range(dp):
                if c[i] != 0 and comp[i, j] != 0:
                    acc = add[acc, mul[c[i], comp[i, j]]]
            S1[l, j] = acc
        n1v = _annihilator(S1, l + 1, g, d, add, mul, neg, inv, frq, S1v)
        # closed: S2^v <= S1 and S1^v <= S2
        if _meet_dim(S2v, n2v, S1, l + 1, d, add, mul, neg, inv) != n2v:
            continue
        if _meet_dim(S1v, n1v, S2, n2, d, add, mul, neg, inv) != n1v:
            continue
        a = _meet_dim(S1, l + 1, S2v, n2v, d, add, mul, neg, inv)
        b = _meet_dim(S1, l + 1, S1v, n1v, d, add, mul, neg, inv)
        e = _meet_dim(S2, n2, S2v, n2v, d, add, mul, neg, inv)
        f = _meet_dim(S2, n2, S1v, n1v, d, add, mul, neg, inv)
        hist[_code(a, b, e, f, d)] += 1


@njit(cache=True)
def count_kernel(g, diag, d, l, gap, pivsets, add, mul, neg, inv, frq, fr2inv, Q, fast, memo_limit):
    """Histogram of intersection-dimension codes over all closed flags."""
    hist = np.zeros((d + 1) ** 4, np.int64)
    memo = Dict.empty(key_type=types.int64, value_type=types.int64)
    dp = d - 2 * l
    use_memo = fast and (dp * (dp + 1)) // 2 <= memo_limit
    K = np.zeros((max(l, 1), d), np.int64)
    if l == 0:
        if fast:
            _process_fast(K, 0, gap, g, d, add, mul, neg, inv, frq, Q, hist, memo, use_memo, diag)
        else:
            _process_full(K, 0, gap, g, d, add, mul, neg, inv, frq, fr2inv, Q, hist)
        return hist
    nps = pivsets.shape[0]
    coef = np.zeros((l, d), np.int64)
    fcols = np.zeros((l, d), np.int64)
    nf = np.zeros(l, np.int64)
    E = np.zeros((l, l, d + 1), np.int64)
    eqpiv = np.zeros((l, d + 1), np.int64)
    erank = np.zeros(l, np.int64)
    isdep = np.zeros((l, d), np.bool_)
    params = np.zeros((l, d), np.int64)
    npar = np.zeros(l, np.int64)
    total = np.zeros(l, np.int64)
    counter = np.zeros(l, np.int64)
    feasible = np.zeros(l, np.bool_)
    x = np.zeros(d, np.int64)
    for ps in range(nps):
        piv = pivsets[ps]
        ispiv = np.zeros(d, np.bool_)
        for k in range(l):
            ispiv[piv[k]] = True
        r = 0
        setup = True
        while r >= 0:
            if setup:
                setup = False
                n = 0
                for cidx in range(piv[r] + 1, d):
                    if not ispiv[cidx]:
                        fcols[r, n] = cidx
                        n += 1
                nf[r] = n
                # constraints (x, rows[k]) = 0 for k < r, linear in x
                if r > 0:
                    _coeff_rows(K, r, g, d, add, mul, frq, coef)
                    for k in range(r):
                        for j in range(n):
                            E[r, k, j] = coef[k, fcols[r, j]]
                        E[r, k, n] = coef[k, piv[r]]
                    rk = _rref(E[r], r, n + 1, add, mul, neg, inv, eqpiv[r])
                else:
                    rk = 0
                erank[r] = rk
                ok = True
                for k in range(rk):
                    if eqpiv[r, k] == n:
                        ok = False
                feasible[r] = ok
                for j in range(n):
                    isdep[r, j] = False
                for k in range(rk):
                    if eqpiv[r, k] < n:
                        isdep[r, eqpiv[r, k]] = True
                m = 0
                for j in range(n):
                    if not isdep[r, j]:
                        params[r, m] = j
                        m += 1
                npar[r] = m
                total[r] = Q ** m if ok else 0
                counter[r] = 0
            if counter[r] >= total[r]:
                r -= 1
                if r >= 0:
                    counter[r] += 1
                continue
            # build the candidate row
            for j in range(d):
                x[j] = 0
            x[piv[r]] = 1
            code = counter[r]
            n = nf[r]
            for t in range(npar[r]):
                x[fcols[r, params[r, t]]] = code % Q
                code //= Q
            for k in range(erank[r]):
                pc = eqpiv[r, k]
                acc = E[r, k, n]
                for j in range(n):
                    if j != pc and E[r, k, j] != 0 and not isdep[r, j]:
                        acc = add[acc, mul[E[r, k, j], x[fcols[r, j]]]]
                x[fcols[r, pc]] = neg[acc]
            if _self_pair(x, g, d, add, mul, frq, diag) != 0:
                counter[r] += 1
                continue
            for j in range(d):
                K[r, j] = x[j]
            if r == l - 1:
                if fast:
                    _process_fast(K, l, gap, g, d, add, mul, neg, inv, frq, Q, hist, memo, use_memo, diag)
                else:
                    _process_full(K, l, gap, g, d, add, mul, neg, inv, frq, fr2inv, Q, hist)
                counter[r] += 1
            else:
                r += 1
                setup = True
    return hist
