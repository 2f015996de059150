"""Finite hermitian spaces V over F_{q^2}, flag classification, point counts, Weyl data.

The pairing (x, y) = sum x_i g_ij y_j^q is linear in x and q-semilinear in
y. U^curlyvee = {x : (x, U) = 0}; applying it twice gives the q^2-Frobenius
image of U, so it fixes rational subspaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetError, UsageError
from .finite_field import GF, FieldEmbedding, rank, rref, kernel, contains_span, span_key, standard_field


CLOSED, OPEN_ID, OPEN_W, NONE = "closed", "open-id", "open-w", "none"


class FiniteHermitianSpace:
    """V = F^d with a nondegenerate skew-hermitian gram matrix, F of order q^(2m)."""

    def __init__(self, F, gram, q, cls=0):
        self.F = F
        self.d = len(gram)
        self.gram = tuple(tuple(int(x) for x in row) for row in gram)
        self.q = q
        self.cls = cls
        self._frob = [F.pow(a, q) for a in range(F.order)]
        if rank(F, self.gram) != self.d:
            raise UsageError("gram matrix is degenerate")
        g = self.gram
        if any(g[j][i] != F.neg(self._frob[g[i][j]]) for i in range(self.d) for j in range(self.d)):
            raise UsageError("gram matrix is not skew-hermitian")

    def frob(self, a):
        return self._frob[a]

    def pair(self, x, y):
        F, g = self.F, self.gram
        acc = 0
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj and g[i][j]:
                        acc = F.add(acc, F.mul(F.mul(xi, g[i][j]), self._frob[yj]))
        return acc

    def _annihilator_rows(self, rows):
        """Rows c_b with c_b . x = (x, r_b)."""
        F, g, d = self.F, self.gram, self.d
        out = []
        for r in rows:
            fr = [self._frob[a] for a in r]
            c = []
            for i in range(d):
                acc = 0
                for j in range(d):
                    if g[i][j] and fr[j]:
                        acc = F.add(acc, F.mul(g[i][j], fr[j]))
                c.append(acc)
            out.append(c)
        return out

    def curlyvee(self, rows):
        """Row basis (reduced echelon) of {x : (x, U) = 0} for U = span(rows)."""
        if not rows:
            return rref(self.F, [tuple(int(i == j) for j in range(self.d)) for i in range(self.d)])[0]
        ker = kernel(self.F, self._annihilator_rows(rows), self.d)
        return rref(self.F, ker)[0] if ker else []

    def is_isotropic(self, rows):
        return all(self.pair(a, b) == 0 for a in rows for b in rows)

    def isotropic_subspaces(self, max_dim=None):
        """All nonzero totally isotropic subspaces, as reduced echelon row tuples."""
        F, d = self.F, self.d
        if F.order ** d > 10 ** 7:
            raise BudgetError("space too large for isotropic subspace search")
        vectors = []
        for code in range(1, F.order ** d):
            v = [(code // F.order ** i) % F.order for i in range(d)]
            lead = next(x for x in v if x)
            if lead != 1:
                continue
            if self.pair(v, v) == 0:
                vectors.append(tuple(v))
        found = set()
        frontier = set()
        for v in vectors:
            key = span_key(F, [v])
            frontier.add(key)
        limit = d // 2 if max_dim is None else min(max_dim, d // 2)
        level = 1
        while frontier and level <= limit:
            found |= frontier
            nxt = set()
            if level < limit:
                for W in frontier:
                    for v in vectors:
                        if contains_span(F, W, [v]):
                            continue
                        if all(self.pair(v, w) == 0 for w in W):
                            nxt.add(span_key(F, list(W) + [v]))
            frontier = nxt
            level += 1
        return sorted(found, key=lambda W: (len(W), W))


def frobenius_rows(space, rows, times=1):
    out = [tuple(r) for r in rows]
    for _ in range(times):
        out = [tuple(space.frob(space.frob(a)) for a in r) for r in out]
    return out


# -- flags ------------------------------------------------------------------

@dataclass(frozen=True)
class FlagPoint:
    """Nested subspaces S1 <= S2 of V over F_{q^(2m)}, in reduced echelon form."""

    m: int
    s1: tuple
    s2: tuple

    @property
    def dims(self):
        return len(self.s1), len(self.s2)


def flag_dims(d, n, h, cls):
    """(dim S1, dim S2) for the flag pattern, or raise if d has the wrong parity."""
    gap = h if cls == 0 else n - h
    if gap < 0 or d < gap + 1 or (d - gap - 1) % 2:
        raise UsageError(f"no flags of class {cls} for d={d}, n={n}, h={h}")
    l = (d - gap - 1) // 2
    return l + 1, l + 1 + gap


def make_flag(space, s1_rows, s2_rows, m=1):
    F = space.F
    s1 = rref(F, s1_rows)[0]
    s2 = rref(F, list(s2_rows) + list(s1_rows))[0]
    return FlagPoint(m, tuple(s1), tuple(s2))


def flag_membership(fl, space, n, h):
    """Classify a flag as open-id, open-w (both closed) or none."""
    F = space.F
    k1, k2 = flag_dims(space.d, n, h, space.cls)
    if fl.dims != (k1, k2):
        raise UsageError(f"flag dims {fl.dims} do not match the pattern {(k1, k2)}")
    if not contains_span(F, fl.s2, fl.s1):
        raise UsageError("flag is not nested")
    s1v = space.curlyvee(list(fl.s1))
    s2v = space.curlyvee(list(fl.s2))
    closed = contains_span(F, fl.s1, s2v) and contains_span(F, fl.s2, s1v)
    if not closed:
        return NONE
    gap = k2 - k1
    if gap == 0 or contains_span(F, s1v, fl.s1):
        return OPEN_ID
    return OPEN_W


def reference_count(space, n, h):
    """Naive count over all flags (small cases only; used as an oracle)."""
    F, d = space.F, space.d
    k1, k2 = flag_dims(d, n, h, space.cls)
    counts = {CLOSED: 0, OPEN_ID: 0, OPEN_W: 0}
    for s2 in all_subspaces(F, d, k2):
        for sub in all_subspaces(F, k2, k1):
            s1 = [_combine(F, c, s2) for c in sub]
            fl = make_flag(space, s1, s2)
            verdict = flag_membership(fl, space, n, h)
            if verdict != NONE:
                counts[CLOSED] += 1
                counts[verdict] += 1
    return counts



def closed_flags(space, n, h):
    """Every closed flag, generated from K = S2^curlyvee (isotropic) and a line of S2/K."""
    F, d = space.F, space.d
    k1, k2 = flag_dims(d, n, h, space.cls)
    l = k1 - 1
    if l == 0:
        Ks = [()]
    else:
        Ks = [K for K in space.isotropic_subspaces(l) if len(K) == l]
    for K in Ks:
        # S2 is the subspace with S2^curlyvee = K, i.e. the curlyvee of Fr^-1(K)
        S2 = space.curlyvee(_frobenius_inverse_rows(space, K)) if K else rref(F, _identity(d))[0]
        if not contains_span(F, S2, K):
            continue
        extra = [r for r in S2 if not contains_span(F, K, [r])]
        comp = []
        for r in extra:
            if rank(F, list(K) + comp + [r]) > len(K) + len(comp):
                comp.append(r)
        for c in _projective_points(F, len(comp)):
            v = _combine(F, c, comp)
            fl = make_flag(space, list(K) + [v], S2)
            if flag_membership(fl, space, n, h) != NONE:
                yield fl


def _identity(d):
    return [tuple(int(i == j) for j in range(d)) for i in range(d)]


def _frobenius_inverse_rows(space, rows):
    F = space.F
    inv = {space.frob(space.frob(a)): a for a in range(F.order)}
    return [tuple(inv[a] for a in r) for r in rows]


def _projective_points(F, k):
    """Coefficient vectors of the lines of F^k, first nonzero entry 1."""
    Q = F.order
    for code in range(1, Q ** k):
        c = [(code // Q ** i) % Q for i in range(k)]
        if next(x for x in c if x) == 1:
            yield c

def _combine(F, coeffs, rows):
    out = [0] * len(rows[0])
    for c, r in zip(coeffs, rows):
        if c:
            out = [F.add(a, F.mul(c, b)) for a, b in zip(out, r)]
    return tuple(out)


def all_subspaces(F, d, k):
    """Every k-dimensional subspace of F^d in reduced echelon form."""
    Q = F.order
    for pivots in itertools.combinations(range(d), k):
        free = [[c for c in range(p + 1, d) if c not in pivots] for p in pivots]
        nfree = sum(len(f) for f in free)
        for code in range(Q ** nfree):
            rows, pos = [], 0
            for p, fr in zip(pivots, free):
                r = [0] * d
                r[p] = 1
                for c in fr:
                    r[c] = (code // Q ** pos) % Q
                    pos += 1
                rows.append(tuple(r))
            yield tuple(rows)


def gaussian_binomial(d, k, Q):
    num, den = 1, 1
    for i in range(k):
        num *= Q ** (d - i) - 1
        den *= Q ** (i + 1) - 1
    return num // den


# -- standard spaces ----------------------------------------------------------

def residue_trace_zero(F, q):
    """Image of the deterministic trace-zero unit of E in F (code)."""
    E = standard_field(F.p, 2 * _log(q, F.p))
    gen = 0 if E.k == 1 else E.from_coeffs([0, 1])
    t_E = E.sub(gen, E.pow(gen, q))
    if E.k == F.k:
        return t_E
    return FieldEmbedding(E, F)(t_E)


def _log(q, p):
    f = 0
    while q > 1:
        q //= p
        f += 1
    return f


def standard_finite_space(q, d, m=1, cls=0):
    """F_{q^(2m)}^d with gram t*I_d, t the residue of the trace-zero unit."""
    p = _prime_of(q)
    f = _log(q, p)
    F = standard_field(p, 2 * f * m)
    t = residue_trace_zero(F, q)
    gram = [[t if i == j else 0 for j in range(d)] for i in range(d)]
    return FiniteHermitianSpace(F, gram, q, cls)


def _prime_of(q):
    d = 2
    while q % d:
        d += 1
    return d


# -- counting -----------------------------------------------------------------

MAX_WORK = 10 ** 8


def isotropic_count_formula(d, k, q):
    """Number of totally isotropic k-subspaces of a nondegenerate hermitian F_{q^2}^d."""
    num, den = 1, 1
    for i in range(k):
        a, b = d - 2 * i, d - 2 * i - 1
        num *= (q ** a - (-1) ** a) * (q ** b - (-1) ** b)
        den *= q ** (2 * (i + 1)) - 1
    return num // den


def extend_space(space, m):
    """The same gram matrix over F_{q^(2m)}; the pairing keeps its q-power twist."""
    if m == 1:
        return space
    F = space.F
    big = standard_field(F.p, F.k * m)
    phi = FieldEmbedding(F, big)
    gram = [[phi(x) for x in row] for row in space.gram]
    return FiniteHermitianSpace(big, gram, space.q, space.cls)


def _pivot_sets(d, l):
    combos = list(itertools.combinations(range(d), l))
    return np.array(combos, dtype=np.int64).reshape(len(combos), l)


def _memo_entries(Q):
    e = 0
    while Q ** (e + 1) < 2 ** 62:
        e += 1
    return e


@dataclass(frozen=True)
class PointCounts:
    """Closed flags split two ways: by the S1 <= S1^curlyvee rule and by Weyl relative position."""

    closed: int
    open_id: int
    open_w: int
    id_position: int
    w_position: int
    other_position: int
    histogram: tuple = ()

    def to_json(self):
        return {"closed": self.closed, "open_id": self.open_id, "open_w": self.open_w,
                "position": {"id": self.id_position, "w": self.w_position, "other": self.other_position}}


def count_points(space, n, h, m=1, mode="auto", max_work=MAX_WORK):
    """Exhaustive counts of F_{q^(2m)}-rational closed flags in V.

    mode "fast" (m = 1 only) counts lines of K^curlyvee/K by the value of the
    form; "full" recomputes both duals for every flag; "auto" picks fast when
    it applies.
    """
    d, q = space.d, space.q
    k1, k2 = flag_dims(d, n, h, space.cls)
    l, gap = k1 - 1, k2 - k1
    if space.F.order != q * q:
        raise UsageError("count_points expects a space over F_{q^2}; pass the level as m")
    if mode == "auto":
        mode = "fast" if m == 1 else "full"
    if mode == "fast" and m != 1:
        raise UsageError("fast mode needs m = 1")
    S = extend_space(space, m)
    Q = S.F.order
    lines = (Q ** (d - 2 * l) - 1) // (Q - 1)
    if mode == "fast":
        work = isotropic_count_formula(d, l, q)
    else:
        work = gaussian_binomial(d, l, Q) * lines
    if work > max_work:
        raise BudgetError(f"about {work} flags to visit, budget is {max_work}")
    return _count_cached(S.F, S.gram, q, l, gap, mode)


@lru_cache(maxsize=256)
def _count_cached(F, gram, q, l, gap, mode):
    from . import dl_kernels as K
    S = FiniteHermitianSpace(F, gram, q)
    F, d, q = S.F, S.d, S.q
    T = F.tables()
    if T is None:
        raise BudgetError(f"field of order {F.order} is too large for table arithmetic")
    tab = {k: np.ascontiguousarray(T[k], dtype=np.int64) for k in ("add", "mul", "neg", "inv")}
    frq = np.array(S._frob, dtype=np.int64)
    # inverse of x -> x^(q^2) on F_{q^(2m)}
    fr2 = frq[frq]
    fr2inv = np.empty_like(fr2)
    fr2inv[fr2] = np.arange(F.order, dtype=np.int64)
    g = np.array(S.gram, dtype=np.int64)
    diag = bool(np.all(g == np.diag(np.diag(g))))
    hist = K.count_kernel(g, diag, d, l, gap, _pivot_sets(d, l), tab["add"], tab["mul"], tab["neg"],
                          tab["inv"], frq, fr2inv, F.order, mode == "fast", _memo_entries(F.order))
    return _summarise(hist, d, l, gap)


def _decode(code, d):
    out = []
    for _ in range(4):
        out.append(code % (d + 1))
        code //= d + 1
    return tuple(reversed(out))


def _summarise(hist, d, l, gap):
    k1, k2 = l + 1, l + 1 + gap
    id_mat = position_matrix(identity_perm(d), (k1, k2), (d - k2, d - k1))
    w_mat = position_matrix(w_lambda(d, l, gap), (k1, k2), (d - k2, d - k1))
    closed = open_id = open_w = pid = pw = other = 0
    entries = []
    for code in np.nonzero(hist)[0]:
        c = int(hist[code])
        a, b, e, f = _decode(int(code), d)
        entries.append(((a, b, e, f), c))
        closed += c
        if gap == 0 or b == k1:
            open_id += c
        else:
            open_w += c
        mat = ((a, b), (e, f))
        if mat == id_mat:
            pid += c
        elif mat == w_mat:
            pw += c
        else:
            other += c
    return PointCounts(closed, open_id, open_w, pid, pw, other, tuple(sorted(entries)))


# -- Weyl combinatorics -------------------------------------------------------

def identity_perm(d):
    return tuple(range(1, d + 1))


def simple(d, i):
    """The transposition s_i = (i, i+1) as a permutation tuple (1-based images)."""
    w = list(range(1, d + 1))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def compose(u, v):
    """(u v)(b) = u(v(b))."""
    return tuple(u[b - 1] for b in v)


def inverse_perm(w):
    out = [0] * len(w)
    for b, x in enumerate(w, 1):
        out[x - 1] = b
    return tuple(out)


def length(w):
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def parabolic_length(J):
    """Length of the longest element of W_J: runs of k consecutive s_i give k(k+1)/2."""
    total, run, prev = 0, 0, None
    for i in sorted(J):
        run = run + 1 if prev is not None and i == prev + 1 else 1
        total += run
        prev = i
    return total


def position_matrix(w, f_dims, g_dims):
    """dim(F_i n wG_j) = #{b <= g_j : w(b) <= f_i} for standard partial flags."""
    return tuple(tuple(sum(1 for b in range(1, g + 1) if w[b - 1] <= fdim) for g in g_dims) for fdim in f_dims)


@dataclass(frozen=True)
class WeylDatum:
    """A subset I of {1..d-1} (s_i), a permutation w of 1..d; F is conjugation by w0."""

    d: int
    I: frozenset
    w: tuple

    def __post_init__(self):
        if sorted(self.w) != list(range(1, self.d + 1)):
            raise UsageError("w is not a permutation of 1..d")
        if any(not 1 <= i < self.d for i in self.I):
            raise UsageError("I must consist of simple reflections s_1..s_{d-1}")

    def twisted(self, J=None):
        J = self.I if J is None else J
        return frozenset(self.d - i for i in J)


def conjugate_simple(w, i):
    """j with w^-1 s_i w = s_j, or None when that reflection is not simple."""
    wi = inverse_perm(w)
    a, b = sorted((wi[i - 1], wi[i]))
    return a if b == a + 1 else None


def minimal_representative(datum, J=None):
    """Minimal-length element of W_I w W_J (default J = F(I)), by greedy descent."""
    d, I = datum.d, datum.I
    J = datum.twisted() if J is None else J
    w = datum.w
    changed = True
    while changed:
        changed = False
        for i in sorted(I):
            v = compose(simple(d, i), w)
            if length(v) < length(w):
                w, changed = v, True
        for j in sorted(J):
            v = compose(w, simple(d, j))
            if length(v) < length(w):
                w, changed = v, True
    return w


def dimension_weyl(datum):
    """l(w) + l(W_F(I)) - l(W_{I n wF(I)w^-1}) for the minimal representative w."""
    FI = datum.twisted()
    w = minimal_representative(datum)
    meet = {i for i in datum.I if conjugate_simple(w, i) in FI}
    return length(w) + parabolic_length(FI) - parabolic_length(meet)


def support(w):
    """Simple reflections in any reduced word of w: s_i with w({1..i}) != {1..i}."""
    return frozenset(i for i in range(1, len(w)) if max(w[:i]) > i)


def is_irreducible(datum, max_d=10):
    """No proper F-stable J contains I and the support of w."""
    d = datum.d
    if d > max_d:
        raise BudgetError(f"d = {d} exceeds the search limit {max_d}")
    S = frozenset(range(1, d))
    need = datum.I | support(datum.w)
    rest = sorted(S - need)
    for r in range(len(rest)):
        for extra in itertools.combinations(rest, r):
            J = need | frozenset(extra)
            if J != S and datum.twisted(J) == J:
                return False
    return True


def w_lambda(d, l, gap):
    """s_{l+1} s_{l+2} ... s_{l+gap} (identity when gap = 0)."""
    w = identity_perm(d)
    for i in range(l + 1, l + gap + 1):
        w = compose(w, simple(d, i))
    return w


def weyl_datum_for(t, n, h, cls, which="w"):
    """(I_Lambda, w_Lambda) or (I_Lambda, id) for a vertex lattice of type t."""
    k1, k2 = flag_dims(t, n, h, cls)
    l, gap = k1 - 1, k2 - k1
    I = frozenset(range(1, t)) - {k1, k2}
    w = w_lambda(t, l, gap) if which == "w" else identity_perm(t)
    return WeylDatum(t, I, w)


def dimension_formula(t, n, h, cls):
    """(t - 1 - gap)/2 + gap with gap = h (class 0) or n - h (class 1)."""
    gap = h if cls == 0 else n - h
    return (t - 1 - gap) // 2 + gap
