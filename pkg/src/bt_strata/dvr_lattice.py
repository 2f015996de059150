"""Full-rank lattices over the valuation ring of a TowerField.

A lattice is stored by its column Hermite form: the basis matrix is upper
triangular, column j has diagonal entry p^k_j, and the entry in row i < j
is reduced modulo p^k_i to its digit representative.
"""

from __future__ import annotations

from .errors import PrecisionError, UsageError


class RankDeficientError(UsageError):
    pass


class NotContainedError(UsageError):
    pass


class Lattice:
    __slots__ = ("field", "n", "cols", "exps", "_key")

    def __init__(self, field, cols, exps):
        self.field = field
        self.n = len(exps)
        self.cols = tuple(tuple(c) for c in cols)
        self.exps = tuple(exps)
        self._key = None

    # -- identity ------------------------------------------------------------
    def key(self):
        if self._key is None:
            entries = tuple(self.cols[j][i].key() for j in range(self.n) for i in range(j))
            self._key = (self.n, self.exps, entries)
        return self._key

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __repr__(self):
        return f"Lattice({self.compact()})"

    @property
    def basis(self):
        """Row-major basis matrix (columns are the generators)."""
        return [[self.cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def det_valuation(self):
        return sum(self.exps)

    def compact(self):
        """Diagonal exponents followed by the nonzero off-diagonal digits."""
        p = self.field.p
        parts = []
        for j in range(self.n):
            for i in range(j):
                x = self.cols[j][i]
                if not x.is_zero():
                    digits = [[(c // p ** d) % p for d in range(self.exps[i] - x.shift)] for c in x.coeffs]
                    parts.append(f"{i}{j}@{x.shift}:{digits}")
        return " ".join([str(list(self.exps))] + parts)

    def to_json(self):
        return {"field": self.field.descriptor(), "dimension": self.n,
                "exponents": list(self.exps),
                "basis": [[x.to_json() for x in col] for col in self.cols]}

    @classmethod
    def from_json(cls, field, data):
        cols = [[field.from_json(x) for x in col] for col in data["basis"]]
        return canonicalize(field, cols)

    # -- constructors ----------------------------------------------------------
    @classmethod
    def standard(cls, field, n):
        return diagonal(field, [0] * n)


def sort_key(L):
    return (L.exps, tuple(_entry_sort(L.cols[j][i]) for j in range(L.n) for i in range(j)))


def _entry_sort(x):
    return (0,) if x.is_zero() else (1, x.shift, x.coeffs)


def diagonal(field, exps):
    n = len(exps)
    cols = []
    for j, k in enumerate(exps):
        cols.append([field.pi_power(k) if i == j else field.zero(exps[i] + field.N) for i in range(n)])
    return Lattice(field, cols, exps)


def _scale_col(col, c):
    return [x * c for x in col]


def canonicalize(field, generators):
    """Column Hermite form of the lattice spanned by the given column vectors.

    Pivots have minimal valuation in their row, ties going to the lowest
    generator index, so the output is platform independent.
    """
    gens = [list(g) for g in generators]
    if not gens:
        raise RankDeficientError("no generators")
    n = len(gens[0])
    remaining = list(range(len(gens)))
    result = [None] * n
    exps = [0] * n
    for i in reversed(range(n)):
        best, bestv = None, None
        for j in remaining:
            x = gens[j][i]
            if not x.is_zero() and (best is None or x.shift < bestv):
                best, bestv = j, x.shift
        if best is None:
            if max((gens[j][i].prec for j in remaining), default=field.N) < field.N:
                raise PrecisionError("pivot indistinguishable from zero at the working precision")
            raise RankDeficientError("generators do not span a full-rank lattice")
        piv = gens[best]
        factor = field.pi_power(bestv) / piv[i]
        piv = _scale_col(piv, factor)
        piv[i] = field.pi_power(bestv)
        remaining.remove(best)
        for j in remaining:
            x = gens[j][i]
            if x.is_zero():
                continue
            c = x.mul_pi(-bestv)
            gens[j] = [a - c * b for a, b in zip(gens[j], piv)]
        result[i] = piv
        exps[i] = bestv
    for j in range(n):
        col = result[j]
        for i in range(n):
            if i > j:
                col[i] = field.zero(exps[i] + field.N)
        for i in range(j - 1, -1, -1):
            x = col[i]
            r = x.reduce_mod(exps[i])
            qt = (x - r).mul_pi(-exps[i])
            if not qt.is_zero():
                other = result[i]
                for t in range(i):
                    col[t] = col[t] - qt * other[t]
            col[i] = r
    return Lattice(field, result, exps)


def from_rows(field, rows):
    """Lattice spanned by the columns of a row-major matrix."""
    return canonicalize(field, [list(c) for c in zip(*rows)])


def lattice_sum(L1, L2):
    _check(L1, L2)
    return canonicalize(L1.field, list(L1.cols) + list(L2.cols))


def scale(L, k):
    cols = [[x.mul_pi(k) for x in col] for col in L.cols]
    return Lattice(L.field, cols, [e + k for e in L.exps])


def standard_dual(L):
    """Dual under the standard bilinear pairing sum x_i y_i: columns of (B^-1)^T."""
    inv = upper_inverse(L)
    rows_of_inv_T = [[inv[j][i] for j in range(L.n)] for i in range(L.n)]
    return from_rows(L.field, rows_of_inv_T)


def intersect(L1, L2):
    _check(L1, L2)
    return standard_dual(lattice_sum(standard_dual(L1), standard_dual(L2)))


def upper_inverse(L):
    """Row-major inverse of the (upper triangular) basis matrix."""
    n, field = L.n, L.field
    B = L.basis
    inv = [[field.zero(3 * field.N) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        inv[i][i] = field.pi_power(-L.exps[i])
    for j in range(n):
        for i in range(j - 1, -1, -1):
            acc = B[i][i + 1] * inv[i + 1][j]
            for t in range(i + 2, j + 1):
                acc = acc + B[i][t] * inv[t][j]
            inv[i][j] = -(acc.mul_pi(-L.exps[i]))
    return inv


def coordinates(L, v):
    """Coordinates of v in the Hermite basis (field elements)."""
    n = L.n
    v = list(v)
    coords = [None] * n
    for i in reversed(range(n)):
        c = v[i].mul_pi(-L.exps[i])
        coords[i] = c
        if not c.is_zero():
            col = L.cols[i]
            for t in range(i):
                if not col[t].is_zero():
                    v[t] = v[t] - c * col[t]
    return coords


def contains(L, v):
    """True iff the vector v lies in L; undecidable verdicts raise."""
    if len(v) != L.n:
        raise UsageError("dimension mismatch")
    return all(c.certainly_at_least(0) for c in coordinates(L, v))


def is_sublattice(small, big):
    _check(small, big)
    if small.det_valuation() < big.det_valuation():
        return False
    return all(contains(big, col) for col in small.cols)


def index(small, big):
    """Length of big/small; raises if small is not contained in big."""
    if not is_sublattice(small, big):
        raise NotContainedError("first lattice is not contained in the second")
    return small.det_valuation() - big.det_valuation()


def elementary_divisors(small, big):
    """Valuations of the elementary divisors of small inside big (Smith form)."""
    if not is_sublattice(small, big):
        raise NotContainedError("first lattice is not contained in the second")
    M = [coordinates(big, col) for col in small.cols]  # M[j] = column j
    rows = [[M[j][i] for j in range(small.n)] for i in range(small.n)]
    return snf_valuations(rows)


def snf_valuations(rows):
    """Smith normal form valuations of a square matrix (full pivoting)."""
    A = [list(r) for r in rows]
    n = len(A)
    out = []
    for s in range(n):
        best = None
        for i in range(s, n):
            for j in range(s, n):
                x = A[i][j]
                if not x.is_zero() and (best is None or x.shift < best[0]):
                    best = (x.shift, i, j)
        if best is None:
            raise RankDeficientError("singular matrix")
        _, bi, bj = best
        A[s], A[bi] = A[bi], A[s]
        for r in A:
            r[s], r[bj] = r[bj], r[s]
        piv = A[s][s]
        out.append(piv.shift)
        inv = piv.inverse()
        for i in range(s + 1, n):
            if not A[i][s].is_zero():
                c = A[i][s] * inv
                A[i] = [a - c * b for a, b in zip(A[i], A[s])]
        for j in range(s + 1, n):
            if not A[s][j].is_zero():
                c = A[s][j] * inv
                for i in range(s, n):
                    A[i][j] = A[i][j] - c * A[i][s]
    return sorted(out)


def mat_inverse(rows):
    """Inverse of a square matrix over the field (valuation-minimal pivoting)."""
    n = len(rows)
    field = rows[0][0].parent
    aug = [list(r) + [field.one() if i == j else field.zero() for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        best = None
        for i in range(c, n):
            x = aug[i][c]
            if not x.is_zero() and (best is None or x.shift < aug[best][c].shift):
                best = i
        if best is None:
            raise RankDeficientError("singular matrix")
        aug[c], aug[best] = aug[best], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and not aug[i][c].is_zero():
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


def apply_frobenius(L, k):
    """The lattice sigma^k(L), acting coordinatewise."""
    return canonicalize(L.field, [[x.frobenius(k) for x in col] for col in L.cols])


def tau(L):
    return apply_frobenius(L, 2 * L.field.f)


def is_tau_invariant(L):
    return tau(L) == L


def embed(L, target):
    """Base change of an E-level lattice to a higher level field."""
    if L.field is target:
        return L
    phi = target.e_embedding() if L.field == target.e_level() else None
    if phi is None:
        raise UsageError("lattice field does not embed in target")
    return canonicalize(target, [[phi(x) for x in col] for col in L.cols])


def descend(L):
    """The E-level lattice whose base change is the tau-invariant lattice L."""
    field = L.field
    E = field.e_level()
    if E is field:
        return L
    phi = field.e_embedding()
    m = field.m
    gens = []
    basis = [field.element([int(i == j) for j in range(field.r)]) for i in range(field.r)]
    two_f = 2 * field.f
    for col in L.cols:
        for b in basis:
            v = [b * x for x in col]
            tr = list(v)
            cur = v
            for _ in range(m - 1):
                cur = [x.frobenius(two_f) for x in cur]
                tr = [a + c for a, c in zip(tr, cur)]
            gens.append([phi.preimage(x) for x in tr])
    return canonicalize(E, gens)


def _check(L1, L2):
    if L1.field != L2.field or L1.n != L2.n:
        raise UsageError("lattices live in different spaces")


def random_lattice(field, n, rng, spread=2, digits=2):
    """A seeded random full-rank lattice with Hermite exponents roughly in [-spread, spread]."""
    p = field.p
    while True:
        gens = []
        for j in range(n):
            k = rng.randint(-spread, spread)
            col = []
            for i in range(n):
                cs = [rng.randrange(p ** digits) for _ in range(field.r)]
                if i == j:
                    cs[0] = cs[0] * p + 1  # keep the diagonal a unit
                col.append(field.element(cs, k))
            gens.append(col)
        try:
            return canonicalize(field, gens)
        except RankDeficientError:
            continue
