"""Unramified extensions of Q_p at finite precision, with Frobenius.

A TowerField of level m is the unramified extension of degree r = 2fm. It
contains the degree-f field F and the degree-2f field E; the Frobenius
sigma of F-breve over F used throughout is sigma_p^f, so the conjugation
of E/F is sigma_p^f and tau is sigma_p^(2f).

Elements are stored as p^shift * (sum c_j alpha^j) with the c_j integers,
known modulo p^prec in absolute terms (capped relative precision).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BudgetError, PrecisionError, UsageError
from .finite_field import GF, smallest_irreducible, subfield_embedding

DEFAULT_PRECISION = 32
GUARD_DIGITS = 4
MAX_DEGREE = 32
MAX_ROOT_SEARCH = 10 ** 6


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _vp(n, p):
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class TowerField:
    """Unramified extension of Q_p of degree 2fm at precision N."""

    def __init__(self, p, f, m, N=DEFAULT_PRECISION, guard=GUARD_DIGITS, max_degree=MAX_DEGREE):
        if p == 2 or not _is_prime(p):
            raise UsageError(f"p must be an odd prime, got {p}")
        if f < 1 or m < 1 or N < 1:
            raise UsageError("f, m and N must be positive")
        r = 2 * f * m
        if r > max_degree:
            raise UsageError(f"degree {r} exceeds the configured bound {max_degree}")
        if N <= guard:
            raise UsageError(f"precision {N} does not exceed the guard band {guard}")
        self.p, self.f, self.m, self.r = p, f, m, r
        self.N, self.guard = N, guard
        self.poly = smallest_irreducible(p, r)
        self.residue = GF(p, self.poly)
        self.work = N + guard + 2
        self._red = self._reduction_table()
        self._beta = self._frobenius_root()
        self._frob = {0: None, 1: self._power_matrix(self._beta)}

    # -- descriptors -------------------------------------------------------
    @property
    def q(self):
        return self.p ** self.f

    @property
    def degree(self):
        return self.r

    def descriptor(self):
        return {"p": self.p, "f": self.f, "m": self.m, "degree": self.r,
                "subfield_degrees": [self.f, 2 * self.f], "precision": self.N,
                "poly": list(self.poly)}

    def __repr__(self):
        return f"TowerField(p={self.p}, f={self.f}, m={self.m}, N={self.N})"

    # -- ring arithmetic on coefficient lists -----------------------------
    def _reduction_table(self):
        r, P = self.r, self.poly
        table = {}
        cur = [-c for c in P[:r]]  # x^r
        for i in range(r, 2 * r - 1):
            table[i] = list(cur)
            lead = cur[-1]
            cur = [0] + cur[:-1]
            cur = [c - lead * P[j] for j, c in enumerate(cur)]
        return table

    def _mul(self, a, b, M):
        r = self.r
        if r == 1:
            return [(a[0] * b[0]) % M]
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        out = prod[:r]
        for i in range(r, 2 * r - 1):
            c = prod[i]
            if c:
                for j, t in enumerate(self._red[i]):
                    out[j] += c * t
        return [x % M for x in out]

    def _unit_inverse(self, a, k):
        """Inverse of a unit coefficient vector modulo p^k."""
        p = self.p
        res = self.residue
        code = res.from_coeffs([c % p for c in a])
        if code == 0:
            raise ZeroDivisionError("not a unit")
        y = res.to_coeffs(res.inv(code))
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            M = p ** prec
            ay = self._mul(a, y, M)
            two_minus = [(-c) % M for c in ay]
            two_minus[0] = (two_minus[0] + 2) % M
            y = self._mul(y, two_minus, M)
        return [c % p ** k for c in y]

    def _eval_poly(self, coeffs, x, M):
        acc = [0] * self.r
        for c in reversed(coeffs):
            acc = self._mul(acc, x, M)
            acc[0] = (acc[0] + c) % M
        return acc

    def _hensel_root(self, poly, start):
        """Lift a simple residue root `start` of `poly` to precision `work`."""
        p = self.p
        deriv = [i * c for i, c in enumerate(poly)][1:]
        x = list(start)
        prec = 1
        while prec < self.work:
            prec = min(2 * prec, self.work)
            M = p ** prec
            fx = self._eval_poly(poly, x, M)
            dfx = self._eval_poly(deriv, x, M)
            inv = self._unit_inverse(dfx, prec)
            corr = self._mul(fx, inv, M)
            x = [(u - v) % M for u, v in zip(x, corr)]
        return x

    def _frobenius_root(self):
        res = self.residue
        gen = res.from_coeffs([0, 1]) if self.r > 1 else 0
        start = res.to_coeffs(res.pow(gen, self.p)) if self.r > 1 else [0]
        if self.r == 1:
            return [0]
        root = self._hensel_root(list(self.poly), start)
        M = self.p ** self.work
        if any(self._eval_poly(list(self.poly), root, M)):
            raise PrecisionError("Frobenius lift failed to reach working precision")
        return root

    def _power_matrix(self, x):
        """Columns are coefficient vectors of x^0 .. x^(r-1)."""
        M = self.p ** self.work
        cols, cur = [], [1] + [0] * (self.r - 1)
        for _ in range(self.r):
            cols.append(cur)
            cur = self._mul(cur, x, M)
        return [[cols[j][i] for j in range(self.r)] for i in range(self.r)]

    def _matmul(self, A, B):
        M = self.p ** self.work
        n, k, m = len(A), len(B), len(B[0])
        return [[sum(A[i][t] * B[t][j] for t in range(k)) % M for j in range(m)] for i in range(n)]

    def frobenius_matrix(self, k):
        k %= self.r
        mat = self._frob.get(k)
        if mat is None and k != 0:
            mat = self._frob[1]
            for _ in range(k - 1):
                mat = self._matmul(self._frob[1], mat)
            self._frob[k] = mat
        return mat

    # -- element constructors ---------------------------------------------
    def element(self, coeffs, shift=0, prec=None):
        """p^shift * sum coeffs[j] alpha^j with relative precision N."""
        coeffs = list(coeffs) + [0] * (self.r - len(coeffs))
        if prec is None:
            v = min((_vp(c, self.p) for c in coeffs), default=math.inf)
            prec = shift + (v if v != math.inf else 0) + self.N
        return PadicElement._make(self, coeffs, shift, prec)

    def from_int(self, n, prec=None):
        return self.element([n], 0, prec)

    def zero(self, prec=None):
        return PadicElement._make(self, [0] * self.r, 0, self.N if prec is None else prec)

    def one(self):
        return self.from_int(1)

    def pi_power(self, k):
        return self.element([1], k)

    def gen(self):
        return self.element([0, 1] if self.r > 1 else [0])

    def from_residue(self, code, prec=None):
        """Lift of a residue-field element with digit coefficients."""
        return self.element(self.residue.to_coeffs(code), 0, prec)

    def from_json(self, data):
        p = self.p
        coeffs = [sum(d * p ** i for i, d in enumerate(ds)) for ds in data["digits"]]
        return PadicElement._make(self, coeffs, data["shift"], data["precision"])

    # -- subfields ---------------------------------------------------------
    def e_level(self):
        """The degree-2f field E (level 1) of this tower."""
        return self if self.m == 1 else build_tower(self.p, self.f, 1, self.N, self.guard)

    def e_embedding(self):
        return embedding(self.e_level(), self)

    def trace_zero_unit(self):
        """Deterministic unit t of E with t* = -t: alpha_E - sigma^f(alpha_E)."""
        E = self.e_level()
        a = E.gen()
        t = a - a.frobenius(self.f)
        return self.e_embedding()(t)

    def __eq__(self, other):
        return isinstance(other, TowerField) and (self.p, self.f, self.m, self.N) == (
            other.p, other.f, other.m, other.N)

    def __hash__(self):
        return hash((self.p, self.f, self.m, self.N))


class PadicElement:
    """An element of a TowerField with capped relative precision."""

    __slots__ = ("parent", "coeffs", "shift", "prec")

    @staticmethod
    def _make(parent, coeffs, shift, prec):
        x = object.__new__(PadicElement)
        x.parent = parent
        p = parent.p
        rel = prec - shift
        if rel <= 0:
            x.coeffs, x.shift, x.prec = (0,) * parent.r, prec, prec
            return x
        M = p ** rel
        cs = [c % M for c in coeffs]
        unit = False
        for c in cs:
            if c % p:
                unit = True
                break
        if not unit:
            if not any(cs):
                x.coeffs, x.shift, x.prec = (0,) * parent.r, prec, prec
                return x
            v = min(_vp(c, p) for c in cs if c)
            d = p ** v
            cs = [c // d for c in cs]
            shift += v
            rel -= v
            M //= d
            cs = [c % M for c in cs]
        if rel < parent.guard:
            raise PrecisionError(
                f"relative precision {rel} fell below the guard band {parent.guard}")
        x.coeffs, x.shift, x.prec = tuple(cs), shift, prec
        return x

    # -- basic queries -------------------------------------------------
    def is_zero(self):
        return not any(self.coeffs)

    def valuation(self):
        return math.inf if self.is_zero() else self.shift

    @property
    def relative_precision(self):
        return 0 if self.is_zero() else self.prec - self.shift

    @property
    def coefficients(self):
        """Coefficients of the integral value (requires valuation >= 0)."""
        if self.is_zero():
            return (0,) * self.parent.r
        if self.shift < 0:
            raise ValueError("element is not integral")
        d = self.parent.p ** self.shift
        return tuple(c * d for c in self.coeffs)

    def certainly_at_least(self, k):
        """Certified verdict for val(self) >= k; raises inside the guard band."""
        if not self.is_zero():
            return self.shift >= k
        if self.prec >= k + self.parent.guard:
            return True
        raise PrecisionError(f"cannot decide valuation >= {k} at absolute precision {self.prec}")

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, PadicElement):
            if other.parent is not self.parent and other.parent != self.parent:
                raise TypeError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.parent.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return PadicElement._make(self.parent, other.coeffs, other.shift, prec)
        if other.is_zero():
            return PadicElement._make(self.parent, self.coeffs, self.shift, prec)
        p = self.parent.p
        e = min(self.shift, other.shift)
        d1, d2 = p ** (self.shift - e), p ** (other.shift - e)
        cs = [a * d1 + b * d2 for a, b in zip(self.coeffs, other.coeffs)]
        return PadicElement._make(self.parent, cs, e, prec)

    __radd__ = __add__

    def __neg__(self):
        return PadicElement._make(self.parent, [-c for c in self.coeffs], self.shift, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        v1 = self.prec if self.is_zero() else self.shift
        v2 = other.prec if other.is_zero() else other.shift
        prec = min(self.prec + v2, other.prec + v1)
        if self.is_zero() or other.is_zero():
            return self.parent.zero(prec)
        shift = self.shift + other.shift
        rel = prec - shift
        cs = self.parent._mul(self.coeffs, other.coeffs, self.parent.p ** rel)
        return PadicElement._make(self.parent, cs, shift, prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise PrecisionError("inverting an element indistinguishable from zero")
        rel = self.prec - self.shift
        inv = self.parent._unit_inverse(list(self.coeffs), rel)
        return PadicElement._make(self.parent, inv, -self.shift, -self.shift + rel)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def mul_pi(self, k):
        """Multiply by p^k exactly."""
        if self.is_zero():
            return self.parent.zero(self.prec + k)
        x = object.__new__(PadicElement)
        x.parent, x.coeffs, x.shift, x.prec = self.parent, self.coeffs, self.shift + k, self.prec + k
        return x

    # -- Galois action ---------------------------------------------------
    def frobenius(self, k=1):
        if self.is_zero() or k % self.parent.r == 0:
            return self
        mat = self.parent.frobenius_matrix(k)
        rel = self.prec - self.shift
        M = self.parent.p ** rel
        c = self.coeffs
        cs = [sum(row[j] * c[j] for j in range(len(c))) % M for row in mat]
        return PadicElement._make(self.parent, cs, self.shift, self.prec)

    def conj(self):
        """The conjugation of E/F, i.e. sigma^f."""
        return self.frobenius(self.parent.f)

    def tau(self):
        return self.frobenius(2 * self.parent.f)

    # -- canonical forms -------------------------------------------------
    def residue(self):
        """Image in the residue field (requires valuation >= 0)."""
        if self.is_zero() or self.shift > 0:
            if self.is_zero() and self.prec < 1:
                raise PrecisionError("residue undetermined")
            return 0
        if self.shift < 0:
            raise ValueError("element is not integral")
        return self.parent.residue.from_coeffs([c % self.parent.p for c in self.coeffs])

    def reduce_mod(self, k):
        """Canonical representative modulo p^k (digit coefficients below p^k)."""
        if self.is_zero():
            if self.prec < k:
                raise PrecisionError(f"value modulo p^{k} undetermined at precision {self.prec}")
            return self.parent.zero(k + self.parent.N)
        if self.shift >= k:
            return self.parent.zero(k + self.parent.N)
        if self.prec < k:
            raise PrecisionError(f"value modulo p^{k} undetermined at precision {self.prec}")
        M = self.parent.p ** (k - self.shift)
        cs = [c % M for c in self.coeffs]
        return PadicElement._make(self.parent, cs, self.shift, self.shift + self.parent.N)

    def key(self):
        """Hashable value identity (valuation and unit coefficients)."""
        return None if self.is_zero() else (self.shift, self.coeffs)

    def to_json(self):
        p = self.parent.p
        rel = max(self.prec - self.shift, 0)
        digits = [[(c // p ** i) % p for i in range(rel)] for c in self.coeffs]
        return {"degree": self.parent.r, "precision": self.prec, "shift": self.shift, "digits": digits}

    def __repr__(self):
        if self.is_zero():
            return f"O(p^{self.prec})"
        return f"p^{self.shift}*{list(self.coeffs)} + O(p^{self.prec})"


@lru_cache(maxsize=None)
def build_tower(p, f, m, N=DEFAULT_PRECISION, guard=GUARD_DIGITS, max_degree=MAX_DEGREE):
    """The degree-2fm unramified extension with its degree-f and degree-2f subfields."""
    return TowerField(p, f, m, N, guard, max_degree)


def frobenius(x, k=1):
    return x.frobenius(k)


def valuation(x):
    return x.valuation()


@dataclass(frozen=True)
class _EmbeddingData:
    matrix: tuple
    rows: tuple
    inverse: tuple


class Embedding:
    """Field embedding src -> dst sending alpha_src to a Hensel-lifted root."""

    def __init__(self, src, dst):
        if src.p != dst.p or dst.r % src.r:
            raise UsageError("no embedding between these fields")
        self.src, self.dst = src, dst
        if src is dst:
            self.matrix = None
            return
        if dst.residue.order > MAX_ROOT_SEARCH:
            raise BudgetError("residue field too large for root search")
        src_res = GF(src.p, src.poly)
        root_code = subfield_embedding(src_res, dst.residue)
        start = dst.residue.to_coeffs(root_code)
        root = dst._hensel_root(list(src.poly), start)
        M = dst.p ** dst.work
        cols, cur = [], [1] + [0] * (dst.r - 1)
        for _ in range(src.r):
            cols.append(cur)
            cur = dst._mul(cur, root, M)
        self.matrix = [[cols[j][i] for j in range(src.r)] for i in range(dst.r)]
        self._left_inverse()

    def _left_inverse(self):
        """Pick src.r rows with invertible residue minor and invert it mod p^work."""
        p, k = self.dst.p, self.src.r
        M = p ** self.dst.work
        chosen, basis = [], []
        for i, row in enumerate(self.matrix):
            trial = basis + [[c % p for c in row]]
            if _rank_mod_p(trial, p) == len(trial):
                basis = trial
                chosen.append(i)
            if len(chosen) == k:
                break
        A = [list(self.matrix[i]) for i in chosen]
        self.rows = chosen
        self.inverse = _inverse_mod(A, p, M)

    def __call__(self, x):
        if self.matrix is None:
            return x
        if x.is_zero():
            return self.dst.zero(x.prec)
        M = self.dst.p ** (x.prec - x.shift)
        cs = [sum(row[j] * x.coeffs[j] for j in range(self.src.r)) % M for row in self.matrix]
        return PadicElement._make(self.dst, cs, x.shift, x.prec)

    def preimage(self, y):
        """The src element mapping to y; raises if y is not in the image."""
        if self.matrix is None:
            return y
        if y.is_zero():
            return self.src.zero(y.prec)
        M = self.dst.p ** (y.prec - y.shift)
        sub = [y.coeffs[i] for i in self.rows]
        cs = [sum(row[j] * sub[j] for j in range(len(sub))) % M for row in self.inverse]
        x = PadicElement._make(self.src, cs, y.shift, y.prec)
        if not (self(x) - y).is_zero():
            raise ValueError("element is not in the image of the embedding")
        return x


def _rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c] * inv
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _inverse_mod(A, p, M):
    """Inverse of a square integer matrix that is invertible mod p, modulo M."""
    n = len(A)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] % p)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, M)
        aug[c] = [(x * inv) % M for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] % M:
                f = aug[i][c]
                aug[i] = [(a - f * b) % M for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def embedding(src, dst):
    return Embedding(src, dst)
