"""Finite fields F_p[x]/(P) with integer-coded elements, plus small linear algebra.

An element is an int in [0, p^k) whose base-p digits are its coefficients in
the power basis of x. Fields of order up to TABLE_LIMIT carry numpy
addition/multiplication tables that the enumeration kernels consume.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

TABLE_LIMIT = 1024


# -- polynomials over F_p, coefficient lists low -> high ----------------------

def poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return poly_trim(out)


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_trim([c % p for c in out])


def poly_divmod(a, b, p):
    a = poly_trim([c % p for c in a])
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = poly_trim(a)
    return poly_trim(q), a


def poly_mod(a, m, p):
    return poly_divmod(a, m, p)[1]


def poly_gcd(a, b, p):
    a, b = poly_trim([c % p for c in a]), poly_trim([c % p for c in b])
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def poly_inverse_mod(a, m, p):
    """b with a*b = 1 mod m, by the extended Euclidean algorithm."""
    r0, r1 = poly_trim(list(m)), poly_trim([c % p for c in a])
    s0, s1 = [], [1]
    while r1:
        q, r = poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
    if len(r0) != 1:
        raise ZeroDivisionError("not invertible modulo m")
    c = pow(r0[0], -1, p)
    return poly_trim([(x * c) % p for x in s0])


def poly_powmod(a, e, m, p):
    result = [1]
    base = poly_mod(a, m, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f, p):
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    f = poly_trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    x = [0, 1]
    for d in _prime_factors(n):
        h = poly_sub(poly_powmod(x, p ** (n // d), f, p), x, p)
        if len(poly_gcd(h, f, p)) != 1:
            return False
    return not poly_sub(poly_powmod(x, p ** n, f, p), x, p)


@lru_cache(maxsize=None)
def smallest_irreducible(p, k):
    """Lexicographically smallest monic irreducible of degree k over F_p.

    Candidates x^k + c_{k-1}x^{k-1} + ... + c_0 are ordered by the tuple
    (c_{k-1}, ..., c_0), i.e. by the integer sum c_i p^i.
    """
    if k == 1:
        return (0, 1)
    for code in range(p ** k):
        coeffs = [(code // p ** i) % p for i in range(k)] + [1]
        if coeffs[0] == 0:
            continue
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


# -- the field ---------------------------------------------------------------

class GF:
    """The finite field F_p[x]/(poly) with elements coded as ints."""

    def __init__(self, p, poly=None, k=None):
        if poly is None:
            poly = smallest_irreducible(p, k)
        self.p = p
        self.poly = tuple(int(c) % p for c in poly)
        self.k = len(self.poly) - 1
        self.order = p ** self.k
        self._tables = None
        self._lists = None

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.poly) == (other.p, other.poly)

    def __hash__(self):
        return hash((self.p, self.poly))

    # coefficient coding
    def to_coeffs(self, a):
        p = self.p
        return [(a // p ** i) % p for i in range(self.k)]

    def from_coeffs(self, cs):
        p = self.p
        cs = poly_mod(list(cs), list(self.poly), p) if len(cs) > self.k else [c % p for c in cs]
        return sum(c * p ** i for i, c in enumerate(cs))

    def elements(self):
        return range(self.order)

    # arithmetic (table-backed when available)
    def add(self, a, b):
        t = self._fast()
        if t is not None:
            return t["add"][a][b]
        p = self.p
        return self.from_coeffs([(x + y) % p for x, y in zip(self.to_coeffs(a), self.to_coeffs(b))])

    def neg(self, a):
        t = self._fast()
        if t is not None:
            return t["neg"][a]
        return self.from_coeffs([(-x) % self.p for x in self.to_coeffs(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        t = self._fast()
        if t is not None:
            return t["mul"][a][b]
        prod = poly_mul(poly_trim(self.to_coeffs(a)), poly_trim(self.to_coeffs(b)), self.p)
        return self.from_coeffs(poly_mod(prod, list(self.poly), self.p))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        t = self._fast()
        if t is not None:
            return t["inv"][a]
        return self.from_coeffs(poly_inverse_mod(poly_trim(self.to_coeffs(a)), list(self.poly), self.p))

    def frob(self, a, e=1):
        """a -> a^(p^e)."""
        return self.pow(a, self.p ** (e % self.k)) if self.k else a

    def _fast(self):
        if self._lists is None:
            t = self.tables()
            if t is None:
                return None
            self._lists = {k: t[k].tolist() for k in ("add", "mul", "neg", "inv")}
        return self._lists

    def tables(self):
        if self.order > TABLE_LIMIT:
            return None
        if self._tables is None:
            self._tables = _build_tables(self)
        return self._tables


def _build_tables(F):
    p, k, Q = F.p, F.k, F.order
    codes = np.arange(Q)
    digits = np.stack([(codes // p ** i) % p for i in range(k)], axis=1)
    weights = np.array([p ** i for i in range(k)])
    add = (((digits[:, None, :] + digits[None, :, :]) % p) @ weights).astype(np.int32)
    neg = (((-digits) % p) @ weights).astype(np.int32)
    # slow-path multiplication to find exp/log tables
    mul_slow = lambda a, b: F.from_coeffs(
        poly_mod(poly_mul(poly_trim(F.to_coeffs(a)), poly_trim(F.to_coeffs(b)), p), list(F.poly), p))
    gen = None
    for g in range(2, Q):
        x, n = 1, 0
        while True:
            x = mul_slow(x, g)
            n += 1
            if x == 1 or n > Q:
                break
        if n == Q - 1:
            gen = g
            break
    exp = np.zeros(2 * (Q - 1), dtype=np.int64)
    log = np.zeros(Q, dtype=np.int64)
    x = 1
    for i in range(Q - 1):
        exp[i] = x
        log[x] = i
        x = mul_slow(x, gen)
    exp[Q - 1:] = exp[: Q - 1]
    la = log[:, None] + log[None, :]
    mul = exp[la].astype(np.int32)
    mul[0, :] = 0
    mul[:, 0] = 0
    inv = np.zeros(Q, dtype=np.int32)
    for a in range(1, Q):
        inv[a] = exp[(Q - 1 - log[a]) % (Q - 1)]
    return {"add": add, "neg": neg, "mul": mul, "inv": inv, "exp": exp, "log": log}


@lru_cache(maxsize=None)
def standard_field(p, k):
    return GF(p, smallest_irreducible(p, k))


def subfield_embedding(small, big):
    """Image of the generator of `small` inside `big` (smallest root by code)."""
    if big.k % small.k:
        raise ValueError("degree does not divide")
    poly = small.poly
    for a in big.elements():
        acc = 0
        for c in reversed(poly):
            acc = big.add(big.mul(acc, a), c)
        if acc == 0:
            return a
    raise ValueError("no root found")


class FieldEmbedding:
    """Field map small -> big determined by the image of the generator."""

    def __init__(self, small, big, root=None):
        self.small, self.big = small, big
        self.root = subfield_embedding(small, big) if root is None else root
        self._powers = [big.pow(self.root, i) for i in range(small.k)]
        self._cache = {}

    def __call__(self, a):
        v = self._cache.get(a)
        if v is None:
            v = 0
            for c, r in zip(self.small.to_coeffs(a), self._powers):
                if c:
                    v = self.big.add(v, self.big.mul(c, r))
            self._cache[a] = v
        return v


# -- linear algebra over GF (row vectors, small sizes) ----------------------

def rref(F, rows):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots = []
    if not rows:
        return [], []
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(x) for x in rows[:r]], pivots


def span_key(F, rows):
    """Canonical hashable form of the row span."""
    return tuple(rref(F, rows)[0])


def rank(F, rows):
    return len(rref(F, rows)[0])


def kernel(F, rows, ncols):
    """Basis of {x : sum_j rows[i][j] x_j = 0 for all i} as row vectors."""
    red, piv = rref(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in zip(red, piv):
            v[pc] = F.neg(r[fc])
        basis.append(tuple(v))
    return basis


def contains_span(F, big_rows, small_rows):
    """True iff span(small_rows) is contained in span(big_rows)."""
    if not small_rows:
        return True
    return rank(F, list(big_rows) + list(small_rows)) == rank(F, big_rows)


def intersect_spans(F, a_rows, b_rows, ncols):
    """Row basis of span(a) intersect span(b), via annihilators."""
    both = kernel(F, a_rows, ncols) + kernel(F, b_rows, ncols)
    return kernel(F, both, ncols)
