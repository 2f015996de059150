"""Skew-hermitian spaces over a tower field, lattice duality and vertex lattices.

The form is {x, y} = sum_ij x_i G_ij sigma^f(y_j) with G^* = -G^T. The dual
of a lattice A is {x : {x, A} in O}, which equals (G^T)^-1 applied to the
standard dual of sigma^f(A).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from . import dvr_lattice as dl
from .dl_finite import FiniteHermitianSpace
from .errors import BudgetError, UsageError
from .finite_field import rref

TI, TJ = "tI_n", "tJ_n"
NOT_VERTEX = "not a vertex lattice"
MAX_WINDOW_LATTICES = 20000


@dataclass(frozen=True, eq=False)
class HermitianSpace:
    field: object
    n: int
    gram: tuple
    kind: str = "custom"

    @property
    def diagonal(self):
        return all(self.gram[i][j].is_zero() for i in range(self.n) for j in range(self.n) if i != j)

    def __eq__(self, other):
        return (isinstance(other, HermitianSpace) and self.field == other.field and self.kind == other.kind
                and self.n == other.n and _gram_key(self) == _gram_key(other))

    def __hash__(self):
        return hash((self.field, self.n, self.kind))

    def at_level(self, field):
        """The same form over a larger tower field."""
        if field == self.field:
            return self
        phi = field.e_embedding()
        gram = tuple(tuple(phi(x) for x in row) for row in self.gram)
        return HermitianSpace(field, self.n, gram, self.kind)


def _gram_key(space):
    return tuple(x.key() for row in space.gram for x in row)


def kind_for(n, h):
    """Standard form forced by the existence of the lattice chain for (n, h)."""
    return TI if (n - h - 1) % 2 == 0 else TJ


def standard_space(field, n, kind=TI):
    """t*I_n or t*diag(pi, 1, ..., 1), t the fixed trace-zero unit."""
    if kind not in (TI, TJ):
        raise UsageError(f"unknown kind {kind!r}")
    if n < 1:
        raise UsageError("dimension must be positive")
    t = field.trace_zero_unit()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i != j:
                row.append(field.zero(3 * field.N))
            elif i == 0 and kind == TJ:
                row.append(t.mul_pi(1))
            else:
                row.append(t)
        rows.append(tuple(row))
    return HermitianSpace(field, n, tuple(rows), kind)


def form(space, x, y):
    acc = space.field.zero(3 * space.field.N)
    for i, xi in enumerate(x):
        if xi.is_zero():
            continue
        for j, yj in enumerate(y):
            g = space.gram[i][j]
            if not g.is_zero() and not yj.is_zero():
                acc = acc + xi * g * yj.conj()
    return acc


def is_skew_hermitian(space):
    n = space.n
    return all(space.gram[i][j] == -space.gram[j][i].conj() for i in range(n) for j in range(n))


@lru_cache(maxsize=64)
def _gram_t_inverse(space):
    n = space.n
    gt = [[space.gram[j][i] for j in range(n)] for i in range(n)]
    if space.diagonal:
        return None, [gt[i][i].inverse() for i in range(n)]
    return dl.mat_inverse(gt), None


def dual(L, space):
    """{x : {x, L} in O}."""
    if L.n != space.n or L.field != space.field:
        raise UsageError("lattice does not live in this hermitian space")
    return _dual(L, space)


@lru_cache(maxsize=200000)
def _dual(L, space):
    std = dl.standard_dual(dl.apply_frobenius(L, L.field.f))
    full, diag = _gram_t_inverse(space)
    if diag is not None:
        cols = [[c[i] * diag[i] for i in range(L.n)] for c in std.cols]
    else:
        cols = [[_dot(full[i], c) for i in range(L.n)] for c in std.cols]
    return dl.canonicalize(L.field, cols)


def _dot(row, col):
    acc = row[0] * col[0]
    for a, b in zip(row[1:], col[1:]):
        acc = acc + a * b
    return acc


def base_lattice(space):
    return dl.Lattice.standard(space.field, space.n)


# -- vertex lattices --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VertexLattice:
    lattice: dl.Lattice
    cls: int
    type: int
    sign: str
    n: int
    h: int

    def key(self):
        return (self.lattice.key(), self.cls)

    def __eq__(self, other):
        return isinstance(other, VertexLattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return (dl.sort_key(self.lattice), self.cls) < (dl.sort_key(other.lattice), other.cls)

    @property
    def plus(self):
        return self.sign == "+"

    def label(self):
        return f"{self.cls}/{self.type}"

    def to_json(self):
        return {"class": self.cls, "type": self.type, "sign": self.sign,
                "n": self.n, "h": self.h, "lattice": self.lattice.to_json(),
                "compact": self.lattice.compact()}


def sign_for(cls, t, n, h):
    gap = h if cls == 0 else n - h
    if t >= gap + 1:
        return "+"
    if t <= gap - 1:
        return "-"
    return "neither"


def vertex_verdicts(L, space, n, h):
    """Every class for which L is a vertex lattice (both when L = pi L^vee)."""
    if not 0 <= h <= n:
        raise UsageError("need 0 <= h <= n")
    D = dual(L, space)
    out = []
    for cls in (0, 1):
        low = dl.scale(D, cls + 1)
        if dl.is_sublattice(low, L) and dl.is_sublattice(L, dl.scale(D, cls)):
            t = dl.index(low, L)
            out.append(VertexLattice(L, cls, t, sign_for(cls, t, n, h), n, h))
    return out


def classify_vertex(L, space, n, h, cls=None):
    """VertexLattice verdict, or NOT_VERTEX. With cls=None class 0 is preferred."""
    if L.field.m > 1 and not dl.is_tau_invariant(L):
        return NOT_VERTEX
    for v in vertex_verdicts(L, space, n, h):
        if cls is None or v.cls == cls:
            return v
    return NOT_VERTEX


def partner(v, space):
    """Lambda -> pi Lambda^vee, swapping the classes and sending type t to n - t."""
    L = dl.scale(dual(v.lattice, space), 1)
    t = v.n - v.type
    cls = 1 - v.cls
    return VertexLattice(L, cls, t, sign_for(cls, t, v.n, v.h), v.n, v.h)


# -- finite quotients ----------------------------------------------------------

class Quotient:
    """X/Y for pi X <= Y <= X, with coordinates over the residue field.

    The basis of X/Y is given by `lifts` (default: the Hermite columns of X
    at the non-pivot positions of Y mod pi X). The form pi^(-shift) {x, y}
    mod pi is carried as a FiniteHermitianSpace.
    """

    def __init__(self, space, X, Y, shift, lifts=None):
        self.space, self.X, self.Y, self.shift = space, X, Y, shift
        field = X.field
        self.F = F = field.residue
        rows = [self._residues(col) for col in Y.cols]
        red, piv = rref(F, rows)
        if lifts is None:
            lifts = [list(X.cols[j]) for j in range(X.n) if j not in piv]
        self.lifts = [list(v) for v in lifts]
        self.d = len(self.lifts)
        if len(red) + self.d != X.n:
            raise UsageError("lifts do not complete a basis of the quotient")
        basis = [list(r) for r in red] + [list(self._residues(v)) for v in self.lifts]
        self._inv = _gf_inverse(F, basis)
        self._skip = len(red)
        gram = [[self._pair_code(a, b) for b in self.lifts] for a in self.lifts]
        self.finite = FiniteHermitianSpace(F, gram, field.q, max(shift, 0)) if self.d else None

    def _residues(self, v):
        return [x.residue() for x in dl.coordinates(self.X, v)]

    def _pair_code(self, a, b):
        v = form(self.space, a, b).mul_pi(-self.shift)
        return v.residue()

    def reduce(self, v):
        """Coordinates of the class of v (v in X) in the lift basis."""
        F = self.F
        c = self._residues(v)
        out = []
        for k in range(self._skip, self.X.n):
            acc = 0
            for i, ci in enumerate(c):
                if ci and self._inv[i][k]:
                    acc = F.add(acc, F.mul(ci, self._inv[i][k]))
            out.append(acc)
        return tuple(out)

    def reduce_lattice(self, L):
        """Image of a lattice Y <= L <= X as reduced echelon rows."""
        return tuple(rref(self.F, [self.reduce(c) for c in L.cols])[0])

    def lift(self, coords):
        field = self.X.field
        out = [field.zero(3 * field.N) for _ in range(self.X.n)]
        for a, vec in zip(coords, self.lifts):
            if a:
                u = field.from_residue(a)
                out = [o + u * x for o, x in zip(out, vec)]
        return out

    def preimage(self, rows):
        """The lattice between Y and X whose image is span(rows)."""
        gens = [self.lift(r) for r in rows] + [list(c) for c in self.Y.cols]
        return dl.canonicalize(self.X.field, gens)


def _gf_inverse(F, M):
    n = len(M)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    red, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise UsageError("singular matrix over the residue field")
    return [list(r[n:]) for r in red]


def v_space(v, space):
    """V_Lambda = Lambda / pi^(i+1) Lambda^vee with the form pi^-i {,} mod pi."""
    low = dl.scale(dual(v.lattice, space), v.cls + 1)
    return Quotient(space, v.lattice, low, v.cls)


def w_space(L, D, space):
    """Lambda^vee / Lambda for a class-0 Lambda, with the form pi{,} mod pi."""
    return Quotient(space, D, L, -1)


# -- enumeration ---------------------------------------------------------------

def window_bounds(space, a):
    L0 = base_lattice(space)
    return dl.scale(L0, a), dl.scale(L0, -a)


def in_window(L, low, high):
    return dl.is_sublattice(low, L) and dl.is_sublattice(L, high)


def _class0_neighbours(L, space):
    D = dual(L, space)
    low = dl.scale(D, 1)
    out = []
    if not (low == L):
        V = Quotient(space, L, low, 0)
        for W in V.finite.isotropic_subspaces():
            U = V.finite.curlyvee(list(W))
            out.append(V.preimage(U))
    if not (D == L):
        Wq = w_space(L, D, space)
        for X in Wq.finite.isotropic_subspaces():
            gens = [Wq.lift(r) for r in X] + [list(c) for c in L.cols]
            out.append(dl.canonicalize(L.field, gens))
    return out


def class0_vertex_lattices(space, low, high, limit=MAX_WINDOW_LATTICES):
    """All class-0 vertex lattices between low and high, by walking inclusions from L0."""
    L0 = base_lattice(space)
    if not in_window(L0, low, high):
        raise UsageError("window must contain the standard lattice")
    seen = {L0}
    queue = deque([L0])
    while queue:
        L = queue.popleft()
        for M in _class0_neighbours(L, space):
            if M in seen or not in_window(M, low, high):
                continue
            seen.add(M)
            if len(seen) > limit:
                raise BudgetError(f"more than {limit} vertex lattices in the window")
            queue.append(M)
    return seen


def enumerate_vertex_lattices(space, n, h, a, limit=MAX_WINDOW_LATTICES):
    """All vertex lattices (both classes) with pi^a L0 <= Lambda <= pi^-a L0, sorted."""
    if space.field.m != 1:
        raise UsageError("vertex lattices are enumerated over the E-level field")
    if a < 0:
        raise UsageError("window must be nonnegative")
    return list(_enumerate_cached(space, n, h, a, limit))


@lru_cache(maxsize=32)
def _enumerate_cached(space, n, h, a, limit):
    low, high = window_bounds(space, a)
    D0 = dual(base_lattice(space), space)
    # class 1 lattices in the window are pi Lambda^vee for class 0 Lambda in this range
    low1, high1 = dl.scale(D0, a + 1), dl.scale(D0, 1 - a)
    L0 = base_lattice(space)
    found0 = class0_vertex_lattices(space, low, high, limit)
    if in_window(L0, low1, high1):
        found1 = class0_vertex_lattices(space, low1, high1, limit)
    else:
        hull_low = dl.intersect(low, low1)
        hull_high = dl.lattice_sum(high, high1)
        found1 = [L for L in class0_vertex_lattices(space, hull_low, hull_high, limit)
                  if in_window(L, low1, high1)]
    out = []
    for L in found0:
        t = dl.index(dl.scale(dual(L, space), 1), L)
        out.append(VertexLattice(L, 0, t, sign_for(0, t, n, h), n, h))
    for L in found1:
        M = dl.scale(dual(L, space), 1)
        t = n - dl.index(M, L)
        out.append(VertexLattice(M, 1, t, sign_for(1, t, n, h), n, h))
    out.sort()
    return tuple(out)
