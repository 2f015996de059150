"""Pairs of lattices A <= B at a finite level m and their Bruhat-Tits strata.

A pair is a point when

    A <= B of index h,  pi B <= A,
    pi B^vee <=1 A <=(n-1) B^vee,
    pi A^vee <=1 B <=(n-1) A^vee.

Points are built from flags in V_Lambda (lift_flag) and classified by the
tau-closures Lambda_A, Lambda_B of A and B.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from . import dvr_lattice as dl
from . import hermitian as H
from .dl_finite import FlagPoint, flag_dims
from .errors import BudgetError, InvariantViolation, UsageError, BtStrataError
from .finite_field import rref
from .padic_core import build_tower


class ClosureBoundError(BtStrataError):
    exit_code = 5


@dataclass(frozen=True, eq=False)
class StratumPoint:
    m: int
    A: dl.Lattice
    B: dl.Lattice
    n: int
    h: int

    def key(self):
        return (self.m, self.A.key(), self.B.key())

    def __eq__(self, other):
        return isinstance(other, StratumPoint) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self):
        return {"level": self.m, "n": self.n, "h": self.h,
                "A": self.A.to_json(), "B": self.B.to_json()}


@dataclass(frozen=True)
class PointCheck:
    ok: bool
    reason: str | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ClassifierVerdict:
    case: str
    witness: H.VertexLattice
    depths: tuple
    closure: dl.Lattice = dc_field(compare=False, repr=False)


@lru_cache(maxsize=64)
def level_space(space, m):
    """The hermitian space over the level-m tower."""
    if m == space.field.m:
        return space
    E = space.field
    Fm = build_tower(E.p, E.f, m, E.N, E.guard)
    return space.at_level(Fm)


def _included(small, big, k=None):
    """small <= big, and with index k when k is given."""
    if not dl.is_sublattice(small, big):
        return False
    return k is None or dl.index(small, big) == k


def is_point(A, B, n, h, space):
    """Check every chain condition; the verdict names the first failure."""
    if A.n != n or B.n != n:
        return PointCheck(False, "dimension mismatch")
    if not 0 <= h <= n:
        return PointCheck(False, "h out of range")
    S = level_space(space, A.field.m)
    Ad, Bd = H.dual(A, S), H.dual(B, S)
    checks = [
        (lambda: _included(A, B, h), f"A <= B with index {h}"),
        (lambda: _included(dl.scale(B, 1), A), "pi B <= A"),
        (lambda: _included(dl.scale(Bd, 1), A, 1), "pi B^vee <=1 A"),
        (lambda: _included(A, Bd, n - 1), f"A <=({n - 1}) B^vee"),
        (lambda: _included(dl.scale(Ad, 1), B, 1), "pi A^vee <=1 B"),
        (lambda: _included(B, Ad, n - 1), f"B <=({n - 1}) A^vee"),
    ]
    for test, name in checks:
        if not test():
            return PointCheck(False, f"violated: {name}")
    return PointCheck(True)


def make_point(A, B, n, h, space, m=None):
    chk = is_point(A, B, n, h, space)
    if not chk:
        raise UsageError(f"not a point: {chk.reason}")
    return StratumPoint(A.field.m if m is None else m, A, B, n, h)


def tau_closure(L, bound=None):
    """(T_c L, c) with T_c L = L + tau L + ... + tau^c L the first tau-invariant one."""
    field = L.field
    bound = field.m * L.n if bound is None else bound
    cur, depth = L, 0
    while True:
        nxt = dl.tau(cur)
        if nxt == cur:
            return cur, depth
        depth += 1
        if depth > bound:
            raise ClosureBoundError(f"tau-closure did not stabilise within {bound} steps")
        cur = dl.lattice_sum(cur, nxt)


def tau_chain(L):
    """[T_0 L, T_1 L, ..., T_c L]."""
    chain = [L]
    cur = L
    while True:
        nxt = dl.tau(cur)
        if nxt == cur:
            return chain
        cur = dl.lattice_sum(cur, nxt)
        chain.append(cur)
        if len(chain) > L.field.m * L.n + 1:
            raise ClosureBoundError("tau-closure did not stabilise")


def _to_vertex(L, space, n, h, cls):
    E_lat = dl.descend(L)
    v = H.classify_vertex(E_lat, space, n, h, cls=cls)
    return None if v == H.NOT_VERTEX else v


def l0_diagram(pt, LB, space):
    """Case (1): Lambda_B in L_0 with pi A^vee <=1 B <= Lambda_B <= Lambda_B^vee, pi Lambda_B^vee <= pi B^vee <=1 A."""
    S = level_space(space, pt.m)
    A, B = pt.A, pt.B
    Ad, Bd, Ld = H.dual(A, S), H.dual(B, S), H.dual(LB, S)
    return (dl.is_tau_invariant(LB)
            and _included(dl.scale(Ad, 1), B, 1)
            and _included(B, LB)
            and _included(LB, Ld)
            and _included(dl.scale(Ld, 1), dl.scale(Bd, 1))
            and _included(dl.scale(Bd, 1), A, 1)
            and _included(dl.scale(Bd, 1), dl.scale(Ad, 1))
            and _included(A, B)
            and _included(dl.scale(Ld, 1), LB))


def l1_diagram(pt, LA, space):
    """Case (2): Lambda_A in L_1 with pi B^vee <=1 A <= Lambda_A <= pi Lambda_A^vee, pi^2 Lambda_A^vee <= pi^2 A^vee <=1 pi B."""
    S = level_space(space, pt.m)
    A, B = pt.A, pt.B
    Ad, Bd, Ld = H.dual(A, S), H.dual(B, S), H.dual(LA, S)
    return (dl.is_tau_invariant(LA)
            and _included(dl.scale(Bd, 1), A, 1)
            and _included(A, LA)
            and _included(LA, dl.scale(Ld, 1))
            and _included(dl.scale(Ld, 2), dl.scale(Ad, 2))
            and _included(dl.scale(Ad, 2), dl.scale(B, 1), 1)
            and _included(dl.scale(Ad, 2), dl.scale(Bd, 1))
            and _included(dl.scale(B, 1), A)
            and _included(dl.scale(Ld, 2), LA))


def classify(pt, space):
    """Every case of the two-case lemma that holds for the point, with witnesses."""
    LA, c = tau_closure(pt.A)
    LB, d = tau_closure(pt.B)
    out = []
    if l0_diagram(pt, LB, space):
        v = _to_vertex(LB, space, pt.n, pt.h, 0)
        if v is None:
            raise InvariantViolation("Lambda_B passed the diagram but is not a class-0 vertex lattice")
        out.append(ClassifierVerdict("L0", v, (c, d), LB))
    if l1_diagram(pt, LA, space):
        v = _to_vertex(LA, space, pt.n, pt.h, 1)
        if v is None:
            raise InvariantViolation("Lambda_A passed the diagram but is not a class-1 vertex lattice")
        out.append(ClassifierVerdict("L1", v, (c, d), LA))
    if not out:
        raise InvariantViolation("neither case of the classifier holds for a valid point")
    return out


def _embedded(v, m):
    L = v.lattice
    if m == L.field.m:
        return L
    return _embed_cached(L, m)


@lru_cache(maxsize=20000)
def _embed_cached(L, m):
    E = L.field
    return dl.embed(L, build_tower(E.p, E.f, m, E.N, E.guard))


def s_membership(v, pt, space, check_point=True):
    """Point lies in S_Lambda for a class-0 vertex lattice."""
    if v.cls != 0:
        raise UsageError("S_Lambda needs a class-0 vertex lattice")
    L = _embedded(v, pt.m)
    if not _included(pt.B, L):
        return False
    if check_point and not is_point(pt.A, pt.B, pt.n, pt.h, space):
        return False
    S = level_space(space, pt.m)
    Ld, Bd = H.dual(L, S), H.dual(pt.B, S)
    return _included(L, Ld) and _included(dl.scale(Ld, 1), dl.scale(Bd, 1))


def r_membership(v, pt, space, check_point=True):
    """Point lies in R_Lambda for a class-1 vertex lattice."""
    if v.cls != 1:
        raise UsageError("R_Lambda needs a class-1 vertex lattice")
    L = _embedded(v, pt.m)
    if not _included(pt.A, L):
        return False
    if check_point and not is_point(pt.A, pt.B, pt.n, pt.h, space):
        return False
    S = level_space(space, pt.m)
    Ld, Ad = H.dual(L, S), H.dual(pt.A, S)
    return _included(L, dl.scale(Ld, 1)) and _included(dl.scale(Ld, 2), dl.scale(Ad, 2))


def membership(v, pt, space, check_point=True):
    if v.cls == 0:
        return s_membership(v, pt, space, check_point)
    return r_membership(v, pt, space, check_point)


def cycle_membership(pt, vec, kind, space):
    """Z: vec in pi B^vee. Y: vec in pi A^vee."""
    S = level_space(space, pt.m)
    if kind == "Z":
        target = dl.scale(H.dual(pt.B, S), 1)
    elif kind == "Y":
        target = dl.scale(H.dual(pt.A, S), 1)
    else:
        raise UsageError(f"unknown cycle kind {kind!r}")
    return dl.contains(target, vec)


# -- flags <-> points ---------------------------------------------------------

@lru_cache(maxsize=4096)
def level_quotient(v, space, m):
    """V_Lambda over the level-m ring, in the basis lifted from the E-level V_Lambda."""
    base = H.v_space(v, space)
    if m == v.lattice.field.m:
        return base
    S = level_space(space, m)
    X = _embedded(v, m)
    Y = dl.scale(H.dual(X, S), v.cls + 1)
    phi = S.field.e_embedding()
    lifts = [[phi(x) for x in vec] for vec in base.lifts]
    return H.Quotient(S, X, Y, v.cls, lifts)


def finite_space(v, space, m=1):
    """The FiniteHermitianSpace V_Lambda tensored up to F_{q^(2m)}."""
    fs = level_quotient(v, space, m).finite
    if fs is None:
        raise UsageError("V_Lambda is zero")
    return fs


def lift_flag(v, fl, space):
    """The pair (A, B) whose reduction in V_Lambda is the flag."""
    m = fl.m
    Q = level_quotient(v, space, m)
    k1, k2 = flag_dims(Q.d, v.n, v.h, v.cls)
    if fl.dims != (k1, k2):
        raise UsageError(f"flag dims {fl.dims} do not fit the pattern {(k1, k2)}")
    P1 = Q.preimage(list(fl.s1))
    P2 = Q.preimage(list(fl.s2))
    if v.cls == 0:
        A, B = P1, P2
    else:
        A, B = P2, dl.scale(P1, -1)
    return StratumPoint(m, A, B, v.n, v.h)


def reduce_point(v, pt, space):
    """Inverse of lift_flag."""
    Q = level_quotient(v, space, pt.m)
    if v.cls == 0:
        s1, s2 = Q.reduce_lattice(pt.A), Q.reduce_lattice(pt.B)
    else:
        s1, s2 = Q.reduce_lattice(dl.scale(pt.B, 1)), Q.reduce_lattice(pt.A)
    return FlagPoint(pt.m, s1, s2)


def point_from_json(field, data):
    A = dl.Lattice.from_json(field, data["A"])
    B = dl.Lattice.from_json(field, data["B"])
    return StratumPoint(data.get("level", field.m), A, B, data["n"], data["h"])


def stratum_points(v, space, m=1, limit=10 ** 5):
    """All points of S_Lambda (class 0) or R_Lambda (class 1) over level m, from closed flags."""
    from .dl_finite import closed_flags
    fs = finite_space(v, space, m)
    out = []
    for fl in closed_flags(fs, v.n, v.h):
        out.append(lift_flag(v, FlagPoint(m, fl.s1, fl.s2), space))
        if len(out) > limit:
            raise BudgetError(f"more than {limit} points")
    return out


def check_set_laws(space, n, h, a, m=1):
    """Pointwise check of the intersection laws over the window; returns failure strings.

    Same class: S_L n S_L' = S_{L n L'} when L n L' is a sign-"+" vertex
    lattice, else empty (likewise R). Cross: S_L0 n R_L1 is nonempty exactly
    when pi L1^vee <= L0.
    """
    from .bt_graph import stratum_intersection
    nodes = [v for v in H.enumerate_vertex_lattices(space, n, h, a) if v.plus]
    pts = {v: stratum_points(v, space, m) for v in nodes}
    keys = {v: {p.key() for p in pts[v]} for v in nodes}
    fails = []
    for i, u in enumerate(nodes):
        for v in nodes[i:]:
            if u.cls == v.cls:
                inside = {p.key() for p in pts[v] if membership(u, p, space, check_point=False)}
                meet = stratum_intersection(u, v, space)
                expect = set() if meet == "empty" else keys[meet]
                if inside != expect:
                    fails.append(f"{u.label()} n {v.label()}: {len(inside)} points, expected {len(expect)}")
            else:
                v0, v1 = (u, v) if u.cls == 0 else (v, u)
                hit = any(membership(v1, p, space, check_point=False) for p in pts[v0])
                crit = dl.is_sublattice(dl.scale(H.dual(v1.lattice, space), 1), v0.lattice)
                if hit != crit:
                    fails.append(f"{v0.label()} x {v1.label()}: meet {'nonempty' if hit else 'empty'}, "
                                 f"criterion {crit}")
    return fails
