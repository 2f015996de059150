import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from bt_strata import dvr_lattice as dl
from bt_strata import hermitian as H
from bt_strata.errors import UsageError
from bt_strata.padic_core import build_tower


def _integral(L, S, k):
    return all(H.form(S, x, y).certainly_at_least(k) for x in L.cols for y in L.cols)


def brute_vertex_lattices(S, n, h, a):
    """Walk index-one superlattices from pi^a L0 inside the window, keeping
    {L, L} <= pi^cls O (closed under sublattices), then keep the vertex lattices."""
    F = S.field
    low, high = H.window_bounds(S, a)
    out = set()
    for cls in (0, 1):
        seen, stack = {low}, [low]
        while stack:
            M = stack.pop()
            for code in itertools.product(range(F.residue.order), repeat=n):
                if not any(code) or next(c for c in code if c) != 1:
                    continue
                v = [F.zero() for _ in range(n)]
                for c, col in zip(code, M.cols):
                    if c:
                        u = F.from_residue(c)
                        v = [x + u * y for x, y in zip(v, col)]
                N = dl.canonicalize(F, list(M.cols) + [[x.mul_pi(-1) for x in v]])
                if N in seen or not dl.is_sublattice(N, high) or not _integral(N, S, cls):
                    continue
                seen.add(N)
                stack.append(N)
        out |= {w for L in seen for w in H.vertex_verdicts(L, S, n, h) if w.cls == cls}
    return out


@pytest.mark.parametrize("n,h,expected", [(1, 0, 2), (1, 1, 2), (2, 0, 2), (2, 1, 22), (2, 2, None)])
def test_enumeration_matches_brute_force(space_for, n, h, expected):
    S = space_for(n, h)
    found = H.enumerate_vertex_lattices(S, n, h, 1)
    assert set(found) == brute_vertex_lattices(S, n, h, 1)
    assert len(set(found)) == len(found)
    if expected is not None:
        assert len(found) == expected


@pytest.mark.slow
@pytest.mark.parametrize("n,h,expected", [(3, 1, 118), (3, 2, 142)])
def test_enumeration_matches_brute_force_rank3(space_for, n, h, expected):
    S = space_for(n, h)
    found = H.enumerate_vertex_lattices(S, n, h, 1)
    assert set(found) == brute_vertex_lattices(S, n, h, 1)
    assert len(found) == expected


def test_rank_one_vertex_lattices(E3):
    S = H.standard_space(E3, 1, H.TI)
    got = {(v.cls, v.type, v.lattice.exps) for v in H.enumerate_vertex_lattices(S, 1, 0, 2)}
    # O is self-dual: class 0 of type 1, and pi O is class 1 of type 0
    assert got == {(0, 1, (0,)), (1, 0, (1,))}


def test_window_monotone(space_for):
    S = space_for(2, 1)
    small = set(H.enumerate_vertex_lattices(S, 2, 1, 0))
    big = set(H.enumerate_vertex_lattices(S, 2, 1, 1))
    assert small <= big and small


def test_standard_spaces_are_skew_hermitian(E3):
    for n in (1, 2, 3):
        for kind in (H.TI, H.TJ):
            assert H.is_skew_hermitian(H.standard_space(E3, n, kind))
    with pytest.raises(UsageError):
        H.standard_space(E3, 2, "tK")


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_dual_is_involutive_at_level_one(seed):
    E = build_tower(3, 1, 1, 16)
    S = H.standard_space(E, 3, H.TJ)
    L = dl.random_lattice(E, 3, random.Random(seed))
    assert H.dual(H.dual(L, S), S) == L
    assert dl.is_sublattice(L, H.dual(L, S)) == _integral(L, S, 0)


def test_dual_is_tau_twisted_at_level_two():
    F = build_tower(5, 1, 2, 16)
    S = H.standard_space(F.e_level(), 2, H.TI).at_level(F)
    rng = random.Random(1)
    for _ in range(10):
        L = dl.random_lattice(F, 2, rng)
        assert H.dual(H.dual(L, S), S) == dl.tau(L)


@pytest.mark.parametrize("n", [2, 3])
def test_class0_type_parity(space_for, n):
    for h in range(n + 1):
        S = space_for(n, h)
        offset = 0 if S.kind == H.TI else 1
        for v in H.enumerate_vertex_lattices(S, n, h, 1):
            if v.cls == 0:
                assert (n - v.type - offset) % 2 == 0


def test_kind_for():
    assert H.kind_for(2, 1) == H.TI and H.kind_for(2, 0) == H.TJ
    assert H.kind_for(3, 2) == H.TI and H.kind_for(3, 1) == H.TJ


@pytest.mark.parametrize("n,h", [(2, 0), (2, 1), (2, 2), (3, 1), (3, 2)])
def test_partner_swaps_classes(space_for, n, h):
    S = space_for(n, h)
    for v in H.enumerate_vertex_lattices(S, n, h, 1):
        w = H.partner(v, S)
        assert (w.cls, w.type) == (1 - v.cls, n - v.type)
        assert H.partner(w, S) == v
        assert H.classify_vertex(w.lattice, S, n, h, cls=w.cls) == w
        # class-0 minus lattices correspond to class-1 plus lattices
        if v.cls == 0:
            assert (v.sign == "-") == (w.sign == "+")


def test_sign_for():
    assert H.sign_for(0, 2, 2, 1) == "+"
    assert H.sign_for(0, 1, 2, 1) == "neither"
    assert H.sign_for(1, 0, 2, 1) == "-"


def test_not_a_vertex(E3):
    S = H.standard_space(E3, 2, H.TI)
    assert H.classify_vertex(dl.diagonal(E3, [0, 3]), S, 2, 1) == H.NOT_VERTEX


def test_v_space_dimension_is_type(space_for):
    S = space_for(3, 1)
    for v in H.enumerate_vertex_lattices(S, 3, 1, 1):
        Q = H.v_space(v, S)
        assert Q.d == v.type
        for r in range(v.type):
            e = tuple(int(i == r) for i in range(v.type))
            assert Q.reduce(Q.lift(e)) == e


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_dual_reverses_inclusions_and_swaps_meet_and_sum(seed):
    E = build_tower(5, 1, 1, 16)
    S = H.standard_space(E, 3, H.TI)
    rng = random.Random(seed)
    A, B = dl.random_lattice(E, 3, rng), dl.random_lattice(E, 3, rng)
    I, U = dl.intersect(A, B), dl.lattice_sum(A, B)
    assert H.dual(I, S) == dl.lattice_sum(H.dual(A, S), H.dual(B, S))
    assert H.dual(U, S) == dl.intersect(H.dual(A, S), H.dual(B, S))
    assert dl.is_sublattice(H.dual(A, S), H.dual(I, S))
