import random

import pytest
from hypothesis import given, settings, strategies as st

from bt_strata import dvr_lattice as dl
from bt_strata.padic_core import build_tower

E = build_tower(3, 1, 1, 16)
F2 = build_tower(3, 1, 2, 16)
seeds = st.integers(0, 10 ** 6)


def rand(field, n, seed, **kw):
    return dl.random_lattice(field, n, random.Random(seed), **kw)


def test_diagonal_basics():
    L = dl.diagonal(E, [0, 1, 2])
    assert L.det_valuation() == 3
    assert dl.is_sublattice(L, dl.Lattice.standard(E, 3))
    assert dl.index(L, dl.Lattice.standard(E, 3)) == 3
    assert dl.elementary_divisors(L, dl.Lattice.standard(E, 3)) == [0, 1, 2]
    assert L.compact() == "[0, 1, 2]"


def test_rank_deficient():
    z = E.zero()
    with pytest.raises(dl.RankDeficientError):
        dl.canonicalize(E, [[E.one(), z], [E.from_int(2), z]])


def test_not_contained():
    with pytest.raises(dl.NotContainedError):
        dl.index(dl.Lattice.standard(E, 2), dl.diagonal(E, [1, 1]))


@given(seeds)
@settings(max_examples=40)
def test_canonical_form_ignores_generator_choice(seed):
    rng = random.Random(seed)
    L = rand(E, 3, seed)
    cols = [list(c) for c in L.cols]
    # add a unit multiple of one generator to another and shuffle
    i, j = rng.sample(range(3), 2)
    u = E.element([rng.randrange(1, 9)])
    cols[i] = [a + u * b for a, b in zip(cols[i], cols[j])]
    rng.shuffle(cols)
    assert dl.canonicalize(E, cols) == L


@given(seeds)
@settings(max_examples=40)
def test_sum_and_intersection(seed):
    A, B = rand(E, 3, seed), rand(E, 3, seed + 1)
    S, I = dl.lattice_sum(A, B), dl.intersect(A, B)
    for X in (A, B):
        assert dl.is_sublattice(I, X) and dl.is_sublattice(X, S)
    # second isomorphism theorem: [S : A] = [B : A n B]
    assert dl.index(A, S) == dl.index(I, B)


@given(seeds)
@settings(max_examples=40)
def test_standard_dual_involution(seed):
    A = rand(E, 3, seed)
    assert dl.standard_dual(dl.standard_dual(A)) == A
    assert dl.standard_dual(A).det_valuation() == -A.det_valuation()


@given(seeds, st.integers(-3, 3))
@settings(max_examples=30)
def test_scaling(seed, k):
    A = rand(E, 2, seed)
    assert dl.scale(A, k).det_valuation() == A.det_valuation() + 2 * k
    assert dl.scale(dl.scale(A, k), -k) == A


@given(seeds)
@settings(max_examples=30)
def test_elementary_divisors_sum_to_index(seed):
    A, B = rand(E, 3, seed), rand(E, 3, seed + 7)
    I = dl.intersect(A, B)
    ed = dl.elementary_divisors(I, A)
    assert sum(ed) == dl.index(I, A) and min(ed) >= 0


def test_e_level_lattices_descend():
    rng = random.Random(3)
    for _ in range(10):
        L = dl.random_lattice(E, 2, rng)
        up = dl.embed(L, F2)
        assert dl.is_tau_invariant(up)
        assert dl.descend(up) == L


def test_generic_level_two_lattice_is_not_tau_invariant():
    rng = random.Random(0)
    found = [dl.is_tau_invariant(dl.random_lattice(F2, 2, rng)) for _ in range(10)]
    assert not all(found)


@given(seeds)
@settings(max_examples=20)
def test_json_round_trip(seed):
    L = rand(F2, 2, seed)
    assert dl.Lattice.from_json(F2, L.to_json()) == L


def test_sort_is_deterministic():
    Ls = [rand(E, 2, s) for s in range(8)]
    assert sorted(Ls) == sorted(reversed(Ls))
