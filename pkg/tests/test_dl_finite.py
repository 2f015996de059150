import itertools
import random

import pytest

from bt_strata import dl_finite as DF
from bt_strata.errors import BudgetError, UsageError
from bt_strata.finite_field import span_key


def space(d, cls=0, q=3, m=1):
    return DF.standard_finite_space(q, d, m=m, cls=cls)


def cases(t_max):
    """(d, n, h, cls) with n = d for every valid flag pattern."""
    for d in range(1, t_max + 1):
        for cls in (0, 1):
            for gap in range((d - 1) % 2, d, 2):
                yield d, d, (gap if cls == 0 else d - gap), cls


def test_isotropic_count_formula_matches_search():
    for d in range(1, 5):
        S = space(d)
        found = S.isotropic_subspaces()
        for k in range(1, d // 2 + 1):
            assert sum(1 for W in found if len(W) == k) == DF.isotropic_count_formula(d, k, 3)


@pytest.mark.parametrize("d,n,h,cls", list(cases(4)))
def test_fast_full_and_naive_counts_agree(d, n, h, cls):
    S = space(d, cls)
    ref = DF.reference_count(S, n, h)
    fast = DF.count_points(S, n, h, mode="fast")
    full = DF.count_points(S, n, h, mode="full")
    assert (fast.closed, fast.open_id, fast.open_w) == (ref[DF.CLOSED], ref[DF.OPEN_ID], ref[DF.OPEN_W])
    assert fast == full
    assert sum(1 for _ in DF.closed_flags(S, n, h)) == fast.closed


@pytest.mark.parametrize("d,n,h,cls", list(cases(5)))
def test_relative_position_matches_rule(d, n, h, cls):
    c = DF.count_points(space(d, cls), n, h)
    assert c.closed == c.open_id + c.open_w
    assert (c.id_position, c.w_position, c.other_position) == (c.open_id, c.open_w, 0)


def test_rank_two_gap_one_is_the_projective_line():
    # every line of F_9^2 is a closed flag
    assert DF.count_points(space(2), 2, 1).closed == 10


def test_curve_at_level_two():
    # d = 3, gap 0 is the Fermat hermitian curve; over F_{q^4} it is minimal: q^4 + 1 - 2gq^2 points
    c = DF.count_points(space(3), 3, 0, m=2)
    assert c.closed == 28 and c.open_w == 0


def test_higher_level_counts_match_naive():
    for d, n, h, cls in [(2, 2, 1, 0), (3, 3, 0, 0), (3, 3, 2, 0)]:
        S = space(d, cls)
        ref = DF.reference_count(DF.extend_space(S, 2), n, h)
        got = DF.count_points(S, n, h, m=2)
        assert (got.closed, got.open_id, got.open_w) == (ref[DF.CLOSED], ref[DF.OPEN_ID], ref[DF.OPEN_W])


def _transform(S, A):
    F = S.F
    d = S.d
    G = [[0] * d for _ in range(d)]
    for i, j, k, l in itertools.product(range(d), repeat=4):
        x = F.mul(F.mul(A[i][k], S.gram[k][l]), S.frob(A[j][l]))
        G[i][j] = F.add(G[i][j], x)
    return DF.FiniteHermitianSpace(F, G, S.q, S.cls)


def test_counts_are_isometry_invariant():
    rng = random.Random(5)
    S = space(4)
    F = S.F
    while True:
        A = [[rng.randrange(F.order) for _ in range(4)] for _ in range(4)]
        if DF.rank(F, A) == 4:
            break
    T = _transform(S, A)
    assert not T.gram == S.gram
    for h in (1, 3):
        assert DF.count_points(T, 4, h).histogram == DF.count_points(S, 4, h).histogram


def test_budget_and_usage_errors():
    with pytest.raises(BudgetError):
        DF.count_points(space(7), 7, 0, max_work=10)
    with pytest.raises(UsageError):
        DF.count_points(space(4), 4, 0)  # parity mismatch
    with pytest.raises(UsageError):
        DF.count_points(space(3), 3, 0, m=2, mode="fast")
    with pytest.raises(UsageError):
        DF.FiniteHermitianSpace(space(2).F, [[1, 0], [0, 0]], 3)


def test_flag_dims():
    assert DF.flag_dims(5, 5, 2, 0) == (2, 4)
    assert DF.flag_dims(5, 5, 3, 1) == (2, 4)
    assert DF.flag_dims(1, 1, 0, 0) == (1, 1)


# -- Weyl combinatorics ---------------------------------------------------------

def test_small_weyl_example():
    assert DF.dimension_weyl(DF.WeylDatum(4, frozenset({1}), DF.simple(4, 2))) == 2


def test_weyl_dimension_matches_closed_form():
    for t, n, h, cls in cases(9):
        D = DF.weyl_datum_for(t, n, h, cls)
        assert DF.dimension_weyl(D) == DF.dimension_formula(t, n, h, cls)
        assert DF.is_irreducible(D)


def test_identity_position_dimension():
    # for w = id the dimension is l(W_F(I)) - l(W_(I n F(I)))
    for t, n, h, cls in cases(7):
        D = DF.weyl_datum_for(t, n, h, cls, which="id")
        FI = D.twisted()
        assert DF.dimension_weyl(D) == DF.parabolic_length(FI) - DF.parabolic_length(D.I & FI)


def test_transposition_shares_the_double_coset():
    for t, n, h, cls in cases(8):
        k1, k2 = DF.flag_dims(t, n, h, cls)
        if k1 == k2:
            continue
        D = DF.weyl_datum_for(t, n, h, cls)
        swap = list(range(1, t + 1))
        swap[k1 - 1], swap[k2 - 1] = swap[k2 - 1], swap[k1 - 1]
        E = DF.WeylDatum(t, D.I, tuple(swap))
        assert DF.minimal_representative(E) == DF.minimal_representative(D)


def test_minimal_representative_is_minimal_in_coset():
    d = 4
    I, J = frozenset({1}), frozenset({3})
    perms = list(itertools.permutations(range(1, d + 1)))
    for w in perms[:12]:
        D = DF.WeylDatum(d, I, w)
        rep = DF.minimal_representative(D, J)
        coset = {DF.compose(DF.compose(a, w), b)
                 for a in (DF.identity_perm(d), DF.simple(d, 1))
                 for b in (DF.identity_perm(d), DF.simple(d, 3))}
        assert rep in coset
        assert DF.length(rep) == min(DF.length(x) for x in coset)


def test_permutation_helpers():
    w = (3, 1, 4, 2)
    assert DF.compose(w, DF.inverse_perm(w)) == DF.identity_perm(4)
    assert DF.length(w) == 3
    assert DF.parabolic_length({1, 2, 4}) == 4
    assert DF.support(DF.simple(5, 2)) == frozenset({2})
    with pytest.raises(UsageError):
        DF.WeylDatum(3, frozenset(), (1, 1, 2))


def test_reducible_datum_detected():
    # I empty and w = id: the empty set is F-stable and proper
    assert not DF.is_irreducible(DF.WeylDatum(3, frozenset(), DF.identity_perm(3)))


def test_curlyvee_twice_is_the_frobenius_image():
    for d in (1, 2, 3):
        S = space(d, m=2)  # over F_81 the q^2-Frobenius is nontrivial
        F = S.F
        assert len(S.curlyvee([])) == d
        assert S.curlyvee(S.curlyvee([])) == []
        for k in range(1, d + 1):
            for U in itertools.islice(DF.all_subspaces(F, d, k), 200):
                V = S.curlyvee(list(U))
                assert len(V) == d - k
                twice = S.curlyvee(list(V))
                assert span_key(F, twice) == span_key(F, DF.frobenius_rows(S, U))


def test_rational_subspaces_are_curlyvee_closed():
    S = space(3)
    for U in DF.all_subspaces(S.F, 3, 1):
        assert span_key(S.F, S.curlyvee(S.curlyvee(list(U)))) == span_key(S.F, U)


def test_minimal_type_every_flag_is_closed():
    # l = 0: 0 < S1 < S2 = ... every flag of the right shape lies in the closed stratum
    for d, gap in [(2, 1), (3, 2), (4, 3)]:
        S = space(d)
        c = DF.count_points(S, d, gap)
        assert c.closed == DF.gaussian_binomial(d, 1, 9)


def test_gap_zero_has_only_the_identity_part():
    for d in (1, 3, 5):
        c = DF.count_points(space(d), d, 0)
        assert c.open_w == 0 and c.closed == c.open_id


def test_counts_grow_with_the_level():
    for d, n, h, cls in cases(4):
        S = space(d, cls)
        one, two = DF.count_points(S, n, h).closed, DF.count_points(S, n, h, m=2).closed
        dim = DF.dimension_formula(d, n, h, cls)
        assert two >= one
        # a variety of dimension dim has about Q^dim points; allow a generous constant
        assert 81 ** dim / 8 <= two <= 8 * 81 ** dim


def test_irreducibility_examples():
    assert DF.is_irreducible(DF.WeylDatum(3, frozenset({1, 2}), DF.identity_perm(3)))
    assert not DF.is_irreducible(DF.WeylDatum(2, frozenset(), DF.identity_perm(2)))
    with pytest.raises(BudgetError):
        DF.is_irreducible(DF.WeylDatum(11, frozenset(), DF.identity_perm(11)))
