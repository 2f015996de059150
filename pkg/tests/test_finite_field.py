import itertools

from hypothesis import given, strategies as st

from bt_strata import finite_field as ff


def test_smallest_irreducible_has_no_roots():
    for p, k in [(3, 2), (3, 4), (5, 2), (7, 3)]:
        f = ff.smallest_irreducible(p, k)
        assert len(f) == k + 1 and f[-1] == 1
        assert ff.is_irreducible(f, p)
        for x in range(p):
            assert sum(c * x ** i for i, c in enumerate(f)) % p != 0


def test_reducible_polynomial_rejected():
    # x^2 - 1 = (x - 1)(x + 1)
    assert not ff.is_irreducible([-1 % 3, 0, 1], 3)


def test_multiplicative_group_is_cyclic_of_full_order():
    F = ff.standard_field(3, 2)
    orders = [len({F.pow(g, e) for e in range(F.order - 1)}) for g in range(1, F.order)]
    assert max(orders) == F.order - 1


@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
def test_field_axioms_gf81(a, b, c):
    F = ff.standard_field(3, 4)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1


@given(st.integers(1, 3 ** 8 - 1))
def test_inverse_without_tables(a):
    F = ff.GF(3, ff.smallest_irreducible(3, 8))
    assert F.mul(a, F.inv(a)) == 1


def test_poly_inverse_mod():
    m = ff.smallest_irreducible(5, 3)
    for a in ([1], [2, 1], [0, 3, 4]):
        inv = ff.poly_inverse_mod(a, m, 5)
        assert ff.poly_mod(ff.poly_mul(a, inv, 5), m, 5) == [1]


def test_frobenius_fixes_prime_field():
    F = ff.standard_field(5, 2)
    fixed = [a for a in range(F.order) if F.frob(a) == a]
    assert len(fixed) == 5


def test_subfield_embedding_is_a_homomorphism():
    small, big = ff.standard_field(3, 2), ff.standard_field(3, 4)
    phi = ff.FieldEmbedding(small, big)
    for a, b in itertools.product(range(small.order), repeat=2):
        assert phi(small.add(a, b)) == big.add(phi(a), phi(b))
        assert phi(small.mul(a, b)) == big.mul(phi(a), phi(b))


def test_linear_algebra_small():
    F = ff.standard_field(3, 1)
    rows = [(1, 2, 0), (2, 1, 0), (0, 0, 1)]
    assert ff.rank(F, rows) == 2
    ker = ff.kernel(F, rows, 3)
    assert len(ker) == 1
    for r in rows:
        assert sum(a * b for a, b in zip(r, ker[0])) % 3 == 0
    assert ff.contains_span(F, rows, [(0, 0, 2)])
    assert not ff.contains_span(F, rows, [(1, 0, 0)])
    meet = ff.intersect_spans(F, [(1, 0, 0), (0, 1, 0)], [(1, 1, 0), (0, 0, 1)], 3)
    assert ff.span_key(F, meet) == ff.span_key(F, [(1, 1, 0)])
