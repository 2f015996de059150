import math

import pytest
from hypothesis import given, settings, strategies as st

from bt_strata.errors import PrecisionError, UsageError
from bt_strata.padic_core import build_tower, embedding, valuation

F = build_tower(3, 1, 2, 16)
E = F.e_level()

coeffs = st.lists(st.integers(0, 3 ** 6), min_size=F.r, max_size=F.r)
units = coeffs.filter(lambda c: any(x % 3 for x in c))


def elt(c, shift=0):
    return F.element(c, shift)


def test_bad_parameters():
    with pytest.raises(UsageError):
        build_tower(2, 1, 1)
    with pytest.raises(UsageError):
        build_tower(9, 1, 1)
    with pytest.raises(UsageError):
        build_tower(3, 4, 5)  # degree 40
    with pytest.raises(UsageError):
        build_tower(3, 1, 1, N=4)


def test_zero_and_valuation():
    assert F.zero().is_zero()
    assert valuation(F.zero()) == math.inf
    assert F.pi_power(3).valuation() == 3
    assert F.element([3, 9]).valuation() == 1


@given(coeffs, coeffs, coeffs)
def test_ring_laws(a, b, c):
    x, y, z = elt(a), elt(b), elt(c)
    assert x * (y + z) == x * y + x * z
    assert (x + y) - y == x


@given(units, st.integers(-3, 3))
def test_inverse(a, s):
    x = elt(a, s)
    assert x * x.inverse() == F.one()
    assert x.valuation() == s


@given(coeffs, coeffs)
def test_frobenius_is_a_ring_automorphism(a, b):
    x, y = elt(a), elt(b)
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()
    assert (x + y).frobenius() == x.frobenius() + y.frobenius()
    assert x.frobenius(F.r) == x


@given(coeffs)
def test_conj_and_tau(a):
    x = elt(a)
    assert x.conj() == x.frobenius(F.f)
    assert x.conj().conj() == x.tau()
    assert x.tau() == x.frobenius(2 * F.f)


def test_tau_fixes_exactly_the_e_level():
    phi = F.e_embedding()
    for k in range(E.r):
        assert phi(E.element([0] * k + [1])).tau() == phi(E.element([0] * k + [1]))
    assert F.gen().tau() != F.gen()


def test_trace_zero_unit():
    t = F.trace_zero_unit()
    assert t.conj() == -t
    assert t.valuation() == 0


@given(st.lists(st.integers(0, 3 ** 6), min_size=E.r, max_size=E.r),
       st.lists(st.integers(0, 3 ** 6), min_size=E.r, max_size=E.r))
@settings(max_examples=30)
def test_embedding_is_a_homomorphism(a, b):
    phi = embedding(E, F)
    x, y = E.element(a), E.element(b)
    assert phi(x * y) == phi(x) * phi(y)
    assert phi(x + y) == phi(x) + phi(y)
    assert phi(x.frobenius()) == phi(x).frobenius()


@given(coeffs, st.integers(-2, 4))
def test_json_round_trip(a, s):
    x = elt(a, s)
    assert F.from_json(x.to_json()) == x


def test_residue_lift():
    for code in range(F.residue.order):
        assert F.from_residue(code).residue() == code


def test_precision_is_tracked():
    x = F.element([1], 0)
    assert x + F.pi_power(F.N + 10) == x  # below the precision cap
    assert F.element([1], 0, prec=8).certainly_at_least(0)
    assert F.zero(prec=20).certainly_at_least(5)
    with pytest.raises(PrecisionError):
        F.zero(prec=3).certainly_at_least(5)  # an unknown zero cannot certify


def test_guard_band_enforced():
    with pytest.raises(PrecisionError):
        F.element([1], 0, prec=F.guard - 1)
