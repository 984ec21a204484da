import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from operadix.pseries import (
    DomainError,
    PSeries,
    add,
    compose,
    first_negative,
    mul,
    negate,
    odd_reflect,
    parse_sparse_spec,
    revert,
    revert_newton,
)


def S(d, n):
    return PSeries(d, n)


T = PSeries.t


def test_arithmetic():
    assert add(T(5), T(5)) == S({1: 2}, 5)
    assert mul(S({1: 1, 2: -1}, 6), S({0: 1, 1: 1}, 6)) == S({1: 1, 3: -1}, 6)
    assert negate(T(3)) == S({1: -1}, 3)


def test_sparse_canonical_form():
    s = S({1: 1, 2: 0, 3: Fraction(0)}, 5)
    assert s.support() == [1]
    assert S({1: 1}, 5) != S({1: 1}, 6)


def test_mixed_truncation_uses_minimum():
    assert (S({1: 1, 8: 1}, 10) + S({1: 1}, 4)).trunc == 4
    assert mul(S({1: 1}, 10), S({1: 1}, 3)).trunc == 3


def test_geometric_series():
    for n in (2, 3, 5):
        g = S({k: 1 for k in range(1, 31, n - 1)}, 30)
        assert mul(g, S({0: 1, n - 1: -1}, 30)) == T(30)


def test_compose_examples():
    f = S({1: 3, 2: -1, 4: 7}, 8)
    assert compose(f, T(8)) == f
    assert compose(S({2: 1}, 6), S({1: 1, 2: 1}, 6)) == S({2: 1, 3: 2, 4: 1}, 6)


def test_compose_requires_zero_constant():
    with pytest.raises(DomainError):
        compose(T(4), S({0: 1, 1: 1}, 4))


REVERSIONS = [
    ({1: 1, 2: -1, 3: 1}, 9, {1: 1, 2: 1, 3: 1, 5: -4, 6: -14, 7: -30, 8: -33, 9: 55}),
    ({1: 1, 3: -1, 5: 1}, 13, {1: 1, 3: 1, 5: 2, 7: 4, 9: 5, 11: -13, 13: -147}),
    ({1: 1, 4: -1, 7: 1}, 25, {1: 1, 4: 1, 7: 3, 10: 11, 13: 42, 16: 153, 19: 469, 22: 690, 25: -5967}),
]


@pytest.mark.parametrize("f, order, expected", REVERSIONS)
def test_reversion_values(f, order, expected):
    h = revert(S(f, order), order)
    assert h == S(expected, order)
    assert compose(S(f, order), h) == T(order)


@pytest.mark.parametrize("f, order, expected", REVERSIONS)
def test_newton_agrees_with_recurrence(f, order, expected):
    assert revert_newton(S(f, order), order) == revert(S(f, order), order)


def test_revert_identity():
    assert revert(T(40), 40) == T(40)


def test_revert_preconditions():
    with pytest.raises(DomainError):
        revert(S({0: 1, 1: 1}, 5), 5)
    with pytest.raises(DomainError):
        revert(S({1: 2}, 5), 5)


def test_first_negative():
    assert first_negative(revert(S({1: 1, 2: -1, 3: 1}, 9), 9)) == 5
    assert first_negative(S({1: 1, 2: 1}, 5)) is None
    assert first_negative(revert(S({1: 1, 5: -1, 9: 1}, 60), 60)) == 57


def test_odd_reflect():
    assert odd_reflect(S({1: 1, 2: 1, 3: 1}, 3)) == S({1: 1, 2: -1, 3: 1}, 3)
    for n in (2, 3, 4):
        f = S({1: 1, n: -1, 2 * n - 1: 1}, 2 * n - 1)
        assert odd_reflect(f)[n] == (1 if n % 2 == 0 else -1)
        assert odd_reflect(f)[2 * n - 1] == 1


def test_json_roundtrip():
    h = revert(S({1: 1, 4: -1, 7: 1}, 25), 25)
    obj = json.loads(json.dumps(h.to_json()))
    assert obj["trunc"] == 25
    assert [25, "-5967", "1"] in obj["coeffs"]
    assert PSeries.from_json(obj) == h


def test_parse_sparse_spec():
    assert parse_sparse_spec("1:1,-1:8,1:15", 15) == S({1: 1, 8: -1, 15: 1}, 15)
    assert parse_sparse_spec("1:1, 1/2:3", 5)[3] == Fraction(1, 2)
    with pytest.raises(DomainError):
        parse_sparse_spec("1-1", 5)


def test_rational_reversion():
    f = S({1: 1, 2: Fraction(1, 2)}, 10)
    h = revert(f, 10)
    assert compose(f, h) == T(10)
    assert revert_newton(f, 10) == h


unit_series = st.builds(
    lambda tail, n: S({1: 1, **{k + 2: c for k, c in enumerate(tail)}}, n),
    st.lists(st.integers(-5, 5), max_size=8),
    st.integers(2, 12),
)


@given(unit_series)
def test_reversion_roundtrip(f):
    N = f.trunc
    h = revert(f, N)
    assert compose(f, h) == T(N)
    assert compose(h, f) == T(N)


@given(unit_series)
def test_reversion_integral(f):
    assert revert(f, f.trunc).is_integral()


@given(unit_series)
def test_odd_reflect_commutes_with_revert(f):
    assert odd_reflect(odd_reflect(f)) == f
    assert revert(odd_reflect(f), f.trunc) == odd_reflect(revert(f, f.trunc))


@pytest.mark.parametrize("n", range(2, 9))
def test_trinomial_inverse_is_sparse(n):
    N = 12 * (n - 1) + 1
    h = revert(S({1: 1, n: -1, 2 * n - 1: 1}, N), N)
    assert all((k - 1) % (n - 1) == 0 for k in h.support())
