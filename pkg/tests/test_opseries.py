import warnings

import pytest

from operadix import opseries, trees
from operadix.freeoperad import Family
from operadix.opseries import (
    CONJECTURED_NOT_KOSZUL,
    KOSZUL,
    NOT_KOSZUL,
    FamilyId,
    a_coeffs,
    discriminant_obstruction,
    gk_residual,
    koszul_verdict,
    lagrange_coefficient,
    minimal_generator_euler,
    necessary_koszul_scan,
    pa_functional_equation_check,
    poincare,
)
from operadix.pseries import DomainError, PSeries, odd_reflect, revert


def S(d, n):
    return PSeries(d, n)


def test_tot_series():
    assert poincare(FamilyId(Family.TOT, 2, 1), 3) == S({1: 1, 2: -1, 3: 1}, 3)
    assert poincare(FamilyId(Family.TOT, 3, 0), 9) == S({1: 1, 3: 1, 5: 1, 7: 1, 9: 1}, 9)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("d", [0, 1])
@pytest.mark.parametrize("kind", [Family.TOT, Family.TOT_TILDE])
def test_only_parity_matters(kind, n, d):
    assert poincare(FamilyId(kind, n, d), 20) == poincare(FamilyId(kind, n, d + 2), 20)


def test_part_non_koszul_series():
    assert poincare(FamilyId(Family.PART, 3, 0), 11) == S(
        {1: 1, 3: 1, 5: 2, 7: 4, 9: 5, 11: 6}, 11
    )


def test_anti_associative_series():
    assert poincare(FamilyId(Family.PART_TILDE, 2, 0), 12) == S({1: 1, 2: 1, 3: 1}, 12)


@pytest.mark.parametrize("n", [2, 3])
def test_part_tilde_is_reflected_part(n):
    # suspension relates the two families: PartAssTilde at d is odd_reflect of PartAss at d - n + 1
    order = 3 * (n - 1) + 1
    for d in (0, 1):
        own = poincare(FamilyId(Family.PART_TILDE, n, d), order)
        other = poincare(FamilyId(Family.PART, n, d - n + 1), order)
        assert own == odd_reflect(other)


def test_expensive_path_warns():
    with pytest.warns(UserWarning):
        poincare(FamilyId(Family.PART, 3, 0), 7, ceiling=2)


def test_family_check():
    with pytest.raises(DomainError):
        poincare(FamilyId("Lie", 3, 0), 5)
    with pytest.raises(DomainError):
        poincare(FamilyId(Family.TOT, 1, 0), 5)


def test_a_coeffs():
    assert a_coeffs(3, 10) == [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796]
    assert a_coeffs(2, 12) == [1] * 13
    assert a_coeffs(4, 4) == [1, 1, 3, 12, 55]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_a_coeffs_count_combs(n):
    assert a_coeffs(n, 8) == [trees.count_scomb(n, l) for l in range(9)]


def test_gk_residual_examples():
    t = PSeries.t(10)
    assert gk_residual(t, t).is_zero()
    r = gk_residual(poincare(FamilyId(Family.TOT, 3, 0), 31), poincare(FamilyId(Family.PART, 3, 1), 31))
    assert r.is_zero()
    anti = poincare(FamilyId(Family.TOT, 2, 1), 12)
    r = gk_residual(anti, anti)
    assert not r.is_zero()
    assert r == S({5: 4, 6: 6, 7: 6, 8: 3, 9: 1}, 12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_gk_koszul_cells(n):
    for d in (0, 2):
        tot = poincare(FamilyId(Family.TOT, n, d), 31)
        part = poincare(FamilyId(Family.PART, n, -d + n - 2), 31)
        assert gk_residual(tot, part).is_zero()
        assert gk_residual(part, tot).is_zero()


def test_gk_preconditions():
    with pytest.raises(DomainError):
        gk_residual(S({1: 2}, 5), PSeries.t(5))


def test_verdicts():
    assert koszul_verdict(FamilyId(Family.TOT, 3, 0)).status == KOSZUL
    assert koszul_verdict(FamilyId(Family.PART_TILDE, 2, 0)).status == NOT_KOSZUL
    assert koszul_verdict(FamilyId(Family.TOT, 8, 1)).status == CONJECTURED_NOT_KOSZUL


@pytest.mark.parametrize("n", range(2, 11))
@pytest.mark.parametrize("d", range(-2, 3))
def test_verdict_table(n, d):
    tot = koszul_verdict(FamilyId(Family.TOT, n, d)).status
    part = koszul_verdict(FamilyId(Family.PART, n, d)).status
    # duality and suspension preserve Koszulity
    assert (tot == KOSZUL) == (d % 2 == 0)
    assert (part == KOSZUL) == (koszul_verdict(FamilyId(Family.TOT, n, -d + n - 2)).status == KOSZUL)
    assert (koszul_verdict(FamilyId(Family.TOT_TILDE, n, d)).status == KOSZUL) == (
        koszul_verdict(FamilyId(Family.TOT, n, d - n + 1)).status == KOSZUL
    )
    for kind in Family.ALL:
        v = koszul_verdict(FamilyId(kind, n, d)).status
        if v == CONJECTURED_NOT_KOSZUL:
            assert n >= 8
        if n >= 8:
            assert v != NOT_KOSZUL


@pytest.mark.parametrize("n, bound, expected", [(2, 10, 5), (3, 20, 11), (4, 30, 25), (5, 60, 57), (6, 170, 161)])
def test_scan_known(n, bound, expected):
    res, _ = necessary_koszul_scan(n, bound)
    assert res.first_negative == expected == opseries.KNOWN_FIRST_NEGATIVE[n]
    assert res.status == "not_koszul"
    assert res.to_json()["first_negative"] == expected


def test_scan_resumes():
    res1, state = necessary_koszul_scan(6, 100)
    assert res1.first_negative is None
    assert res1.to_json() == {"family": "TotAss", "n": 6, "d": 1, "status": "inconclusive", "bound": 100}
    res2, _ = necessary_koszul_scan(6, 170, state=state)
    fresh, _ = necessary_koszul_scan(6, 170)
    assert res2 == fresh


def test_scan_preconditions():
    with pytest.raises(DomainError):
        necessary_koszul_scan(1, 10)
    with pytest.raises(DomainError):
        necessary_koszul_scan(5, 8)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_scan_matches_lagrange(n):
    N = 40 * (n - 1) + 1
    h = revert(S({1: 1, n: -1, 2 * n - 1: 1}, N), N)
    for k in range(41):
        assert h[k * (n - 1) + 1] == lagrange_coefficient(n, k)


def test_discriminant():
    r7 = discriminant_obstruction(7)
    assert r7["discriminant"] == -3 and r7["method_applies"] and r7["real_critical_points"] == []
    r2 = discriminant_obstruction(2)
    assert r2["discriminant"] == -8 and r2["method_applies"]
    r8 = discriminant_obstruction(8)
    assert r8["discriminant"] == 4 and not r8["method_applies"]
    assert sorted(p["w"] for p in r8["real_critical_points"]) == ["1/3", "1/5"]
    assert all(p["rational"] for p in r8["real_critical_points"])
    assert "(1/3)^(1/7)" in r8["real_critical_points"][0]["roots"] + r8["real_critical_points"][1]["roots"]


def test_discriminant_irrational_roots():
    r = discriminant_obstruction(9)
    assert r["discriminant"] == 13
    assert not any(p["rational"] for p in r["real_critical_points"])


def test_euler():
    assert minimal_generator_euler(S({1: 1, 2: 1, 3: 1}, 9), 9) == [1, -1, 0, 4, -14, 30, -33, -55]
    assert minimal_generator_euler(PSeries.t(9), 9) == [0] * 8


def test_euler_associative_shape():
    # the inverse of t - t^2 has Catalan coefficients, so the values are signed Catalan numbers
    cat = [1, 2, 5, 14, 42, 132, 429, 1430]
    got = minimal_generator_euler(S({1: 1, 2: 1}, 9), 9)
    assert [abs(x) for x in got] == cat
    assert got == [(-1) ** a * c for a, c in zip(range(2, 10), cat)]


def test_functional_equation():
    assert pa_functional_equation_check(3, 21)
    assert pa_functional_equation_check(2, 20)
    bad = a_coeffs(3, 10)
    bad[2] = 3
    assert not pa_functional_equation_check(3, 21, bad)


def test_euler_sign_rule_is_checked_at_import():
    with warnings.catch_warnings():
        opseries._validate_euler_sign_rule()
