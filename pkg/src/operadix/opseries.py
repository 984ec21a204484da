"""Poincaré series of the four n-ary families and the tests built on them.

Conventions: the series of an operad is ``sum_a chi(P(a)) t^a / a!``.  All
four families have planar weight-``l`` components in arity ``l(n-1)+1`` that
carry a free symmetric-group action, so the coefficient there is
``(-1)^(l d)`` times the planar dimension.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Callable, NamedTuple

from . import freeoperad
from .freeoperad import Family
from .pseries import DomainError, PSeries, _revert_kernel, compose, mul, odd_reflect, revert

__all__ = [
    "Family",
    "FamilyId",
    "KoszulVerdict",
    "ScanResult",
    "KOSZUL",
    "NOT_KOSZUL",
    "CONJECTURED_NOT_KOSZUL",
    "UNKNOWN",
    "KNOWN_FIRST_NEGATIVE",
    "poincare",
    "a_coeffs",
    "gk_residual",
    "koszul_verdict",
    "necessary_koszul_scan",
    "trinomial",
    "lagrange_coefficient",
    "discriminant_obstruction",
    "minimal_generator_euler",
    "pa_functional_equation_check",
]

KOSZUL = "Koszul"
NOT_KOSZUL = "NotKoszul"
CONJECTURED_NOT_KOSZUL = "ConjecturedNotKoszul"
UNKNOWN = "Unknown"

# exponent of the first negative coefficient of the inverse of t - t^n + t^(2n-1)
KNOWN_FIRST_NEGATIVE = {2: 5, 3: 11, 4: 25, 5: 57, 6: 161, 7: 1171}

QUOTIENT_WEIGHT_CEILING = 6


class FamilyId(NamedTuple):
    family: str
    n: int
    d: int

    def check(self) -> "FamilyId":
        if self.family not in Family.ALL:
            raise DomainError(f"unknown family {self.family!r}; expected one of {', '.join(Family.ALL)}")
        if self.n < 2:
            raise DomainError("arity must be at least 2")
        return self

    def to_json(self) -> dict:
        return {"family": self.family, "n": self.n, "d": self.d}


@dataclass(frozen=True)
class KoszulVerdict:
    status: str
    justification: str


@dataclass(frozen=True)
class ScanResult:
    n: int
    bound: int
    first_negative: int | None

    @property
    def status(self) -> str:
        return "not_koszul" if self.first_negative is not None else "inconclusive"

    def to_json(self) -> dict:
        out = {"family": Family.TOT, "n": self.n, "d": 1, "status": self.status, "bound": self.bound}
        if self.first_negative is not None:
            out["first_negative"] = self.first_negative
        return out


# --- A^n_l ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def _a_tuple(n: int, L: int) -> tuple[int, ...]:
    # A_l = [x^(l-1)] A(x)^(n-1): the sum over (n-1)-tuples of the products
    a = [1]
    for l in range(1, L + 1):
        p = [1]
        for _ in range(n - 1):
            q = [0] * l
            for i, x in enumerate(p):
                if x:
                    for j in range(min(l - i, len(a))):
                        q[i + j] += x * a[j]
            p = q
        a.append(p[l - 1])
    return tuple(a)


def a_coeffs(n: int, L: int) -> list[int]:
    """``A^n_0 .. A^n_L``."""
    if n < 2 or L < 0:
        raise DomainError("need n >= 2 and L >= 0")
    return list(_a_tuple(n, L))


def _comb_series(n: int, order: int, sign: Callable[[int], int], a: list[int] | None = None) -> PSeries:
    L = (order - 1) // (n - 1)
    a = a if a is not None else a_coeffs(n, L)
    return PSeries({l * (n - 1) + 1: sign(l) * a[l] for l in range(min(L, len(a) - 1) + 1)}, order)


# --- Poincaré series -------------------------------------------------------------

def _tot_ass(n: int, d: int, order: int) -> PSeries:
    if d % 2 == 0:
        return PSeries({k: 1 for k in range(1, order + 1, n - 1)}, order)
    return PSeries({1: 1, n: -1, 2 * n - 1: 1}, order)


@lru_cache(maxsize=None)
def _planar_quotient(family: str, n: int, d: int, l: int) -> int:
    return freeoperad.quotient_dim(freeoperad.standard_relations(family, n, d), l).planar


def _quotient_series(family: str, n: int, d: int, order: int, ceiling: int) -> PSeries:
    coeffs = {}
    for l in range((order - 1) // (n - 1) + 1):
        if l > ceiling:
            warnings.warn(f"computing weight {l} of {family}^{n}_{d} by exact rank; this is slow",
                          stacklevel=3)
        dim = _planar_quotient(family, n, d, l)
        coeffs[l * (n - 1) + 1] = (-1) ** (l * d % 2) * dim
        if dim == 0:
            # every higher monomial contains a weight-l piece, so the ideal fills it too
            break
    return PSeries(coeffs, order)


def poincare(fam: FamilyId, order: int, ceiling: int = QUOTIENT_WEIGHT_CEILING) -> PSeries:
    """Poincaré series up to ``t^order``.

    Closed forms are used where available; the partially associative cells
    without one fall back to exact quotient dimensions, weight by weight.
    """
    family, n, d = fam.check()
    if order < 1:
        raise DomainError("order must be at least 1")
    if family == Family.TOT:
        return _tot_ass(n, d, order)
    if family == Family.TOT_TILDE:
        return odd_reflect(_tot_ass(n, d - n + 1, order))
    if family == Family.PART:
        if (n - d) % 2 == 0:
            return _comb_series(n, order, lambda l: (-1) ** (l * n))
        return _quotient_series(family, n, d, order, ceiling)
    if d % 2:
        return _comb_series(n, order, lambda l: (-1) ** l)
    return _quotient_series(family, n, d, order, ceiling)


def gk_residual(g_p: PSeries, g_dual: PSeries) -> PSeries:
    """``g_P(-g_dual(-t)) - t``; zero when the necessary Koszul condition holds."""
    for g in (g_p, g_dual):
        if g.trunc < 1 or g[0] != 0 or g[1] != 1:
            raise DomainError("series must start with t")
    inner = odd_reflect(g_dual)
    return compose(g_p, inner) - PSeries.t(min(g_p.trunc, g_dual.trunc))


# --- Koszulity -----------------------------------------------------------------

def _koszul_cell(family: str, n: int, d: int) -> bool:
    if family == Family.TOT:
        return d % 2 == 0
    if family == Family.PART:
        return (n - d) % 2 == 0
    if family == Family.TOT_TILDE:
        return (n - d) % 2 == 1
    return d % 2 == 1


def koszul_verdict(fam: FamilyId) -> KoszulVerdict:
    family, n, d = fam.check()
    if _koszul_cell(family, n, d):
        return KoszulVerdict(KOSZUL, "table cell: Koszul")
    if n >= 8:
        return KoszulVerdict(
            CONJECTURED_NOT_KOSZUL,
            "table cell: not Koszul, conjectural for n >= 8 (no negative coefficient found by scanning)",
        )
    return KoszulVerdict(
        NOT_KOSZUL,
        f"table cell: not Koszul; inverse series has a negative coefficient at t^{KNOWN_FIRST_NEGATIVE[n]}",
    )


def trinomial(n: int, order: int | None = None) -> PSeries:
    """``t - t^n + t^(2n-1)``."""
    return PSeries({1: 1, n: -1, 2 * n - 1: 1}, order if order is not None else 2 * n - 1)


def necessary_koszul_scan(n: int, bound: int, state=None, progress=None) -> tuple[ScanResult, tuple]:
    """Revert ``t - t^n + t^(2n-1)`` up to ``t^bound`` and find the first negative coefficient.

    Only exponents ``1 + k(n-1)`` can be nonzero; the kernel state returned
    alongside the result can be passed back to extend the scan.
    """
    if n < 2:
        raise DomainError("arity must be at least 2")
    if bound < 2 * n - 1:
        raise DomainError(f"bound must be at least {2 * n - 1}")
    s = n - 1
    K = (bound - 1) // s
    v, powers = _revert_kernel([(1, -1), (2, 1)], s, K, True, state=state, progress=progress)
    neg = next((1 + s * k for k in range(K + 1) if v[k] < 0), None)
    return ScanResult(n, bound, neg), (v, powers)


def lagrange_coefficient(n: int, k: int) -> int:
    """``[t^m]`` of the inverse of the trinomial, ``m = k(n-1)+1``, by Lagrange inversion.

    ``(1/m) [u^k] (1 - u + u^2)^(-m)`` with ``(1 - u + u^2)^(-1) = (1+u)/(1+u^3)``.
    Independent of the recurrence; slow for large ``k``.
    """
    from math import comb

    m = k * (n - 1) + 1
    total = sum((-1) ** i * comb(m + i - 1, i) * comb(m, k - 3 * i) for i in range(k // 3 + 1))
    q, r = divmod(total, m)
    if r:
        raise ArithmeticError("Lagrange coefficient is not integral")
    return q


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def discriminant_obstruction(n: int) -> dict:
    """Where the critical points of ``t - t^n + t^(2n-1)`` are real.

    With ``w = z^(n-1)`` the derivative vanishes when
    ``(2n-1) w^2 - n w + 1 = 0``, discriminant ``n^2 - 8n + 4``.  Negative
    discriminant means no real critical point, which is what the
    non-Koszulity argument needs.
    """
    if n < 2:
        raise DomainError("arity must be at least 2")
    disc = n * n - 8 * n + 4
    points = []
    if disc >= 0:
        r = isqrt(disc)
        exact = r * r == disc
        for sgn in (1, -1) if disc else (1,):
            if exact:
                w = Fraction(n + sgn * r, 2 * (2 * n - 1))
                wtxt = _fraction_str(w)
            else:
                w = None
                wtxt = f"({n} {'+' if sgn > 0 else '-'} sqrt({disc}))/{2 * (2 * n - 1)}"
            k = n - 1
            roots = [f"({wtxt})^(1/{k})"]
            if k % 2 == 0:
                roots.append(f"-({wtxt})^(1/{k})")
            points.append({"w": wtxt, "rational": exact, "roots": roots})
    return {"n": n, "discriminant": disc, "method_applies": disc < 0, "real_critical_points": points}


def minimal_generator_euler(g: PSeries, max_arity: int) -> list[Fraction]:
    """``chi(E(a))`` for ``a = 2..max_arity``: ``(-1)^a [t^a]`` of the inverse of ``-g(-t)``."""
    if g.trunc < 1 or g[0] != 0 or g[1] != 1:
        raise DomainError("series must start with t")
    h = revert(odd_reflect(g.truncate(max_arity)), max_arity)
    return [(-1) ** a * h[a] for a in range(2, max_arity + 1)]


_EULER_REFERENCE = [1, -1, 0, 4, -14, 30, -33, -55]


def _validate_euler_sign_rule() -> None:
    got = minimal_generator_euler(PSeries({1: 1, 2: 1, 3: 1}, 9), 9)
    if got != _EULER_REFERENCE:
        raise ImportError(f"Euler characteristic sign rule is inconsistent: {got}")


_validate_euler_sign_rule()


def pa_functional_equation_check(n: int, order: int, a: list[int] | None = None) -> bool:
    """Check ``f = t (1 + (-1)^n f^(n-1))`` for ``f = sum (-1)^(ln) A_l t^(l(n-1)+1)``."""
    if n < 2:
        raise DomainError("arity must be at least 2")
    f = _comb_series(n, order, lambda l: (-1) ** (l * n), a)
    power = PSeries({0: 1}, order)
    for _ in range(n - 1):
        power = mul(power, f)
    rhs = mul(PSeries.t(order), PSeries({0: 1}, order) + power * (-1) ** n)
    return rhs == f
