"""Truncated formal power series with exact rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Mapping

from .errors import DomainError

__all__ = [
    "DomainError",
    "PSeries",
    "add",
    "mul",
    "negate",
    "compose",
    "revert",
    "revert_newton",
    "first_negative",
    "odd_reflect",
    "parse_sparse_spec",
]




def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(x)


class PSeries:
    """Series ``sum c_k t^k`` known exactly for ``0 <= k <= trunc``.

    Coefficients are kept sparse: zero coefficients are never stored.
    """

    __slots__ = ("trunc", "_c")

    def __init__(self, coeffs: Mapping[int, object] | None = None, trunc: int = 0):
        if trunc < 0:
            raise ValueError("trunc must be non-negative")
        self.trunc = trunc
        c = {}
        for k, v in (coeffs or {}).items():
            if k < 0:
                raise ValueError(f"negative exponent {k}")
            if k > trunc:
                continue
            v = _frac(v)
            if v:
                c[k] = v
        self._c = c

    @classmethod
    def from_list(cls, coeffs: Iterable, trunc: int | None = None) -> "PSeries":
        coeffs = list(coeffs)
        if trunc is None:
            trunc = len(coeffs) - 1
        return cls(dict(enumerate(coeffs)), max(trunc, 0))

    @classmethod
    def t(cls, trunc: int) -> "PSeries":
        return cls({1: 1}, trunc)

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def __getitem__(self, k: int) -> Fraction:
        if k > self.trunc:
            raise IndexError(f"coefficient t^{k} is beyond truncation order {self.trunc}")
        return self._c.get(k, Fraction(0))

    def support(self) -> list[int]:
        return sorted(self._c)

    def to_list(self) -> list[Fraction]:
        return [self._c.get(k, Fraction(0)) for k in range(self.trunc + 1)]

    def truncate(self, trunc: int) -> "PSeries":
        return PSeries(self._c, min(trunc, self.trunc))

    def is_zero(self) -> bool:
        return not self._c

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._c.values())

    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return self.trunc == other.trunc and self._c == other._c

    def __hash__(self):
        return hash((self.trunc, frozenset(self._c.items())))

    def __add__(self, other):
        return add(self, _coerce(other, self.trunc))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, negate(_coerce(other, self.trunc)))

    def __rsub__(self, other):
        return add(_coerce(other, self.trunc), negate(self))

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, PSeries):
            return mul(self, other)
        k = _frac(other)
        return PSeries({e: v * k for e, v in self._c.items()}, self.trunc)

    __rmul__ = __mul__

    def __call__(self, g: "PSeries") -> "PSeries":
        return compose(self, g)

    def __repr__(self):
        return f"PSeries({self.format()}, trunc={self.trunc})"

    def format(self, var: str = "t") -> str:
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            v = self._c[k]
            sign = "-" if v < 0 else "+"
            a = abs(v)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {
            "trunc": self.trunc,
            "coeffs": [[k, str(v.numerator), str(v.denominator)] for k, v in sorted(self._c.items())],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PSeries":
        coeffs = {int(k): Fraction(int(num), int(den)) for k, num, den in obj["coeffs"]}
        return cls(coeffs, int(obj["trunc"]))


def _coerce(x, trunc: int) -> PSeries:
    if isinstance(x, PSeries):
        return x
    return PSeries({0: _frac(x)}, trunc)


def add(a: PSeries, b: PSeries) -> PSeries:
    trunc = min(a.trunc, b.trunc)
    c = {k: v for k, v in a._c.items() if k <= trunc}
    for k, v in b._c.items():
        if k <= trunc:
            c[k] = c.get(k, 0) + v
    return PSeries(c, trunc)


def negate(a: PSeries) -> PSeries:
    return PSeries({k: -v for k, v in a._c.items()}, a.trunc)


def mul(a: PSeries, b: PSeries) -> PSeries:
    trunc = min(a.trunc, b.trunc)
    c: dict[int, Fraction] = {}
    bi = sorted(b._c.items())
    for i, u in a._c.items():
        if i > trunc:
            continue
        for j, v in bi:
            k = i + j
            if k > trunc:
                break
            c[k] = c.get(k, 0) + u * v
    return PSeries(c, trunc)


def compose(f: PSeries, g: PSeries) -> PSeries:
    """``f(g(t))``; ``g`` must have zero constant term."""
    if g[0] != 0:
        raise DomainError("composition requires g(0) = 0")
    trunc = min(f.trunc, g.trunc)
    g = g.truncate(trunc)
    out = PSeries({0: f[0]}, trunc)
    power = PSeries({0: 1}, trunc)
    top = max((k for k in f.support() if k <= trunc), default=0)
    for k in range(1, top + 1):
        power = mul(power, g)
        fk = f[k]
        if fk:
            out = add(out, power * fk)
    return out


def odd_reflect(f: PSeries) -> PSeries:
    """``-f(-t)``: the coefficient of ``t^k`` picks up ``(-1)^(k+1)``."""
    return PSeries({k: (v if k % 2 else -v) for k, v in f._c.items()}, f.trunc)


def first_negative(f: PSeries) -> int | None:
    """Smallest exponent with a strictly negative coefficient."""
    neg = [k for k, v in f._c.items() if v < 0]
    return min(neg) if neg else None


def _check_revertible(f: PSeries) -> None:
    if f.trunc < 1 or f[0] != 0 or f[1] != 1:
        raise DomainError("reversion needs f(0) = 0 and unit coefficient of t")


def _stride(exponents: Iterable[int]) -> int:
    """Largest s such that every exponent of ``f - t`` is 1 mod s (0 if ``f = t``)."""
    return reduce(gcd, (k - 1 for k in exponents), 0)


def revert(f: PSeries, order: int) -> PSeries:
    """Compositional inverse ``h`` of ``f`` with ``f(h(t)) = t`` up to ``t^order``.

    The result is truncated at ``min(order, f.trunc)``.  If ``f - t`` is
    supported on exponents ``1 + s*j`` the inverse is supported there too, and
    the loop only visits that residue class.  Write ``h = t*v(x)`` with
    ``x = t^s``; then ``v = 1 - sum_j a_j x^j v^(1+s*j)`` and the powers of ``v``
    are advanced with the J.C.P. Miller recurrence, so each new coefficient
    costs one pass over the earlier ones per nonzero term of ``f``.
    """
    _check_revertible(f)
    N = min(order, f.trunc)
    rest = {k: v for k, v in f._c.items() if k >= 2}
    s = _stride(rest)
    if s == 0 or N < 2:
        return PSeries({1: 1}, N)
    K = (N - 1) // s
    terms = sorted(((k - 1) // s, v) for k, v in rest.items() if (k - 1) // s <= K)
    integral = all(v.denominator == 1 for _, v in terms)
    if integral:
        terms = [(j, int(v)) for j, v in terms]
    v, _ = _revert_kernel(terms, s, K, integral)
    return PSeries({1 + s * k: c for k, c in enumerate(v) if c}, N)


def _revert_kernel(terms, s: int, K: int, integral: bool, state=None, progress=None):
    """Coefficients ``v_0..v_K`` of ``v`` (see :func:`revert`).

    Returns ``(v, powers)``.  Passing the pair back as ``state`` continues
    the computation to a larger ``K`` without redoing earlier coefficients.
    """
    one = 1 if integral else Fraction(1)
    if state is None:
        v = [one]
        # powers[idx] holds coefficients of v^p for p = 1 + s*j
        powers = [[one] for _ in terms]
    else:
        v, powers = state
    exps = [1 + s * j for j, _ in terms]
    for k in range(len(v), K + 1):
        acc = 0
        for idx, (j, a) in enumerate(terms):
            if j > k:
                continue
            w = powers[idx]
            while len(w) <= k - j:
                w.append(_power_step(v, w, exps[idx], integral))
            acc -= a * w[k - j]
        v.append(acc)
        if progress is not None:
            progress(k, K)
    return v, powers


def _power_step(v, w, p: int, integral: bool):
    # q * w_q = sum_{i=1..q} ((p+1) i - q) v_i w_{q-i}
    q = len(w)
    total = 0
    p1 = p + 1
    for i in range(1, q + 1):
        vi = v[i]
        if vi:
            total += (p1 * i - q) * vi * w[q - i]
    if integral:
        quo, r = divmod(total, q)
        if r:
            raise ArithmeticError("non-integral power coefficient")
        return quo
    return Fraction(total) / q


def _inverse(f: PSeries) -> PSeries:
    """Multiplicative inverse of a series with ``f(0) = 1``."""
    a = f.to_list()
    N = f.trunc
    b = [Fraction(1)]
    for k in range(1, N + 1):
        b.append(-sum((a[i] * b[k - i] for i in range(1, k + 1)), Fraction(0)))
    return PSeries.from_list(b, N)


def _derivative(f: PSeries) -> PSeries:
    return PSeries({k - 1: k * v for k, v in f._c.items() if k >= 1}, max(f.trunc - 1, 0))


def revert_newton(f: PSeries, order: int) -> PSeries:
    """Compositional inverse by Newton iteration (precision doubles each step).

    ``h <- h - (f(h) - t) / f'(h)``.  Slower than :func:`revert` for the
    sparse series used here; kept as an independent route to the same answer.
    """
    _check_revertible(f)
    N = min(order, f.trunc)
    df = _derivative(f)
    h = PSeries({1: 1}, 1)
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        h = PSeries(h.coeffs, prec)
        fh = compose(f.truncate(prec), h)
        resid = fh - PSeries.t(prec)
        dfh = compose(PSeries(df.coeffs, prec), h)
        h = h - mul(resid, _inverse(dfh))
    return PSeries(h.coeffs, N)


def parse_sparse_spec(spec: str, trunc: int) -> PSeries:
    """Parse ``"1:1,-1:8,1:15"`` (coefficient:exponent pairs) into a series."""
    coeffs: dict[int, Fraction] = {}
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            c, e = item.split(":")
            k = int(e)
            coeffs[k] = coeffs.get(k, Fraction(0)) + Fraction(c.strip())
        except ValueError as exc:
            raise DomainError(f"bad sparse term {item!r}; expected coefficient:exponent") from exc
    return PSeries(coeffs, trunc)
