"""Anti-associative algebras and their low-degree cochain complexes.

An algebra on basis ``e_0..e_{m-1}`` is given by structure constants
``table[i][j][k]``, the ``e_k`` coordinate of ``e_i e_j``.  A ``p``-cochain is
a ``p``-linear map ``V^p -> V`` stored sparsely as ``{(i_1, .., i_p, k): c}``;
the level-4 deformation cochain has four such 5-linear components.

Differentials are evaluated from small expression trees (products and one
cochain call over the input letters), which keeps the sparse structure of
the free algebras intact.
"""
from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import exactla
from .errors import DomainError
from .exactla import QMatrix
from .freeoperad import mono_labels
from .minimodel import MU5, builtin_model

__all__ = [
    "DomainError",
    "ShapeError",
    "AntiAssocAlgebra",
    "Cochain",
    "validate",
    "free_antiassoc",
    "zero_algebra",
    "adjoin_unit",
    "unital_collapse",
    "delta1",
    "delta2",
    "delta3_printed",
    "delta3_derived",
    "standard_cohomology_dims",
    "deformation_h_dims",
    "random_algebra",
    "random_cochain",
    "multiplication_cochain",
    "delta3_diff",
]


class ShapeError(DomainError):
    """Cochain and algebra dimensions do not match."""


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point structure constants are not allowed")
    return Fraction(x)


@dataclass
class AntiAssocAlgebra:
    dim: int
    basis: list[str]
    table: list[list[list[Fraction]]]
    _rows: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        m = self.dim
        if len(self.basis) != m:
            raise ShapeError("basis length differs from dim")
        if len(self.table) != m or any(len(r) != m or any(len(v) != m for v in r) for r in self.table):
            raise ShapeError(f"table must be {m} x {m} x {m}")
        self.table = [[[_frac(x) for x in v] for v in r] for r in self.table]

    @classmethod
    def from_triples(cls, dim: int, triples: Mapping[tuple[int, int, int], object], basis=None):
        t = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j, k), c in triples.items():
            t[i][j][k] += _frac(c)
        return cls(dim, list(basis) if basis else [f"e{i}" for i in range(dim)], t)

    def rows(self) -> dict[int, list[tuple[int, int, Fraction]]]:
        """``p -> [(q, k, c)]`` over nonzero ``c = table[p][q][k]``."""
        if self._rows is None:
            out: dict = defaultdict(list)
            for p, q, k in product(range(self.dim), repeat=3):
                c = self.table[p][q][k]
                if c:
                    out[p].append((q, k, c))
            self._rows = dict(out)
        return self._rows

    def mul(self, x: Sequence, y: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * self.dim
        for p, row in self.rows().items():
            if x[p]:
                for q, k, c in row:
                    if y[q]:
                        out[k] += x[p] * y[q] * c
        return out

    def tensor(self) -> np.ndarray:
        return np.array(self.table, dtype=object).reshape(self.dim, self.dim, self.dim)

    def is_zero_product(self) -> bool:
        return not self.rows()

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "basis": list(self.basis),
            "table": [[[_fmt(x) for x in v] for v in r] for r in self.table],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "AntiAssocAlgebra":
        m = int(obj["dim"])
        basis = obj.get("basis") or [f"e{i}" for i in range(m)]
        return cls(m, list(basis), [[[Fraction(str(x)) for x in v] for v in r] for r in obj["table"]])

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class Cochain:
    """A ``level``-linear map (levels 1..3), or the four 5-linear components at level 4."""

    level: int
    dim: int
    parts: list[dict[tuple, Fraction]]

    @property
    def arity(self) -> int:
        return 5 if self.level == 4 else self.level

    @classmethod
    def zero(cls, level: int, dim: int) -> "Cochain":
        return cls(level, dim, [{} for _ in range(4 if level == 4 else 1)])

    @classmethod
    def from_dict(cls, level: int, dim: int, entries: Mapping[tuple, object]) -> "Cochain":
        if level not in (1, 2, 3):
            raise ShapeError("use Cochain(...) directly for level 4")
        c = cls.zero(level, dim)
        for key, v in entries.items():
            if len(key) != level + 1 or any(not 0 <= i < dim for i in key):
                raise ShapeError(f"bad index {key} for a level-{level} cochain on dim {dim}")
            v = _frac(v)
            if v:
                c.parts[0][tuple(key)] = v
        return c

    @classmethod
    def from_array(cls, level: int, arr) -> "Cochain":
        arr = np.asarray(arr, dtype=object)
        m = arr.shape[0]
        if arr.shape != (m,) * (level + 1):
            raise ShapeError(f"array shape {arr.shape} is not a level-{level} cochain")
        return cls.from_dict(level, m, {idx: v for idx, v in np.ndenumerate(arr) if v != 0})

    def to_array(self, part: int = 0) -> np.ndarray:
        m = self.dim
        arr = np.empty((m,) * (self.arity + 1), dtype=object)
        arr.fill(Fraction(0))
        for key, v in self.parts[part].items():
            arr[key] = v
        return arr

    def is_zero(self) -> bool:
        return not any(self.parts)

    def nnz(self) -> int:
        return sum(len(p) for p in self.parts)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.level, self.dim, self.parts) == (other.level, other.dim, other.parts)


def zero_algebra(m: int) -> AntiAssocAlgebra:
    return AntiAssocAlgebra.from_triples(m, {})


def multiplication_cochain(alg: AntiAssocAlgebra) -> Cochain:
    return Cochain.from_dict(2, alg.dim, {(p, q, k): c for p, row in alg.rows().items() for q, k, c in row})


# --- algebras -----------------------------------------------------------------

def validate(alg: AntiAssocAlgebra) -> list[tuple[int, int, int]]:
    """Basis triples where ``(ab)c + a(bc)`` is nonzero; empty means anti-associative."""
    m = alg.dim
    basis = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    prods = [[alg.table[i][j] for j in range(m)] for i in range(m)]
    bad = []
    for i, j, k in product(range(m), repeat=3):
        left = alg.mul(prods[i][j], basis[k])
        right = alg.mul(basis[i], prods[j][k])
        if any(x + y for x, y in zip(left, right)):
            bad.append((i, j, k))
    return bad


def free_antiassoc(g: int) -> AntiAssocAlgebra:
    """Free anti-associative algebra on ``g`` generators.

    Basis: letters ``x_i``, words ``(x_i x_j)`` and ``((x_i x_j) x_k)``.
    ``x_i (x_j x_k) = -((x_i x_j) x_k)`` and every product of four or more
    letters vanishes.
    """
    if g < 1:
        raise DomainError("need at least one generator")
    letters = [f"x{i + 1}" for i in range(g)] if g > 1 else ["x"]
    words1 = [(i,) for i in range(g)]
    words2 = [(i, j) for i in range(g) for j in range(g)]
    words3 = [(i, j, k) for i in range(g) for j in range(g) for k in range(g)]
    words = words1 + words2 + words3
    idx = {w: n for n, w in enumerate(words)}

    def name(w):
        if len(w) == 1:
            return letters[w[0]]
        if len(w) == 2:
            return f"({letters[w[0]]}{letters[w[1]]})"
        return f"(({letters[w[0]]}{letters[w[1]]}){letters[w[2]]})"

    triples = {}
    for (i,) in words1:
        for (j,) in words1:
            triples[(idx[(i,)], idx[(j,)], idx[(i, j)])] = 1
        for (j, k) in words2:
            triples[(idx[(i,)], idx[(j, k)], idx[(i, j, k)])] = -1
    for (i, j) in words2:
        for (k,) in words1:
            triples[(idx[(i, j)], idx[(k,)], idx[(i, j, k)])] = 1
    return AntiAssocAlgebra.from_triples(len(words), triples, [name(w) for w in words])


def adjoin_unit(alg: AntiAssocAlgebra) -> tuple[AntiAssocAlgebra, list[Fraction]]:
    """Add a formal two-sided unit ``1``; returns the new algebra and the unit vector."""
    m = alg.dim
    triples = {(p, q, k): c for p, row in alg.rows().items() for q, k, c in row}
    u = m
    for j in range(m + 1):
        triples[(u, j, j)] = 1
        triples[(j, u, j)] = 1
    unit = [Fraction(0)] * m + [Fraction(1)]
    return AntiAssocAlgebra.from_triples(m + 1, triples, list(alg.basis) + ["1"]), unit


def unital_collapse(alg: AntiAssocAlgebra, u: Sequence) -> bool:
    """For a two-sided unit ``u``: is the product identically zero?

    Anti-associativity with ``c = u`` reads ``ab + ab = 0``, so an
    anti-associative algebra with a unit must have zero product.
    Raises ``DomainError`` when ``u`` is not a unit.
    """
    m = alg.dim
    u = [_frac(x) for x in u]
    if len(u) != m:
        raise ShapeError("unit vector has the wrong length")
    for j in range(m):
        e = [Fraction(int(i == j)) for i in range(m)]
        if alg.mul(u, e) != e or alg.mul(e, u) != e:
            raise DomainError("u is not a two-sided unit")
    return alg.is_zero_product()


# --- expression evaluation ----------------------------------------------------
# Terms are nested tuples: ("x", i) is input letter i, ("m", L, R) is the
# algebra product, ("c", A, B, ...) is the cochain applied to its arguments.
# Letters occur once each, left to right, so every subterm covers a
# contiguous run of letters.

def _parse_term(text: str):
    """Parse one printed monomial such as ``(ab)g(c,d,e)`` or ``a(g(b,c,d)e)``."""
    pos = 0
    letters = "abcde"

    def product_of(stop: str):
        factors = []
        while pos < len(text) and text[pos] not in stop:
            factors.append(factor())
        if len(factors) == 1:
            return factors[0]
        if len(factors) == 2:
            return ("m", factors[0], factors[1])
        raise ValueError(f"ambiguous or empty product in {text!r}")

    def factor():
        nonlocal pos
        ch = text[pos]
        if ch in letters:
            pos += 1
            return ("x", letters.index(ch))
        if ch in "gf":
            pos += 2  # name and "("
            args = [product_of(",)")]
            while text[pos] == ",":
                pos += 1
                args.append(product_of(",)"))
            pos += 1
            return ("c",) + tuple(args)
        if ch == "(":
            pos += 1
            inner = product_of(")")
            pos += 1
            return inner
        raise ValueError(f"unexpected {ch!r} in {text!r}")

    text = text.replace(" ", "").replace("·", "")
    t = product_of("")
    return t


def _parse_formula(text: str) -> list[tuple[int, tuple]]:
    out = []
    for tok in text.split():
        sign = -1 if tok[0] == "-" else 1
        out.append((sign, _parse_term(tok.lstrip("+-"))))
    return out


DELTA1 = _parse_formula("+af(b) -f(ab) +f(a)b")
DELTA2 = _parse_formula("+af(b,c) +f(ab,c) +f(a,bc) +f(a,b)c")

# The four components of the level-3 differential, as printed (argument g).
DELTA3_PRINTED_TEXT = (
    "+ag(b,c,de) -g(a,b,c(de)) +(ab)g(c,d,e) -g(ab,cd,e) "
    "+g(ab,c,d)e -g((ab)c,d,e) +g(a,b,c)(de) -g(a,bc,de)",
    "+g((ab)c,d,e) -g(ab,c,d)e +g(a,b,cd)e -g(a,b(cd),e) "
    "+ag(b,cd,e) -g(a,b,(cd)e) +(ab)g(c,d,e) -g(ab,c,de)",
    "+g(a,bc,de) -ag(bc,d,e) +g(a,(bc)d,e) -a(g(b,c,d)e) "
    "+g(a,b,cd)e -g(ab,c,d)e +(g(a,b,c)d)e -g(a(bc),d,e)",
    "+g(ab,cd,e) -g(a,b,(cd)e) +ag(b,cd,e) -g(a,b(cd),e) "
    "+(ag(b,c,d))e -g(a,bc,d)e +(g(a,b,c)d)e -g(ab,c,d)e",
)
DELTA3_PRINTED = tuple(_parse_formula(t) for t in DELTA3_PRINTED_TEXT)


def _term_from_monomial(m) -> tuple:
    """mu3 becomes the cochain, mu2 the product, leaves the letters in order."""
    counter = [0]

    def walk(node):
        if node is None:
            i = counter[0]
            counter[0] += 1
            return ("x", i)
        g = node[0]
        kids = tuple(walk(c) for c in node[1:])
        if g.arity == 2:
            return ("m",) + kids
        if g.arity == 3:
            return ("c",) + kids
        raise DomainError(f"unexpected generator {g.name} in a boundary term")

    return walk(m)


def derived_delta3_terms(model=None) -> tuple[list[tuple[int, tuple]], ...]:
    model = model or builtin_model()
    out = []
    for gen in MU5:
        terms = []
        for m, c in model.rules[gen.name].items():
            if [g.arity for g in mono_labels(m)].count(3) != 1:
                raise DomainError("each boundary term must contain exactly one mu3")
            terms.append((int(c), _term_from_monomial(m)))
        out.append(terms)
    return tuple(out)


def _group(t: Mapping[tuple, object]) -> dict[int, list[tuple[tuple, object]]]:
    g: dict = defaultdict(list)
    for key, v in t.items():
        g[key[-1]].append((key[:-1], v))
    return g


def _eval(node, rows, dim: int, coch: Mapping[tuple, object]) -> dict[tuple, object]:
    kind = node[0]
    if kind == "x":
        return {(i, i): 1 for i in range(dim)}
    if kind == "m":
        X = _group(_eval(node[1], rows, dim, coch))
        Y = _group(_eval(node[2], rows, dim, coch))
        res: dict = defaultdict(int)
        for p, xs in X.items():
            for q, k, c in rows.get(p, ()):
                ys = Y.get(q)
                if not ys:
                    continue
                for kx, vx in xs:
                    vxc = vx * c
                    for ky, vy in ys:
                        res[kx + ky + (k,)] += vxc * vy
        return res
    groups = [_group(_eval(a, rows, dim, coch)) for a in node[1:]]
    res = defaultdict(int)
    for key, c in coch.items():
        parts = [groups[n].get(key[n]) for n in range(len(groups))]
        if not all(parts):
            continue
        out = key[-1]
        for combo in product(*parts):
            v = c
            idx: tuple = ()
            for kx, vx in combo:
                v = v * vx
                idx += kx
            res[idx + (out,)] += v
    return res


def _products(node) -> int:
    if node[0] == "x":
        return 0
    return (node[0] == "m") + sum(_products(a) for a in node[1:])


def _common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    return den


def _apply(formula, alg: AntiAssocAlgebra, coch: Cochain, level_in: int) -> dict[tuple, Fraction]:
    if coch.level != level_in:
        raise ShapeError(f"expected a level-{level_in} cochain, got level {coch.level}")
    if coch.dim != alg.dim:
        raise ShapeError(f"cochain dimension {coch.dim} differs from algebra dimension {alg.dim}")
    # clear denominators so the inner loops run on ints
    rows = alg.rows()
    da = _common_denominator(c for row in rows.values() for _, _, c in row)
    dc = _common_denominator(coch.parts[0].values())
    irows = {p: [(q, k, int(c * da)) for q, k, c in row] for p, row in rows.items()}
    data = {k: int(v * dc) for k, v in coch.parts[0].items()}
    top = max(_products(term) for _, term in formula)
    total: dict = defaultdict(int)
    for sign, term in formula:
        lift = sign * da ** (top - _products(term))
        for key, v in _eval(term, irows, alg.dim, data).items():
            total[key] += lift * v
    den = dc * da ** top
    return {k: Fraction(v, den) for k, v in total.items() if v}


def delta1(alg: AntiAssocAlgebra, phi: Cochain) -> Cochain:
    """``a phi(b) - phi(ab) + phi(a) b``."""
    return Cochain(2, alg.dim, [_apply(DELTA1, alg, phi, 1)])


def delta2(alg: AntiAssocAlgebra, f: Cochain) -> Cochain:
    """``a f(b,c) + f(ab,c) + f(a,bc) + f(a,b) c``."""
    return Cochain(3, alg.dim, [_apply(DELTA2, alg, f, 2)])


def delta3_printed(alg: AntiAssocAlgebra, g: Cochain) -> Cochain:
    return Cochain(4, alg.dim, [_apply(comp, alg, g, 3) for comp in DELTA3_PRINTED])


def delta3_derived(alg: AntiAssocAlgebra, g: Cochain, model=None) -> Cochain:
    """Level-3 differential read off from the boundaries of the arity-5 generators."""
    return Cochain(4, alg.dim, [_apply(comp, alg, g, 3) for comp in derived_delta3_terms(model)])


def delta3_diff(alg: AntiAssocAlgebra, g: Cochain) -> list[dict]:
    """Per-component entries where the printed and derived differentials disagree."""
    a, b = delta3_printed(alg, g), delta3_derived(alg, g)
    out = []
    for comp in range(4):
        pa, pb = a.parts[comp], b.parts[comp]
        for key in sorted(set(pa) | set(pb)):
            if pa.get(key, 0) != pb.get(key, 0):
                out.append({"component": comp + 1, "index": key,
                            "printed": str(pa.get(key, 0)), "derived": str(pb.get(key, 0))})
    return out


# --- cohomology ---------------------------------------------------------------

def _basis_cochains(level: int, m: int) -> Iterable[Cochain]:
    for key in product(range(m), repeat=level + 1):
        yield Cochain(level, m, [{key: Fraction(1)}])


def _rank_of(images: Iterable[Cochain]) -> int:
    cols: dict = {}
    rows = []
    for im in images:
        row = {}
        for part, data in enumerate(im.parts):
            for key, v in data.items():
                j = cols.setdefault((part, key), len(cols))
                row[j] = v
        if row:
            rows.append(row)
    if not rows:
        return 0
    return exactla.rank(QMatrix.from_sparse(rows, len(cols)))


def _ranks(alg: AntiAssocAlgebra, with_delta3: bool) -> tuple[int, ...]:
    m = alg.dim
    r1 = _rank_of(delta1(alg, c) for c in _basis_cochains(1, m))
    r2 = _rank_of(delta2(alg, c) for c in _basis_cochains(2, m))
    if not with_delta3:
        return r1, r2
    r3 = _rank_of(delta3_derived(alg, c) for c in _basis_cochains(3, m))
    return r1, r2, r3


def standard_cohomology_dims(alg: AntiAssocAlgebra) -> tuple[int, int, int]:
    """``(h1, h2, h3)``; the complex stops after level 3, so ``h3`` is a cokernel."""
    m = alg.dim
    r1, r2 = _ranks(alg, False)
    return m ** 2 - r1, (m ** 3 - r2) - r1, m ** 4 - r2


def deformation_h_dims(alg: AntiAssocAlgebra) -> tuple[int, int, int]:
    """``(h1, h2, h3)`` of the deformation complex, with ``h3 = dim ker delta3 - rank delta2``."""
    m = alg.dim
    r1, r2, r3 = _ranks(alg, True)
    return m ** 2 - r1, (m ** 3 - r2) - r1, (m ** 4 - r3) - r2


# --- random data --------------------------------------------------------------

def random_cochain(level: int, m: int, rng: random.Random, density: float = 1.0,
                   max_nnz: int | None = None, lo: int = -3, hi: int = 3) -> Cochain:
    keys = list(product(range(m), repeat=level + 1))
    if max_nnz is not None and max_nnz < len(keys) * density:
        chosen = rng.sample(keys, max_nnz)
    else:
        chosen = [k for k in keys if rng.random() < density]
    return Cochain.from_dict(level, m, {k: rng.randint(lo, hi) for k in chosen})


def random_algebra(m: int, rng: random.Random, sparsity: float = 0.6,
                   basis_change: bool = True) -> AntiAssocAlgebra:
    """A random anti-associative algebra of dimension ``m``.

    Basis vectors get weights and products only land in strictly heavier
    weights.  Going up one weight at a time, the anti-associativity
    equations are linear in the new structure constants, so those are drawn
    from an exact nullspace.  An optional random change of basis hides the
    grading.
    """
    if m < 1:
        raise DomainError("dimension must be positive")
    weights = sorted([1] + [rng.randint(1, 3) for _ in range(m - 1)])
    table: dict[tuple[int, int, int], Fraction] = {}
    for W in sorted(set(weights)):
        outs = [k for k in range(m) if weights[k] == W]
        unknowns = [(i, j, k) for k in outs for i in range(m) for j in range(m)
                    if weights[i] + weights[j] <= W]
        if not unknowns:
            continue
        col = {u: n for n, u in enumerate(unknowns)}
        eqs = []
        for i, j, l, k in product(range(m), range(m), range(m), outs):
            row: dict[int, Fraction] = defaultdict(Fraction)
            for p in range(m):
                c = table.get((i, j, p))
                if c and (p, l, k) in col:
                    row[col[(p, l, k)]] += c
                c = table.get((j, l, p))
                if c and (i, p, k) in col:
                    row[col[(i, p, k)]] += c
            row = {a: b for a, b in row.items() if b}
            if row:
                eqs.append(row)
        null = exactla.nullspace(QMatrix.from_sparse(eqs, len(unknowns))) if eqs else [
            [Fraction(int(a == b)) for a in range(len(unknowns))] for b in range(len(unknowns))
        ]
        vec = [Fraction(0)] * len(unknowns)
        for v in null:
            if rng.random() < sparsity:
                c = rng.randint(-2, 2)
                vec = [x + c * y for x, y in zip(vec, v)]
        for u, x in zip(unknowns, vec):
            if x:
                table[u] = x
    alg = AntiAssocAlgebra.from_triples(m, table)
    if basis_change:
        alg = _change_basis(alg, _random_unimodular(m, rng))
    return alg


def _random_unimodular(m: int, rng: random.Random) -> list[list[int]]:
    P = [[int(i == j) for j in range(m)] for i in range(m)]
    for _ in range(2 * m):
        i, j = rng.sample(range(m), 2) if m > 1 else (0, 0)
        if i != j:
            c = rng.randint(-2, 2)
            for r in range(m):
                P[r][i] += c * P[r][j]
    perm = list(range(m))
    rng.shuffle(perm)
    return [[P[r][perm[c]] for c in range(m)] for r in range(m)]


def _inverse(P: list[list[int]]) -> list[list[Fraction]]:
    m = len(P)
    aug = QMatrix([list(P[i]) + [int(i == j) for j in range(m)] for i in range(m)], 2 * m)
    rows = aug.to_lists()
    for c in range(m):
        piv = next(r for r in range(c, m) if rows[r][c])
        rows[c], rows[piv] = rows[piv], rows[c]
        pv = rows[c][c]
        rows[c] = [x / pv for x in rows[c]]
        for r in range(m):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [row[m:] for row in rows]


def _change_basis(alg: AntiAssocAlgebra, P: list[list[int]]) -> AntiAssocAlgebra:
    """New basis ``e'_i = sum_a P[a][i] e_a``."""
    m = alg.dim
    Q = _inverse(P)
    cols = [[Fraction(P[a][i]) for a in range(m)] for i in range(m)]
    table = []
    for i in range(m):
        row = []
        for j in range(m):
            prod_ij = alg.mul(cols[i], cols[j])
            row.append([sum((Q[k][a] * prod_ij[a] for a in range(m)), Fraction(0)) for k in range(m)])
        table.append(row)
    return AntiAssocAlgebra(m, [f"e{i}" for i in range(m)], table)
