"""Quadratic duality for one-generator n-ary operads.

Relations of such an operad live in the span of the n compositions
``mu∘_i mu`` (planar part of arity 2n-1).  Under the pairing
``<mu∘_i mu, mu∘_j mu> = delta_ij (-1)^((i+1)(n+1))`` the dual relations are
the annihilator, and the dual generator sits in degree ``-d + n - 2``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from . import exactla
from .exactla import QMatrix
from .freeoperad import (
    DomainError,
    Family,
    OperadElement,
    Presentation,
    compose,
    standard_relations,
)

__all__ = [
    "QuadraticPresentation",
    "pairing_signs",
    "shadow",
    "dual",
    "same_relations",
    "dual_family",
    "verify_duality_table",
]


class QuadraticPresentation(NamedTuple):
    n: int
    d: int
    relspace: QMatrix

    @classmethod
    def make(cls, n: int, d: int, rows) -> "QuadraticPresentation":
        m = QMatrix([list(r) for r in rows], n) if rows else QMatrix((), n)
        return cls(n, d, exactla.row_space_basis(m))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "relations": [[str(x) for x in row] for row in self.relspace.to_lists()],
        }


def pairing_signs(n: int) -> list[int]:
    if n < 2:
        raise DomainError("arity must be at least 2")
    return [(-1) ** ((i + 1) * (n + 1)) for i in range(1, n + 1)]


def shadow(p: Presentation) -> QuadraticPresentation:
    """Coordinates of the relations on the basis ``(mu∘_1 mu, ..., mu∘_n mu)``."""
    mu = p.generator
    n = mu.arity
    g = OperadElement.gen(mu)
    basis = []
    for i in range(1, n + 1):
        (m, c), = compose(g, i, g).terms.items()
        basis.append((m, c))
    rows = []
    for rel in p.relations:
        if rel.arity != 2 * n - 1:
            raise DomainError("relation is not quadratic")
        extra = set(rel.terms) - {m for m, _ in basis}
        if extra:
            raise DomainError("relation has terms outside the span of mu∘_i mu")
        rows.append([rel.terms.get(m, Fraction(0)) / c for m, c in basis])
    return QuadraticPresentation.make(n, mu.degree, rows)


def dual(qp: QuadraticPresentation) -> QuadraticPresentation:
    s = pairing_signs(qp.n)
    weighted = QMatrix.from_sparse(
        ({j: v * s[j] for j, v in row.items()} for row in qp.relspace.sparse_rows()), qp.n
    )
    perp = exactla.nullspace(weighted)
    return QuadraticPresentation.make(qp.n, -qp.d + qp.n - 2, perp)


def same_relations(a: QuadraticPresentation, b: QuadraticPresentation) -> bool:
    ra, rb, rsum = exactla.subspace_dim_sum(a.relspace, b.relspace)
    return ra == rb == rsum


_PARTNER = {
    Family.TOT: Family.PART,
    Family.PART: Family.TOT,
    Family.TOT_TILDE: Family.PART_TILDE,
    Family.PART_TILDE: Family.TOT_TILDE,
}


def dual_family(kind: str, n: int, d: int) -> tuple[str, int, int]:
    """The family, arity and degree that the dual is expected to be."""
    return _PARTNER[kind], n, -d + n - 2


def verify_duality_table(n: int, d: int) -> bool:
    """Check all four duality identities at ``(n, d)`` on the planar shadow."""
    for kind in Family.ALL:
        qp = shadow(standard_relations(kind, n, d))
        got = dual(qp)
        fam, _, d2 = dual_family(kind, n, d)
        want = shadow(standard_relations(fam, n, d2))
        if got.d != d2 or not same_relations(got, want):
            return False
    return True
