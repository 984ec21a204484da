"""Minimal-model data of the anti-associative operad through arity 5.

Generators: ``mu2`` (arity 2, degree 0), ``mu3`` (arity 3, degree 1) and
``mu5_1 .. mu5_4`` (arity 5, degree 2).  There is no arity-4 generator.
Arity-5 monomials of degree 1 (one ``mu3``, two ``mu2``) are exactly the
edges of the associahedron K5, and their boundaries are the sums of the two
endpoint bracketings, so degree-1 cycles are closed edge paths of even length.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping

from . import exactla, trees
from .errors import InconsistencyError
from .exactla import QMatrix
from .freeoperad import (
    DomainError,
    GeneratorSpec,
    OperadElement,
    apply_derivation,
    compose,
    monomial_from_tree,
    monomials,
    mono_shape,
)

__all__ = [
    "MU2",
    "MU3",
    "MU5",
    "ModelData",
    "StructuralError",
    "builtin_model",
    "check_square_zero",
    "arity5_cycle_analysis",
    "mu5_cycle_render",
    "arity6_degree_check",
    "degree1_homology",
    "bracket_element",
]

MU2 = GeneratorSpec("mu2", 2, 0)
MU3 = GeneratorSpec("mu3", 3, 1)
MU5 = tuple(GeneratorSpec(f"mu5_{i}", 5, 2) for i in range(1, 5))

_BY_ARITY = {2: MU2, 3: MU3}


class StructuralError(InconsistencyError):
    """Model data does not have the expected combinatorial shape."""


# Boundaries of the four arity-5 generators, term by term.
_MU5_BRACKETS = (
    "+(•(••(••))) -(••(•(••))) +((••)(•••)) -((••)(••)•) "
    "+(((••)••)•) -(((••)•)••) +((•••)(••)) -(•(••)(••))",
    "+(((••)•)••) -(((••)••)•) +((••(••))•) -(•(•(••))•) "
    "+(•(•(••)•)) -(••((••)•)) +((••)(•••)) -((••)•(••))",
    "+(•(••)(••)) -(•((••)••)) +(•((••)•)•) -((•(•••))•) "
    "+((••(••))•) -(((••)••)•) +(((•••)•)•) -((•(••))••)",
    "+((••)(••)•) -(••((••)•)) +(•(•(••)•)) -(•(•(••))•) "
    "+((•(•••))•) -((•(••)•)•) +(((•••)•)•) -(((••)••)•)",
)


def bracket_element(text: str, gens: Mapping[int, GeneratorSpec] = _BY_ARITY) -> OperadElement:
    """Parse ``"+(••(••)) -(...)"``; node arity picks the generator."""
    terms: dict = {}
    for tok in text.split():
        sign = -1 if tok[0] == "-" else 1
        body = tok[1:] if tok[0] in "+-" else tok
        m = monomial_from_tree(trees.decode(body), gens)
        terms[m] = terms.get(m, 0) + sign
    return OperadElement(terms)


@dataclass(frozen=True)
class ModelData:
    generators: tuple[GeneratorSpec, ...]
    rules: Mapping[str, OperadElement]

    def with_rule(self, name: str, value: OperadElement) -> "ModelData":
        rules = dict(self.rules)
        rules[name] = value
        return replace(self, rules=rules)

    def to_json(self) -> dict:
        return {
            "generators": [{"name": g.name, "arity": g.arity, "degree": g.degree} for g in self.generators],
            "differential": {
                g.name: [
                    {"tree": trees.encode(mono_shape(m)), "coeff": int(c)}
                    for m, c in self.rules[g.name].items()
                ]
                for g in self.generators
            },
        }


def builtin_model() -> ModelData:
    g2 = OperadElement.gen(MU2)
    rules = {
        MU2.name: OperadElement({}, 2, -1),
        MU3.name: compose(g2, 1, g2) + compose(g2, 2, g2),
    }
    for g, text in zip(MU5, _MU5_BRACKETS):
        rules[g.name] = bracket_element(text)
    return ModelData((MU2, MU3) + MU5, rules)


def check_square_zero(m: ModelData) -> bool:
    for g in m.generators:
        once = m.rules[g.name]
        if once.is_zero():
            continue
        if not apply_derivation(m.rules, once).is_zero():
            return False
    return True


# --- K5 --------------------------------------------------------------------------

def _edge_vector(x: OperadElement, g: trees.AssocGraph) -> list[Fraction]:
    idx = g.edge_index()
    vec = [Fraction(0)] * len(g.edges)
    for mono, c in x.terms.items():
        shape = mono_shape(mono)
        if shape not in idx:
            raise StructuralError(f"{trees.encode(shape)} is not an edge of K{g.leafcount}")
        vec[idx[shape]] += c
    return vec


def _incidence(g: trees.AssocGraph) -> QMatrix:
    """Vertex-by-edge matrix of the unsigned boundary ``x_e -> x_a + x_b``."""
    rows: list[dict[int, int]] = [dict() for _ in g.vertices]
    for e, (a, b) in enumerate(g.endpoints):
        rows[a][e] = rows[a].get(e, 0) + 1
        rows[b][e] = rows[b].get(e, 0) + 1
    return QMatrix.from_sparse(rows, len(g.edges))


def _square_images() -> list[OperadElement]:
    g3 = OperadElement.gen(MU3)
    rules = builtin_model().rules
    return [apply_derivation(rules, compose(g3, i, g3)) for i in range(1, 4)]


def arity5_cycle_analysis(model: ModelData | None = None) -> dict:
    model = model or builtin_model()
    g = trees.associahedron(5)
    inc = _incidence(g)
    kernel_dim = len(g.edges) - exactla.rank(inc)
    squares = QMatrix([_edge_vector(x, g) for x in _square_images()], len(g.edges))
    squares_rank = exactla.rank(squares)
    mu5 = [_edge_vector(model.rules[h.name], g) for h in MU5]
    for v in mu5:
        if any(inc.apply(v)):
            raise StructuralError("a boundary of an arity-5 generator is not a cycle")
    span = exactla.rank(squares.vstack(QMatrix(mu5, len(g.edges))))
    return {
        "kernel_dim": kernel_dim,
        "squares_rank": squares_rank,
        "required_generators": kernel_dim - squares_rank,
        "mu5_completeness": span == kernel_dim,
    }


def mu5_cycle_render(i: int, model: ModelData | None = None) -> dict:
    """Write the boundary of ``mu5_i`` as a closed path in K5.

    Returns the edges in path order (each an edge tree in bracket notation),
    the vertices visited, and the edge signs, which alternate.
    """
    if not 1 <= i <= 4:
        raise DomainError("i must be in 1..4")
    model = model or builtin_model()
    g = trees.associahedron(5)
    vec = _edge_vector(model.rules[MU5[i - 1].name], g)
    support = [e for e, c in enumerate(vec) if c]
    if any(abs(vec[e]) != 1 for e in support):
        raise StructuralError("coefficients are not +-1")
    touching: dict[int, list[int]] = {}
    for e in support:
        for v in g.endpoints[e]:
            touching.setdefault(v, []).append(e)
    if any(len(es) != 2 for es in touching.values()):
        raise StructuralError("support is not a union of disjoint cycles")
    start = support[0]
    path, verts = [start], [g.endpoints[start][0]]
    cur_v = g.endpoints[start][1]
    while True:
        verts.append(cur_v)
        nxt = next(e for e in touching[cur_v] if e != path[-1])
        if nxt == start:
            break
        path.append(nxt)
        a, b = g.endpoints[nxt]
        cur_v = b if a == cur_v else a
    if len(path) != len(support):
        raise StructuralError("support is more than one cycle")
    signs = [int(vec[e]) for e in path]
    if any(signs[k] == signs[(k + 1) % len(signs)] for k in range(len(signs))):
        raise StructuralError("signs do not alternate along the path")
    return {
        "i": i,
        "length": len(path),
        "edges": [trees.encode(g.edges[e]) for e in path],
        "vertices": [trees.encode(g.vertices[v]) for v in verts],
        "signs": signs,
    }


def degree1_homology(arity: int, with_mu5: bool = True) -> int:
    """Dimension of degree-1 homology of the free operad on the model, at ``arity``.

    Degree-1 elements are edges of the associahedron; degree-2 elements are
    all monomials of degree 2 in the available generators.
    """
    model = builtin_model()
    gens = [MU2, MU3] + (list(MU5) if with_mu5 else [])
    g = trees.associahedron(arity)
    kernel_dim = len(g.edges) - exactla.rank(_incidence(g))
    images = [
        _edge_vector(apply_derivation(model.rules, OperadElement.mono(m)), g)
        for m in monomials(gens, arity, 2)
    ]
    image_rank = exactla.rank(QMatrix(images, len(g.edges))) if images else 0
    return kernel_dim - image_rank


def arity6_degree_check() -> bool:
    """True when degree-1 homology vanishes at arity 6 (no new generators of degree <= 2 there)."""
    return degree1_homology(6) == 0
