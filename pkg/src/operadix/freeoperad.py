"""The free graded planar operad on finitely many generators.

A monomial is a planar tree whose internal nodes carry generators.  It is
stored as a nested tuple ``(gen, child_1, ..., child_k)`` with ``None`` for a
leaf, so the node arity is ``len(node) - 1``.

Sign convention: the vertices of a monomial are ordered by preorder (root,
then subtrees left to right).  Whenever a grafting or a substitution produces
vertices in some other order, the coefficient picks up
``(-1)^(deg u * deg v)`` for each pair ``(u, v)`` that has to be swapped to
reach preorder.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, NamedTuple

from . import exactla, trees
from .exactla import QMatrix
from .errors import DomainError

__all__ = [
    "DomainError",
    "GeneratorSpec",
    "OperadElement",
    "Presentation",
    "Family",
    "QuotientDim",
    "mono_shape",
    "mono_labels",
    "mono_degree",
    "mono_arity",
    "monomial_from_tree",
    "compose",
    "standard_relations",
    "weight_basis",
    "monomials",
    "relation_span",
    "quotient_dim",
    "left_comb",
    "scomb_normal_form",
    "apply_derivation",
    "comb_map_kernel_dim",
]




class GeneratorSpec(NamedTuple):
    name: str
    arity: int
    degree: int


class Family:
    """Names of the four one-generator families."""

    TOT = "TotAss"
    PART = "PartAss"
    TOT_TILDE = "TotAssTilde"
    PART_TILDE = "PartAssTilde"
    ALL = (TOT, PART, TOT_TILDE, PART_TILDE)


# --- monomials -------------------------------------------------------------

Monomial = tuple


def mono_shape(m) -> trees.Tree:
    if m is None:
        return trees.LEAF
    return tuple(mono_shape(c) for c in m[1:])


def mono_labels(m) -> list[GeneratorSpec]:
    """Generators in preorder."""
    if m is None:
        return []
    out = [m[0]]
    for c in m[1:]:
        out.extend(mono_labels(c))
    return out


def mono_degree(m) -> int:
    return sum(g.degree for g in mono_labels(m))


def mono_arity(m) -> int:
    if m is None:
        return 1
    return sum(mono_arity(c) for c in m[1:])


def mono_key(m) -> tuple:
    return trees.encode(mono_shape(m)), tuple(g.name for g in mono_labels(m))


def monomial_from_tree(t: trees.Tree, label) -> Monomial:
    """Label the nodes of a tree; ``label`` maps arity to generator (dict or callable)."""
    pick = label if callable(label) else label.__getitem__
    if not t:
        return None
    g = pick(len(t))
    if g.arity != len(t):
        raise DomainError(f"generator {g.name} has arity {g.arity}, node has {len(t)}")
    return (g,) + tuple(monomial_from_tree(c, label) for c in t)


def _validate_mono(m) -> None:
    if m is None:
        return
    if not isinstance(m[0], GeneratorSpec) or m[0].arity != len(m) - 1:
        raise DomainError(f"malformed monomial node {m!r}")
    for c in m[1:]:
        _validate_mono(c)


class OperadElement:
    """A homogeneous linear combination of monomials with exact coefficients."""

    __slots__ = ("arity", "degree", "terms")

    def __init__(self, terms: Mapping | None = None, arity: int | None = None, degree: int | None = None):
        clean: dict = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if not c:
                continue
            if m is None:
                raise DomainError("arity-1 elements are not representable")
            a, d = mono_arity(m), mono_degree(m)
            if arity is None:
                arity = a
            if degree is None:
                degree = d
            if (a, d) != (arity, degree):
                raise DomainError(f"inhomogeneous element: ({a},{d}) vs ({arity},{degree})")
            clean[m] = clean.get(m, 0) + c
            if not clean[m]:
                del clean[m]
        self.terms = clean
        self.arity = arity
        self.degree = degree

    @classmethod
    def gen(cls, g: GeneratorSpec) -> "OperadElement":
        return cls({(g,) + (None,) * g.arity: 1})

    @classmethod
    def mono(cls, m, coeff=1) -> "OperadElement":
        _validate_mono(m)
        return cls({m: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: mono_key(kv[0]))

    def __add__(self, other: "OperadElement") -> "OperadElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return OperadElement(out, self.arity if self.terms else other.arity,
                             self.degree if self.terms else other.degree)

    def __neg__(self):
        return OperadElement({m: -c for m, c in self.terms.items()}, self.arity, self.degree)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = Fraction(k)
        return OperadElement({m: c * k for m, c in self.terms.items()}, self.arity, self.degree)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OperadElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def compose(self, i: int, other: "OperadElement") -> "OperadElement":
        return compose(self, i, other)

    def render(self) -> str:
        """Signed sum of bracket strings, e.g. ``((••)•) + (•(••))``."""
        if not self.terms:
            return "0"
        out = ""
        for k, (m, c) in enumerate(self.items()):
            s = trees.encode(mono_shape(m))
            mag = abs(c)
            body = s if mag == 1 else f"{mag}*{s}"
            if k == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += (" - " if c < 0 else " + ") + body
        return out

    def __repr__(self):
        return f"OperadElement({self.render()})"

    def to_json(self) -> list[dict]:
        return [
            {
                "tree": trees.encode(mono_shape(m)),
                "labels": [g.name for g in mono_labels(m)],
                "coeff": [str(c.numerator), str(c.denominator)],
            }
            for m, c in self.items()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], gens: Iterable[GeneratorSpec]) -> "OperadElement":
        byname = {g.name: g for g in gens}
        terms = {}
        for item in data:
            labels = iter(byname[name] for name in item["labels"])
            m = monomial_from_tree(trees.decode(item["tree"]), lambda _a: next(labels))
            num, den = item["coeff"]
            terms[m] = terms.get(m, 0) + Fraction(int(num), int(den))
        return cls(terms)


# --- grafting with signs -----------------------------------------------------

class _Hole:
    """Marker node that a substitution fills with a monomial."""

    __slots__ = ("arity",)

    def __init__(self, arity: int):
        self.arity = arity


def _fill(template, block) -> tuple[Monomial, int]:
    """Replace the unique hole of ``template`` by the monomial ``block``.

    The reference vertex order is the template's preorder with the block's
    own preorder inserted at the hole.  Returns the filled monomial and the
    sign of reordering that into the preorder of the result.
    """
    counter = [0]

    def tag_template(node):
        if node is None:
            return None
        idx = counter[0]
        counter[0] += 1
        kids = tuple(tag_template(c) for c in node[1:])
        if isinstance(node[0], _Hole):
            return ("hole", idx, kids)
        return ("v", node[0], (idx, 0), kids)

    tagged = tag_template(template)
    order: list[tuple[tuple[int, int], int]] = []

    def graft(bnode, hidx, kids, pos):
        # block vertices take tags (hidx, 1..); kids are the hole's inputs
        if bnode is None:
            k = kids[pos[0]]
            pos[0] += 1
            return build(k)
        pos[1] += 1
        tag = (hidx, pos[1])
        order.append((tag, bnode[0].degree))
        return (bnode[0],) + tuple(graft(c, hidx, kids, pos) for c in bnode[1:])

    def build(t):
        if t is None:
            return None
        if t[0] == "hole":
            _, hidx, kids = t
            return graft(block, hidx, kids, [0, 0])
        _, g, tag, kids = t
        order.append((tag, g.degree))
        return (g,) + tuple(build(c) for c in kids)

    result = build(tagged)
    return result, _reorder_sign(order)


def _reorder_sign(order: list[tuple[tuple, int]]) -> int:
    odd = [tag for tag, deg in order if deg % 2]
    inv = 0
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            if odd[a] > odd[b]:
                inv += 1
    return -1 if inv % 2 else 1


def _leaf_to_hole(m, i: int, arity: int):
    """Copy of ``m`` with its ``i``-th leaf (1-based) replaced by a hole of the given arity."""
    count = [0]

    def walk(node):
        if node is None:
            count[0] += 1
            if count[0] == i:
                return (_Hole(arity),) + (None,) * arity
            return None
        return (node[0],) + tuple(walk(c) for c in node[1:])

    return walk(m)


def _compose_mono(x, i: int, y) -> tuple[Monomial, int]:
    # x∘_i y is x with a hole at leaf i filled by y; the hole is the root of
    # the substituted block, so the reference order is "x before leaf i, y, rest of x".
    # That differs from "x then y" by moving y past the x-vertices after leaf i.
    filled, s = _fill(_leaf_to_hole(x, i, mono_arity(y)), y)
    after = _degree_after_leaf(x, i)
    if after % 2 and mono_degree(y) % 2:
        s = -s
    return filled, s


def _degree_after_leaf(x, i: int) -> int:
    seen_leaves = [0]
    total = [0]

    def walk(node):
        if node is None:
            seen_leaves[0] += 1
            return
        if seen_leaves[0] >= i:
            total[0] += node[0].degree
        for c in node[1:]:
            walk(c)

    walk(x)
    return total[0]


def compose(x: OperadElement, i: int, y: OperadElement) -> OperadElement:
    """``x ∘_i y``: graft ``y`` onto input ``i`` of ``x`` (bilinear, with Koszul signs)."""
    if x.arity is None or y.arity is None:
        if x.is_zero() or y.is_zero():
            return OperadElement()
    if not 1 <= i <= x.arity:
        raise DomainError(f"slot {i} out of range 1..{x.arity}")
    out: dict = {}
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            m, s = _compose_mono(mx, i, my)
            out[m] = out.get(m, 0) + s * cx * cy
    return OperadElement(out, x.arity + y.arity - 1, x.degree + y.degree)


def _substitute(template, elem: OperadElement) -> dict:
    out: dict = {}
    for m, c in elem.terms.items():
        r, s = _fill(template, m)
        out[r] = out.get(r, 0) + s * c
    return out


# --- presentations -----------------------------------------------------------

class Presentation(NamedTuple):
    generators: tuple[GeneratorSpec, ...]
    relations: tuple[OperadElement, ...]
    family: str | None = None

    @property
    def generator(self) -> GeneratorSpec:
        if len(self.generators) != 1:
            raise DomainError("presentation has more than one generator")
        return self.generators[0]


def _circ_i(mu: GeneratorSpec, i: int) -> OperadElement:
    g = OperadElement.gen(mu)
    return compose(g, i, g)


def relation_coefficients(kind: str, n: int) -> list[list[int]]:
    """Rows of coefficients on the basis (mu∘_1 mu, ..., mu∘_n mu)."""
    if kind == Family.TOT:
        return [[1 if k == 0 else (-1 if k == j else 0) for k in range(n)] for j in range(1, n)]
    if kind == Family.PART:
        return [[(-1) ** ((i + 1) * (n - 1)) for i in range(1, n + 1)]]
    if kind == Family.TOT_TILDE:
        s = [(-1) ** (i * (n + 1)) for i in range(1, n + 1)]
        return [[s[0] if k == 0 else (-s[j] if k == j else 0) for k in range(n)] for j in range(1, n)]
    if kind == Family.PART_TILDE:
        return [[1] * n]
    raise DomainError(f"unknown family {kind!r}")


def standard_relations(kind: str, n: int, d: int, name: str = "mu") -> Presentation:
    if n < 2:
        raise DomainError("arity must be at least 2")
    mu = GeneratorSpec(name, n, d)
    circ = [_circ_i(mu, i) for i in range(1, n + 1)]
    rels = []
    for row in relation_coefficients(kind, n):
        e = OperadElement({}, 2 * n - 1, 2 * d)
        for c, b in zip(row, circ):
            if c:
                e = e + b * c
        rels.append(e)
    return Presentation((mu,), tuple(rels), kind)


def _node_count_options(arity: int, gens: list[GeneratorSpec]) -> list[dict[int, int]]:
    ars = sorted({g.arity for g in gens})
    out = []

    def rec(k, remaining, acc):
        if k == len(ars):
            if remaining == 0:
                out.append(dict(acc))
            return
        a = ars[k]
        for c in range(remaining // (a - 1) + 1):
            acc[a] = c
            rec(k + 1, remaining - c * (a - 1), acc)
        del acc[a]

    rec(0, arity - 1, {})
    return [o for o in out if any(o.values())]


def monomials(gens: Iterable[GeneratorSpec], arity: int, degree: int | None = None) -> list[Monomial]:
    """All monomials of the given arity (and degree, if given), in canonical order."""
    gens = list(gens)
    byarity: dict[int, list[GeneratorSpec]] = {}
    for g in gens:
        byarity.setdefault(g.arity, []).append(g)
    out = []
    for counts in _node_count_options(arity, gens):
        for shape in trees.enumerate_mixed(counts):
            ars = trees.arities(shape)
            for labels in product(*(byarity[a] for a in ars)):
                if degree is not None and sum(g.degree for g in labels) != degree:
                    continue
                it = iter(labels)
                out.append(monomial_from_tree(shape, lambda _a: next(it)))
    out.sort(key=mono_key)
    return out


def weight_basis(p: Presentation, l: int) -> list[Monomial]:
    mu = p.generator
    if l == 0:
        return []
    return [monomial_from_tree(t, {mu.arity: mu}) for t in trees.enumerate_full(mu.arity, l)]


def _weight(e: OperadElement) -> int:
    m = next(iter(e.terms))
    return len(mono_labels(m))


def relation_span(p: Presentation, l: int) -> QMatrix:
    """Spanning rows of the weight-``l`` part of the ideal generated by the relations.

    Each row substitutes one relation into one node of a context tree.
    """
    if l < 2:
        raise DomainError("relations live in weight >= 2")
    mu = p.generator
    basis = weight_basis(p, l)
    index = {m: k for k, m in enumerate(basis)}
    rows = []
    for rel in p.relations:
        if rel.is_zero():
            continue
        w = _weight(rel)
        if w > l:
            continue
        ra = rel.arity
        counts = {mu.arity: l - w}
        counts[ra] = counts.get(ra, 0) + 1
        for shape in trees.enumerate_mixed(counts):
            nslots = sum(1 for a in trees.arities(shape) if a == ra)
            for slot in range(nslots):
                tmpl = _context(shape, mu, ra, slot)
                row = {}
                for m, c in _substitute(tmpl, rel).items():
                    row[index[m]] = row.get(index[m], 0) + c
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    return QMatrix.from_sparse(rows, len(basis))


def _context(shape, mu: GeneratorSpec, hole_arity: int, slot: int):
    """Label ``shape`` with ``mu`` except the ``slot``-th node of arity ``hole_arity`` (a hole)."""
    seen = [0]

    def walk(t):
        if not t:
            return None
        if len(t) == hole_arity:
            k = seen[0]
            seen[0] += 1
            if k == slot:
                return (_Hole(hole_arity),) + tuple(walk(c) for c in t)
        return (mu,) + tuple(walk(c) for c in t)

    return walk(shape)


class QuotientDim(NamedTuple):
    planar: int
    full: int


def quotient_dim(p: Presentation, l: int) -> QuotientDim:
    """Dimension of the weight-``l`` component of the quotient operad.

    Weight 0 is the implicit unit.  The full dimension multiplies by the
    arity factorial since the generator spans a regular representation.
    """
    mu = p.generator
    a = l * (mu.arity - 1) + 1
    if l == 0:
        planar = 1
    elif l == 1:
        planar = 1
    else:
        planar = len(weight_basis(p, l)) - exactla.rank(relation_span(p, l))
    return QuotientDim(planar, planar * math.factorial(a))


def left_comb(n: int, k: int, mu: GeneratorSpec | None = None) -> Monomial:
    """``(((mu∘_1 mu)∘_1 mu)...)``, ``k`` nodes each grafted on the first input."""
    if k < 1:
        raise DomainError("k must be at least 1")
    mu = mu or GeneratorSpec("mu", n, 0)
    m = (mu,) + (None,) * n
    for _ in range(k - 1):
        m = (mu, m) + (None,) * (n - 1)
    return m


# --- rewriting ---------------------------------------------------------------

def _first_child_measure(m) -> int:
    if m is None:
        return 0
    first = m[1]
    own = len(mono_labels(first)) if first is not None else 0
    return own + sum(_first_child_measure(c) for c in m[1:])


def _find_redex(m, path=()):
    """Path to the first node (preorder) whose first child is internal."""
    if m is None:
        return None
    if m[1] is not None:
        return path
    for k, c in enumerate(m[1:]):
        r = _find_redex(c, path + (k,))
        if r is not None:
            return r
    return None


def _redex_template(m, path):
    """Turn the node at ``path`` and its first child into one hole of arity 2n-1."""
    if not path:
        inner = m[1]
        kids = inner[1:] + m[2:]
        return (_Hole(len(kids)),) + kids
    k = path[0]
    kids = list(m[1:])
    kids[k] = _redex_template(kids[k], path[1:])
    return (m[0],) + tuple(kids)


def scomb_normal_form(kind: str, n: int, d: int, x: OperadElement) -> OperadElement:
    """Rewrite ``x`` modulo the partial-associativity relation onto comb monomials.

    ``mu∘_1 mu`` is replaced by ``-sum_{i>=2} s_i mu∘_i mu``; each step strictly
    lowers the total size of first-child subtrees, so the loop terminates.
    """
    if kind != Family.PART:
        raise DomainError("comb rewriting is implemented for the partially associative family only")
    if (n - d) % 2:
        raise DomainError(
            "rewriting onto combs is only valid when n and d have equal parity; "
            "use quotient_dim for this case"
        )
    mu = GeneratorSpec("mu", n, d)
    signs = relation_coefficients(Family.PART, n)[0]
    rhs = OperadElement({}, 2 * n - 1, 2 * d)
    for i in range(2, n + 1):
        rhs = rhs - _circ_i(mu, i) * signs[i - 1]
    work = dict(x.terms)
    done: dict = {}
    while work:
        m = max(work, key=_first_child_measure)
        c = work.pop(m)
        path = _find_redex(m)
        if path is None:
            done[m] = done.get(m, 0) + c
            continue
        tmpl = _redex_template(m, path)
        # filling the hole with mu∘_1 mu recovers m with sign +1
        for r, s in _substitute(tmpl, rhs).items():
            work[r] = work.get(r, 0) + s * c
            if not work[r]:
                del work[r]
    return OperadElement(done, x.arity, x.degree)


# --- derivations -------------------------------------------------------------

def apply_derivation(rules: Mapping[str, OperadElement], x: OperadElement) -> OperadElement:
    """Extend generator values to a degree -1 derivation and apply it to ``x``."""
    out: dict = {}
    for m, c in x.terms.items():
        for path, pre_deg, node in _nodes_with_prefix_degree(m):
            g = node[0]
            if g.name not in rules:
                raise DomainError(f"no rule for generator {g.name}")
            rule = rules[g.name]
            if rule.is_zero():
                continue
            if rule.arity != g.arity:
                raise DomainError(f"rule for {g.name} has arity {rule.arity}, expected {g.arity}")
            tmpl = _replace_node_with_hole(m, path)
            sign = -1 if pre_deg % 2 else 1
            for r, s in _substitute(tmpl, rule).items():
                out[r] = out.get(r, 0) + sign * s * c
    deg = None if x.degree is None else x.degree - 1
    return OperadElement(out, x.arity, deg)


def _nodes_with_prefix_degree(m):
    """Yield ``(path, total degree of preceding vertices, node)`` in preorder."""
    acc = [0]
    out = []

    def walk(node, path):
        if node is None:
            return
        out.append((path, acc[0], node))
        acc[0] += node[0].degree
        for k, c in enumerate(node[1:]):
            walk(c, path + (k,))

    walk(m, ())
    return out


def _replace_node_with_hole(m, path):
    if not path:
        return (_Hole(m[0].arity),) + m[1:]
    k = path[0]
    kids = list(m[1:])
    kids[k] = _replace_node_with_hole(kids[k], path[1:])
    return (m[0],) + tuple(kids)


def comb_map_kernel_dim(p: Presentation, l: int) -> int:
    """Dimension of the kernel of ``span(combs) -> quotient`` at weight ``l``.

    Zero exactly when the comb monomials stay independent modulo the relations.
    """
    mu = p.generator
    if l < 2:
        return 0
    basis = weight_basis(p, l)
    index = {m: k for k, m in enumerate(basis)}
    combs = QMatrix.from_sparse(
        ({index[monomial_from_tree(t, {mu.arity: mu})]: 1} for t in trees.enumerate_scomb(mu.arity, l)),
        len(basis),
    )
    rel = relation_span(p, l)
    r_rel, r_comb, r_sum = exactla.subspace_dim_sum(rel, combs)
    return r_comb - (r_sum - r_rel)
