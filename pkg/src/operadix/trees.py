"""Planar rooted trees, comb subsets and associahedron graphs.

A tree is a nested tuple: the leaf is ``()`` and an internal node is the
tuple of its (at least two) subtrees, left to right.  So ``((), ((), ()))``
is the tree written ``(•(••))`` in bracket notation.  All enumerations return
trees sorted by their bracket encoding, which fixes basis order everywhere
else in the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator

from .errors import DomainError

__all__ = [
    "LEAF",
    "Tree",
    "ParseError",
    "DomainError",
    "AssocGraph",
    "leaves",
    "nodes",
    "arities",
    "is_comb",
    "encode",
    "decode",
    "enumerate_full",
    "enumerate_scomb",
    "count_scomb",
    "fuss_catalan",
    "enumerate_mixed",
    "associahedron",
    "square_faces",
]

Tree = tuple
LEAF: Tree = ()
BULLET = "•"


class ParseError(DomainError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos




def leaves(t: Tree) -> int:
    return 1 if not t else sum(leaves(c) for c in t)


def nodes(t: Tree) -> int:
    return 0 if not t else 1 + sum(nodes(c) for c in t)


def arities(t: Tree) -> list[int]:
    """Node arities in preorder."""
    if not t:
        return []
    out = [len(t)]
    for c in t:
        out.extend(arities(c))
    return out


def is_comb(t: Tree) -> bool:
    """True when the first child of every internal node is a leaf."""
    if not t:
        return True
    return t[0] == LEAF and all(is_comb(c) for c in t[1:])


def encode(t: Tree) -> str:
    if not t:
        return BULLET
    return "(" + "".join(encode(c) for c in t) + ")"


def decode(s: str) -> Tree:
    """Parse bracket notation; ``•``, ``*`` and ``.`` are accepted as leaves."""
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        if pos >= len(s):
            raise ParseError("unexpected end of input", pos)
        ch = s[pos]
        if ch in (BULLET, "*", "."):
            pos += 1
            return LEAF
        if ch != "(":
            raise ParseError(f"unexpected character {ch!r}", pos)
        start = pos
        pos += 1
        kids = []
        while pos < len(s) and s[pos] != ")":
            if s[pos].isspace():
                pos += 1
                continue
            kids.append(parse())
        if pos >= len(s):
            raise ParseError("unbalanced bracket opened", start)
        if len(kids) < 2:
            raise ParseError("a node needs at least two children", start)
        pos += 1
        return tuple(kids)

    s = s.strip()
    t = parse()
    if pos != len(s):
        raise ParseError("trailing characters", pos)
    return t


def _sorted(trees) -> list[Tree]:
    return sorted(trees, key=encode)


@lru_cache(maxsize=None)
def _full(n: int, l: int) -> tuple[Tree, ...]:
    if l == 0:
        return (LEAF,)
    out = []
    for split in _compositions(l - 1, n):
        for kids in product(*(_full(n, k) for k in split)):
            out.append(tuple(kids))
    return tuple(out)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` non-negative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_full(n: int, l: int) -> list[Tree]:
    """All planar trees with ``l`` internal nodes, each of arity ``n``."""
    if n < 2 or l < 0:
        raise DomainError("need n >= 2 and l >= 0")
    return _sorted(_full(n, l))


@lru_cache(maxsize=None)
def _scomb(n: int, l: int) -> tuple[Tree, ...]:
    if l == 0:
        return (LEAF,)
    out = []
    for split in _compositions(l - 1, n - 1):
        for kids in product(*(_scomb(n, k) for k in split)):
            out.append((LEAF,) + tuple(kids))
    return tuple(out)


def enumerate_scomb(n: int, l: int) -> list[Tree]:
    """Trees of :func:`enumerate_full` whose nodes all have a leaf as first child."""
    if n < 2 or l < 0:
        raise DomainError("need n >= 2 and l >= 0")
    return _sorted(_scomb(n, l))


@lru_cache(maxsize=None)
def count_scomb(n: int, l: int) -> int:
    """Size of the comb set, by the root decomposition ``S_l = sum S_l2 ... S_ln``."""
    if n < 2 or l < 0:
        raise DomainError("need n >= 2 and l >= 0")
    if l == 0:
        return 1
    total = 0
    for split in _compositions(l - 1, n - 1):
        p = 1
        for k in split:
            p *= count_scomb(n, k)
        total += p
    return total


def fuss_catalan(n: int, l: int) -> int:
    from math import comb

    return comb(n * l, l) // ((n - 1) * l + 1)


@lru_cache(maxsize=None)
def _mixed(budget: tuple[tuple[int, int], ...]) -> tuple[Tree, ...]:
    # budget: sorted (arity, count) pairs; every node must be used
    if not any(c for _, c in budget):
        return (LEAF,)
    out = []
    for i, (a, cnt) in enumerate(budget):
        if cnt == 0:
            continue
        rest = list(budget)
        rest[i] = (a, cnt - 1)
        per_arity = [list(_compositions(c, a)) for _, c in rest]
        for choice in product(*per_arity):
            child_budgets = [
                tuple((rest[k][0], choice[k][child]) for k in range(len(rest)))
                for child in range(a)
            ]
            for kids in product(*(_mixed(b) for b in child_budgets)):
                out.append(tuple(kids))
    return tuple(out)


def enumerate_mixed(node_counts: dict[int, int]) -> list[Tree]:
    """All planar trees with exactly ``node_counts[a]`` nodes of arity ``a``."""
    budget = tuple(sorted((a, c) for a, c in node_counts.items() if c))
    if any(a < 2 for a, _ in budget):
        raise DomainError("node arities must be >= 2")
    return _sorted(_mixed(budget))


@dataclass(frozen=True)
class AssocGraph:
    """1-skeleton of the associahedron on ``a`` leaves.

    Vertices are binary trees; each edge is a tree with one ternary node and
    ``endpoints[i]`` indexes the two binary trees obtained by resolving it.
    """

    leafcount: int
    vertices: tuple[Tree, ...]
    edges: tuple[Tree, ...]
    endpoints: tuple[tuple[int, int], ...]

    def vertex_index(self) -> dict[Tree, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def edge_index(self) -> dict[Tree, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """vertex -> list of (edge, other vertex)."""
        adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(self.vertices))}
        for e, (a, b) in enumerate(self.endpoints):
            adj[a].append((e, b))
            adj[b].append((e, a))
        return adj

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for _, w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


def resolve_ternary(t: Tree) -> tuple[Tree, Tree]:
    """The two binary resolutions ``((xy)z)`` and ``(x(yz))`` of the unique ternary node."""
    if not t:
        raise DomainError("a leaf has no ternary node")
    if len(t) == 3:
        x, y, z = t
        return ((x, y), z), (x, (y, z))
    for i, c in enumerate(t):
        if 3 in arities(c):
            a, b = resolve_ternary(c)
            return t[:i] + (a,) + t[i + 1:], t[:i] + (b,) + t[i + 1:]
    raise DomainError("tree has no ternary node")


@lru_cache(maxsize=None)
def associahedron(a: int) -> AssocGraph:
    if a < 3:
        raise DomainError("associahedron needs at least 3 leaves")
    verts = tuple(enumerate_full(2, a - 1))
    edges = tuple(enumerate_mixed({2: a - 3, 3: 1}))
    vidx = {v: i for i, v in enumerate(verts)}
    ends = []
    for e in edges:
        x, y = resolve_ternary(e)
        ends.append((vidx[x], vidx[y]))
    return AssocGraph(a, verts, edges, tuple(ends))


def square_faces(g: AssocGraph) -> list[list[int]]:
    """All 4-cycles of the graph, each as a list of four consecutive edge indices.

    For the graph of ``associahedron(5)`` these are its three square faces.
    """
    adj = g.adjacency()
    found = {}
    for v0 in adj:
        for e1, v1 in adj[v0]:
            for e2, v2 in adj[v1]:
                if e2 == e1 or v2 == v0:
                    continue
                for e3, v3 in adj[v2]:
                    if e3 == e2 or v3 in (v0, v1):
                        continue
                    for e4, v4 in adj[v3]:
                        if v4 == v0 and e4 not in (e1, e2, e3):
                            key = frozenset((e1, e2, e3, e4))
                            if key not in found:
                                found[key] = [e1, e2, e3, e4]
    return sorted(found.values(), key=sorted)
