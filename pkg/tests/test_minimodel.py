from fractions import Fraction

import pytest

from operadix import exactla, trees
from operadix.exactla import QMatrix
from operadix.freeoperad import OperadElement, apply_derivation, compose, mono_shape
from operadix.minimodel import (
    MU2,
    MU3,
    MU5,
    StructuralError,
    arity5_cycle_analysis,
    arity6_degree_check,
    bracket_element,
    builtin_model,
    check_square_zero,
    degree1_homology,
    mu5_cycle_render,
)
from operadix.opseries import minimal_generator_euler
from operadix.pseries import DomainError, PSeries


def test_model_shape():
    m = builtin_model()
    assert m.rules["mu2"].is_zero()
    assert len(m.rules["mu3"].terms) == 2
    for g in MU5:
        rule = m.rules[g.name]
        assert len(rule.terms) == 8
        assert {abs(c) for c in rule.terms.values()} == {1}
        assert rule.degree == g.degree - 1
    assert m.rules["mu3"].degree == MU3.degree - 1


def test_rendering():
    m = builtin_model()
    assert m.rules["mu3"].render() == "((••)•) + (•(••))"
    first = {trees.encode(mono_shape(k)): c for k, c in m.rules["mu5_1"].terms.items()}
    assert first["(•(••(••)))"] == 1


def test_mu5_terms_are_compositions():
    g2, g3 = OperadElement.gen(MU2), OperadElement.gen(MU3)
    term = compose(compose(g2, 2, g3), 4, g2)
    assert {trees.encode(mono_shape(k)) for k in term.terms} == {"(•(••(••)))"}
    (c,) = term.terms.values()
    assert builtin_model().rules["mu5_1"].terms[next(iter(term.terms))] == c


def test_square_zero():
    assert check_square_zero(builtin_model())


def test_sign_flip_breaks_square_zero():
    m = builtin_model()
    rule = m.rules["mu5_1"]
    key = next(iter(rule.terms))
    flipped = OperadElement({k: (-c if k == key else c) for k, c in rule.terms.items()})
    assert not check_square_zero(m.with_rule("mu5_1", flipped))


def test_doubled_mu3_boundary_still_squares_to_zero():
    # d is linear in the mu3 rule and every mu5 boundary term has exactly one mu3,
    # so scaling that rule scales the obstruction, which is zero
    m = builtin_model()
    assert check_square_zero(m.with_rule("mu3", m.rules["mu3"] * 2))


def test_arity5_analysis():
    assert arity5_cycle_analysis() == {
        "kernel_dim": 7,
        "squares_rank": 3,
        "required_generators": 4,
        "mu5_completeness": True,
    }


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_render_is_alternating_closed_path(i):
    r = mu5_cycle_render(i)
    assert r["length"] == len(r["edges"]) == 8
    assert r["vertices"][0] == r["vertices"][-1]
    assert len(set(r["vertices"])) == 8
    assert all(r["signs"][k] == -r["signs"][(k + 1) % 8] for k in range(8))
    g = trees.associahedron(5)
    eidx, vidx = g.edge_index(), g.vertex_index()
    for k, e in enumerate(r["edges"]):
        ends = {g.vertices[j] for j in g.endpoints[eidx[trees.decode(e)]]}
        assert ends == {trees.decode(r["vertices"][k]), trees.decode(r["vertices"][k + 1])}
        assert all(trees.decode(v) in vidx for v in r["vertices"])


def test_render_one_passes_marked_edges():
    edges = mu5_cycle_render(1)["edges"]
    assert "(•(••)(••))" in edges and "((••)(••)•)" in edges


def test_render_domain():
    with pytest.raises(DomainError):
        mu5_cycle_render(5)


def test_mu5_independent_modulo_squares():
    g = trees.associahedron(5)
    idx = g.edge_index()

    def vec(x):
        v = [Fraction(0)] * len(g.edges)
        for k, c in x.terms.items():
            v[idx[mono_shape(k)]] += c
        return v

    m = builtin_model()
    g3 = OperadElement.gen(MU3)
    squares = [vec(apply_derivation(m.rules, compose(g3, i, g3))) for i in (1, 2, 3)]
    mu5 = [vec(m.rules[h.name]) for h in MU5]
    assert exactla.rank(QMatrix(squares)) == 3
    assert exactla.rank(QMatrix(squares + mu5)) == 7


def test_non_cycle_is_reported():
    m = builtin_model()
    broken = m.with_rule("mu5_1", bracket_element("+(•(••(••))) +(••(•(••)))"))
    with pytest.raises(StructuralError):
        arity5_cycle_analysis(broken)


def test_degree_one_homology():
    assert degree1_homology(5) == 0
    assert degree1_homology(5, with_mu5=False) == 4
    assert len(trees.associahedron(6).vertices) == 42


def test_arity6():
    assert arity6_degree_check()


def test_generator_counts_match_euler():
    euler = minimal_generator_euler(PSeries({1: 1, 2: 1, 3: 1}, 5), 5)
    model = builtin_model()
    counts = {}
    for g in model.generators:
        counts[g.arity] = counts.get(g.arity, 0) + (-1) ** g.degree
    assert [counts.get(a, 0) for a in range(2, 6)] == euler


def test_export():
    obj = builtin_model().to_json()
    assert [g["name"] for g in obj["generators"]] == ["mu2", "mu3", "mu5_1", "mu5_2", "mu5_3", "mu5_4"]
    assert len(obj["differential"]["mu5_3"]) == 8
