import json
import random
from fractions import Fraction

import numpy as np
import pytest

from operadix.cohomology import (
    AntiAssocAlgebra,
    _apply,
    _parse_formula,
    Cochain,
    DomainError,
    ShapeError,
    adjoin_unit,
    deformation_h_dims,
    delta1,
    delta2,
    delta3_derived,
    delta3_diff,
    delta3_printed,
    free_antiassoc,
    multiplication_cochain,
    random_algebra,
    random_cochain,
    standard_cohomology_dims,
    unital_collapse,
    validate,
    zero_algebra,
)


def identity(m):
    return Cochain.from_dict(1, m, {(i, i): 1 for i in range(m)})


# --- algebras -------------------------------------------------------------------

def test_validate():
    assert validate(zero_algebra(3)) == []
    idem = AntiAssocAlgebra.from_triples(1, {(0, 0, 0): 1})
    assert validate(idem) == [(0, 0, 0)]


def test_free_one_generator():
    alg = free_antiassoc(1)
    assert alg.dim == 3 and alg.basis == ["x", "(xx)", "((xx)x)"]
    assert validate(alg) == []
    e = np.eye(3, dtype=int).tolist()
    assert alg.mul(e[0], e[0]) == e[1]
    assert alg.mul(e[0], e[1]) == [0, 0, -1]
    assert alg.mul(e[1], e[0]) == e[2]
    assert alg.mul(e[1], e[1]) == [0, 0, 0]


def test_free_two_generators():
    alg = free_antiassoc(2)
    assert alg.dim == 14
    assert validate(alg) == []


def test_algebra_json_roundtrip():
    alg = random_algebra(3, random.Random(4))
    back = AntiAssocAlgebra.from_json(json.loads(alg.dumps()))
    assert back.table == alg.table


def test_shape_errors():
    with pytest.raises(ShapeError):
        AntiAssocAlgebra(2, ["a", "b"], [[[0, 0]]])
    with pytest.raises(ShapeError):
        Cochain.from_dict(1, 2, {(0, 5): 1})
    with pytest.raises(ShapeError):
        delta1(zero_algebra(2), identity(3))
    with pytest.raises(TypeError):
        AntiAssocAlgebra.from_triples(1, {(0, 0, 0): 0.5})


def test_array_roundtrip():
    c = random_cochain(2, 3, random.Random(1))
    assert Cochain.from_array(2, c.to_array()) == c


# --- unit -----------------------------------------------------------------------

def test_unital_collapse():
    alg, u = adjoin_unit(zero_algebra(2))
    assert unital_collapse(alg, u) is False
    assert validate(alg) != []
    one = AntiAssocAlgebra.from_triples(1, {(0, 0, 0): 1})
    assert unital_collapse(one, [1]) is False
    assert validate(one) != []


def test_unit_precondition():
    with pytest.raises(DomainError):
        unital_collapse(free_antiassoc(1), [1, 0, 0])
    with pytest.raises(DomainError):
        unital_collapse(zero_algebra(1), [1])


# --- differentials ---------------------------------------------------------------

def test_delta1_identity_is_multiplication():
    for alg in (free_antiassoc(1), random_algebra(3, random.Random(2))):
        assert delta1(alg, identity(alg.dim)) == multiplication_cochain(alg)


def test_zero_algebra_differentials_vanish():
    alg = zero_algebra(2)
    rng = random.Random(0)
    assert delta1(alg, random_cochain(1, 2, rng)).is_zero()
    assert delta2(alg, random_cochain(2, 2, rng)).is_zero()
    assert delta3_printed(alg, random_cochain(3, 2, rng)).is_zero()
    assert delta3_derived(alg, random_cochain(3, 2, rng)).is_zero()


def test_delta1_projection_on_free():
    alg = free_antiassoc(1)
    phi = Cochain.from_dict(1, 3, {(0, 0): 1})
    got = delta1(alg, phi).to_array()
    # a phi(b) - phi(ab) + phi(a) b with phi = projection onto x
    assert got[0, 0, 1] == 2
    assert got[0, 1, 2] == -1
    assert got[1, 0, 2] == 1
    assert sum(1 for v in got.flat if v) == 3


def test_multiplication_is_a_cocycle():
    for alg in (free_antiassoc(1), free_antiassoc(2), random_algebra(3, random.Random(5))):
        assert delta2(alg, multiplication_cochain(alg)).is_zero()


def test_delta3_by_hand_on_free():
    # g(x,x,x) = x and zero elsewhere; evaluated on (x,x,x,x,x), coordinate of ((xx)x)
    alg = free_antiassoc(1)
    g = Cochain.from_dict(3, 3, {(0, 0, 0, 0): 1})
    key = (0, 0, 0, 0, 0, 2)
    derived = [part.get(key, 0) for part in delta3_derived(alg, g).parts]
    printed = [part.get(key, 0) for part in delta3_printed(alg, g).parts]
    assert derived == [0, 1, 0, 2]
    assert printed == [0, 1, 2, 2]


def test_derived_first_term():
    # component 1 contains +a g(b,c,de): check it on an algebra where only that term survives
    alg = free_antiassoc(1)
    g = Cochain.from_dict(3, 3, {(0, 0, 1, 0): 1})
    out = delta3_derived(alg, g).parts[0]
    assert out.get((0, 0, 0, 0, 0, 1)) == 1


def test_printed_differs_in_one_term():
    rng = random.Random(11)
    alg = free_antiassoc(1)
    comps = set()
    for _ in range(10):
        g = random_cochain(3, 3, rng)
        for entry in delta3_diff(alg, g):
            comps.add(entry["component"])
    assert comps == {3}


def test_printed_component_three_breaks_the_complex():
    rng = random.Random(3)
    alg = free_antiassoc(1)
    broken = 0
    for _ in range(5):
        f = random_cochain(2, 3, rng)
        d2 = delta2(alg, f)
        assert delta3_derived(alg, d2).is_zero()
        printed = delta3_printed(alg, d2)
        assert not any(printed.parts[k] for k in (0, 1, 3))
        broken += bool(printed.parts[2])
    assert broken > 0


def test_difference_is_the_single_term():
    # printed minus derived in component 3 is -a(g(b,c,d)e) + (a g(b,c,d))e
    alg = free_antiassoc(1)
    rng = random.Random(9)
    extra = _parse_formula("-a(g(b,c,d)e) +(ag(b,c,d))e")
    for _ in range(5):
        g = random_cochain(3, 3, rng)
        p, d = delta3_printed(alg, g).parts[2], delta3_derived(alg, g).parts[2]
        diff = {k: p.get(k, 0) - d.get(k, 0) for k in set(p) | set(d)}
        diff = {k: v for k, v in diff.items() if v}
        assert diff == _apply(extra, alg, g, 3)


@pytest.mark.parametrize("seed", range(20))
def test_complex_on_random_algebras(seed):
    rng = random.Random(seed)
    alg = random_algebra(rng.randint(1, 3), rng)
    assert validate(alg) == []
    m = alg.dim
    assert delta2(alg, multiplication_cochain(alg)).is_zero()
    for _ in range(50):
        assert delta2(alg, delta1(alg, random_cochain(1, m, rng))).is_zero()
    for _ in range(50):
        assert delta3_derived(alg, delta2(alg, random_cochain(2, m, rng))).is_zero()


def test_complex_on_free_two():
    rng = random.Random(7)
    alg = free_antiassoc(2)
    for _ in range(10):
        assert delta2(alg, delta1(alg, random_cochain(1, 14, rng, max_nnz=20))).is_zero()
        assert delta3_derived(alg, delta2(alg, random_cochain(2, 14, rng, max_nnz=20))).is_zero()


# --- cohomology -----------------------------------------------------------------------

def test_zero_algebra_dims():
    for m in (1, 2):
        assert standard_cohomology_dims(zero_algebra(m)) == (m ** 2, m ** 3, m ** 4)
        assert deformation_h_dims(zero_algebra(m)) == (m ** 2, m ** 3, m ** 4)


def test_free_one_dims():
    std = standard_cohomology_dims(free_antiassoc(1))
    dfm = deformation_h_dims(free_antiassoc(1))
    assert std == (3, 0, 60)
    assert dfm == (3, 0, 0)
    assert dfm[:2] == std[:2]
    assert dfm[2] <= std[2]


@pytest.mark.parametrize("seed", range(4))
def test_dims_agree_in_low_levels(seed):
    rng = random.Random(seed)
    alg = random_algebra(2, rng)
    std, dfm = standard_cohomology_dims(alg), deformation_h_dims(alg)
    assert std[:2] == dfm[:2]
    assert dfm[2] <= std[2]
    assert all(x >= 0 for x in std + dfm)


def test_random_algebras_are_exact():
    alg = random_algebra(3, random.Random(8))
    assert all(isinstance(x, Fraction) for r in alg.table for v in r for x in v)
