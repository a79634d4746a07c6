import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filiform.errors import FormatError, IndexOutOfRange, ParametricInput, SingularMatrix
from filiform.exactmath import Polynomial, parse_polynomial
from filiform.family import bratzlavsky_adapted
from filiform.liealg import (
    BasisChange,
    LieAlgebra,
    bracket_values as bracket,
    bracket_coord,
    change_basis,
    dumps_algebra,
    is_lie,
    jacobi_check,
    jacobi_violations,
    jacobiator,
    loads_algebra,
    model_algebra,
)

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def heisenberg():
    return LieAlgebra(3, {(1, 2): {3: 1}})


def test_antisymmetric_folding():
    g = LieAlgebra(3, {(2, 1): {3: 2}})
    assert g.structure_constant(1, 2, 3) == -2
    assert g.structure_constant(2, 1, 3) == 2
    assert g.structure_constant(1, 1, 3) == 0
    with pytest.raises(ValueError):
        LieAlgebra(3, {(1, 1): {2: 1}})


def test_index_errors():
    with pytest.raises(IndexOutOfRange):
        LieAlgebra(3, {(1, 4): {2: 1}})
    with pytest.raises(IndexOutOfRange):
        LieAlgebra(3, {(1, 2): {5: 1}})
    with pytest.raises(IndexOutOfRange):
        heisenberg().bracket_basis(0, 1)


def test_model_algebra():
    g = model_algebra(6)
    assert g.structure_constant(1, 4, 3) == 1
    assert len(g.table) == 4
    assert jacobi_check(g) == []


@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3),
       st.lists(small, min_size=3, max_size=3), small)
def test_bracket_bilinear_and_antisymmetric(u, v, w, c):
    g = LieAlgebra(3, {(1, 2): {3: 1}, (1, 3): {2: Fraction(1, 2)}})
    uv = bracket(g, u, v)
    vu = bracket(g, v, u)
    assert [a + b for a, b in zip(uv, vu)] == [0, 0, 0]
    lhs = bracket(g, [a + c * b for a, b in zip(u, w)], v)
    rhs = [a + c * b for a, b in zip(uv, bracket(g, w, v))]
    assert lhs == rhs


def test_jacobi_detects_violation():
    bad = LieAlgebra(4, {(1, 2): {3: 1}, (1, 3): {4: 1}, (2, 3): {4: 1}, (1, 4): {2: 1}})
    assert jacobi_check(bad)
    assert not is_lie(bad)
    assert is_lie(heisenberg())


def test_symbolic_jacobi_coordinates():
    # [e1,e2]=e3 plus [e1,e3]=x e2 and [e2,e3]=y e1 gives polynomial coordinates
    g = LieAlgebra(3, {(1, 2): {3: 1}, (1, 3): {2: "x"}, (2, 3): {1: "y"}})
    assert g.parameters == ("x", "y")
    assert jacobi_check(g) == []  # every 3-dim antisymmetric table with distinct indices is Jacobi
    g4 = LieAlgebra(4, {(1, 4): {3: "x"}, (1, 3): {2: 1}, (3, 4): {2: "y"}, (2, 4): {1: "x*y"}})
    vs = jacobi_violations(g4)
    assert vs
    for v in vs:
        j = jacobiator(g4, v.i, v.j, v.k)
        for h, c in v.coords.items():
            assert j[h - 1] == c and c


def test_specialize():
    g = LieAlgebra(3, {(1, 2): {3: "x + 1"}})
    assert not g.is_numeric
    with pytest.raises(ParametricInput):
        g.numeric_table()
    h = g.specialize({"x": -1})
    assert h.is_numeric and h.table == {}
    k = g.specialize({"x": "2*y"})
    assert k.parameters == ("y",)


def random_change(rng, n):
    while True:
        rows = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        try:
            return BasisChange(rows)
        except SingularMatrix:
            continue


def test_change_basis_functoriality():
    import random

    rng = random.Random(3)
    g = bratzlavsky_adapted(6, [1, 2])
    for _ in range(3):
        n_, m_ = random_change(rng, 6), random_change(rng, 6)
        assert change_basis(g, n_ @ m_) == change_basis(change_basis(g, n_), m_)
        assert change_basis(change_basis(g, n_), n_.inverse()) == g
    assert change_basis(g, BasisChange.identity(6)) == g


def test_change_basis_preserves_jacobi():
    import random

    g = bratzlavsky_adapted(7, [1, -1, 2])
    m = random_change(random.Random(9), 7)
    assert jacobi_check(change_basis(g, m)) == []


def test_singular_basis_change():
    with pytest.raises(SingularMatrix):
        BasisChange([[1, 2], [2, 4]])


def test_bracket_coord():
    g = heisenberg()
    assert bracket_coord(g, 1, 2, 3) == 1
    assert bracket_coord(g, 2, 1, 3) == -1


def test_file_round_trip():
    g = LieAlgebra(5, {(1, 3): {2: 1}, (1, 4): {3: 1}, (1, 5): {4: 1}, (2, 5): {1: "3/2*a_1 - b_1_2^2"}})
    text = dumps_algebra(g)
    back = loads_algebra(text)
    assert back == g
    assert back.parameters == g.parameters
    data = json.loads(text)
    assert data["dim"] == 5


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"brackets": []}',
        '{"dim": 0}',
        '{"dim": 3, "extra": 1}',
        '{"dim": 3, "brackets": [{"i": 2, "j": 1, "coeffs": {"3": "1"}}]}',
        '{"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"4": "1"}}]}',
        '{"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1}}]}',
        '{"dim": 3, "brackets": [{"i": 1, "j": 2}]}',
        '{"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "x"}}]}',
        '{"dim": 3, "brackets": [{"i": 1, "j": 2, "coeffs": {"3": "1"}}, {"i": 1, "j": 2, "coeffs": {"3": "1"}}]}',
    ],
)
def test_file_format_errors(text):
    with pytest.raises(FormatError):
        loads_algebra(text)
