from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from filiform.errors import SingularMatrix
from filiform.linalg import Subspace, determinant, inverse, matmul, matvec, nullspace, rank, rref

small = st.integers(-4, 4)


@st.composite
def square(draw, n):
    return [[Fraction(draw(small)) for _ in range(n)] for _ in range(n)]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def test_rref_and_rank():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    red, piv = rref(rows)
    assert piv == [0, 1]
    assert red == [[1, 0, 1], [0, 1, 1]]
    assert rank(rows) == 2


@given(st.integers(1, 4).flatmap(lambda n: square(n)))
def test_nullspace_is_kernel(m):
    n = len(m)
    kernel = nullspace(m, n)
    assert len(kernel) + rank(m) == n
    for v in kernel:
        assert not any(matvec(m, v))


@given(st.integers(1, 4).flatmap(lambda n: square(n)))
def test_inverse_when_determinant_nonzero(m):
    n = len(m)
    if determinant(m) == 0:
        with pytest.raises(SingularMatrix):
            inverse(m)
    else:
        assert matmul(m, inverse(m)) == identity(n)


@given(square(3), square(3))
def test_determinant_is_multiplicative(a, b):
    assert determinant(matmul(a, b)) == determinant(a) * determinant(b)


def test_subspace_operations():
    n = 4
    a = Subspace.span_of_basis(n, [1, 2])
    b = Subspace(n, [[1, 1, 0, 0], [0, 0, 0, 0]])
    assert b.dim == 1
    assert b <= a
    assert not a <= b
    assert (a + Subspace.span_of_basis(n, [4])).dim == 3
    assert [1, -3, 0, 0] in a
    assert [0, 0, 1, 0] not in a
    assert Subspace(n, [[2, 0, 0, 0], [0, 5, 0, 0]]) == a
    assert Subspace.zero(n).dim == 0 and Subspace.whole(n).dim == n
