import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import Matrix, ZZ as SZZ
from sympy.matrices.normalforms import smith_normal_form

from doldkan import exact_linear as el
from doldkan.dold_kan_core import _row_complex
from doldkan.exact_linear import BoundedComplex, CoeffRing, ZZ

small_ints = st.integers(-6, 6)


def matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def sympy_factors(rows):
    D = smith_normal_form(Matrix(rows), domain=SZZ)
    return [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i] != 0]


def test_smith_examples():
    U, D, V = el.smith(el.as_matrix([[2, 0], [0, 3]]))
    assert D.tolist() == [[1, 0], [0, 6]]
    U, D, V = el.smith(el.as_matrix([[2, 4], [6, 8]]))
    assert D.tolist() == [[2, 0], [0, 4]]
    U, D, V = el.smith(el.zeros(2, 3))
    assert el.is_zero(D) and el.mat_equal(U, el.identity(2)) and el.mat_equal(V, el.identity(3))


@given(matrices())
def test_smith_against_sympy(rows):
    M = el.as_matrix(rows)
    U, D, V = el.smith(M)
    assert el.mat_equal(el.matmul(el.matmul(U, M), V), D)
    assert abs(el.determinant(U)) == 1 and abs(el.determinant(V)) == 1
    diag = [int(D[i, i]) for i in range(min(D.shape)) if D[i, i]]
    assert diag == sympy_factors(rows)
    assert el.rank(M) == Matrix(rows).rank()


@given(matrices())
def test_kernel_and_solve(rows):
    M = el.as_matrix(rows)
    K = el.kernel(M)
    assert el.is_zero(el.matmul(M, K))
    assert K.shape[1] == M.shape[1] - el.rank(M)
    x = el.as_matrix([[1]] * M.shape[1])
    y = el.matmul(M, x)
    assert el.in_image(M, y)
    assert el.mat_equal(el.matmul(M, el.solve(M, y)), y)


@given(matrices(), st.sampled_from([2, 3, 5]))
def test_rank_mod_p(rows, p):
    R = CoeffRing(p)
    M = R.reduce_matrix(el.as_matrix(rows))
    # over Z/p the rank counts the invariant factors prime to p
    assert el.rank(M, R) == len([f for f in sympy_factors(rows) if f % p])


def test_cohomology_examples():
    for n in range(3):
        H = el.cohomology(el.disk(n))
        assert H.is_zero()
        H = el.cohomology(el.sphere(n))
        assert H.group(n) == (1, ()) and all(H.group(k) == (0, ()) for k in range(n))
    times2 = BoundedComplex(ZZ, [1, 1], [el.as_matrix([[2]])])
    H = el.cohomology(times2)
    assert H.group(0) == (0, ()) and H.group(1) == (0, (2,))
    assert el.cohomology(BoundedComplex(CoeffRing(2), [1, 1], [el.as_matrix([[2]])])).betti == [1, 1]


def test_builders():
    cone = el.cone([el.zeros(0, 0), el.identity(1)], el.sphere(1), el.sphere(1))
    assert cone.ranks == [0, 1, 1] and el.cohomology(cone).is_zero()
    C = el.direct_sum(el.sphere(1), el.disk(0))
    assert el.cohomology(el.tensor(el.sphere(0), C)) == el.cohomology(C)
    assert el.cohomology(el.tensor(el.disk(1), el.disk(1))).is_zero()
    T = el.tensor(el.sphere(1), el.sphere(2))
    assert el.cohomology(T).group(3) == (1, ())


def test_bad_complex_rejected():
    with pytest.raises(el.LinearAlgebraError):
        BoundedComplex(ZZ, [1, 1, 1], [el.as_matrix([[1]]), el.as_matrix([[1]])])


def test_composite_modulus_refuses_solving():
    with pytest.raises(NotImplementedError):
        el.solve(el.as_matrix([[2]]), el.as_matrix([[2]]), CoeffRing(4))


def test_contraction_examples():
    A = el.direct_sum(el.sphere(1), el.sphere(2))
    ct = el.contraction(A, A, [el.identity(A.rank(n)) for n in range(A.top_degree + 1)])
    assert el.check_contraction(A, A, ct)
    C, S, p = _row_complex(2)
    ct = el.contraction(C, S, p)
    assert el.check_contraction(C, S, ct)
    D = el.disk(1)
    Z = BoundedComplex(ZZ, [0, 0, 0])
    ct = el.contraction(D, Z, [el.zeros(0, D.rank(n)) for n in range(3)])
    assert el.check_contraction(D, Z, ct)


def test_json_roundtrip():
    C = el.direct_sum(el.sphere(1), el.disk(0))
    assert BoundedComplex.from_json(C.to_json()).differentials[0].tolist() == C.differentials[0].tolist()
