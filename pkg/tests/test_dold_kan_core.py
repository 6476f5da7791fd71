from math import comb

import pytest

from doldkan import exact_linear as el
from doldkan import dold_kan_core as dk
from doldkan.exact_linear import BoundedComplex, CoeffRing, ZZ
from doldkan.fin_maps import all_maps, coface, random_map
from doldkan.sampling import random_complex, random_elt, rng_for
from doldkan.tensor_exterior import count_surjections

TIMES2 = BoundedComplex(ZZ, [1, 1], [el.as_matrix([[2]])])


def sample(label, count=6, ring=ZZ):
    rng = rng_for(11, label)
    return [random_complex(rng, 4, 3, ring)[0] for _ in range(count)]


def test_K_ranks_and_constant():
    A = el.direct_sum(el.sphere(0), el.disk(1))
    K = dk.KObject(A)
    for n in range(5):
        assert K.rank(n) == sum(comb(n, i) * A.rank(i) for i in range(A.top_degree + 1))
    C = dk.ConstantCosimplicial(2)
    assert dk.normalize(C, 3).ranks == [2, 0, 0, 0]
    assert dk.cohomotopy(C, 2).betti == [2, 0, 0]


def test_nqa_ranks_formula():
    for A in sample("nqa-ranks", 4):
        N = dk.NQA(A)
        for n in range(A.top_degree + 1):
            want = sum(A.rank(r) * count_surjections(r, n) for r in range(n, A.top_degree + 1))
            assert N.rank(n) == want


def test_normalized_K_is_A():
    for A in sample("nka"):
        qu = dk.normalize_quotient(dk.KObject(A), A.top_degree).complex
        assert qu.ranks == A.ranks
        assert all(el.mat_equal(qu.diff(n), A.diff(n)) for n in range(A.top_degree))
        assert dk.moore_to_quotient_ok(dk.KObject(A), A.top_degree)


def test_Q_with_zero_differential_is_diagonal():
    A = el.direct_sum(el.sphere(0), el.sphere(1))
    Q = dk.QObject(A)
    a = ((1, 0), (1,))
    for alpha in all_maps(1, 2):
        want = {((1, 0), (alpha.values[1],)): 1} if alpha.values[1] else {}
        want = {k: c for k, c in want.items()}
        got = Q.act(alpha, a)
        # v_{α(1)} - v_{α(0)} with v_0 = 0
        exp = {}
        if alpha.values[1]:
            exp[((1, 0), (alpha.values[1],))] = 1
        if alpha.values[0]:
            exp[((1, 0), (alpha.values[0],))] = exp.get(((1, 0), (alpha.values[0],)), 0) - 1
        assert got == {k: c for k, c in exp.items() if c}


def test_Q_functorial_and_p_hat_natural():
    rng = rng_for(3, "qfun")
    for A in sample("qfun", 3):
        Q, K = dk.QObject(A), dk.KObject(A)
        for _ in range(100):
            n, m, k = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)
            a, b = random_map(rng, n, m), random_map(rng, m, k)
            x = random_elt(rng, Q.basis(n), ZZ, 0.3)
            assert Q.act_elt(b, Q.act_elt(a, x)) == Q.act_elt(dk.compose(b, a), x)
            assert dk.p_hat_elt(Q.act_elt(a, x)) == K.act_elt(a, dk.p_hat_elt(x))
    assert dk.p_hat_elt({((0, 0), (1, 1)): 1}) == {}


def test_cohomotopy_examples():
    H = dk.cohomotopy(dk.QObject(TIMES2), 1)
    assert H.group(0) == (0, ()) and H.group(1) == (0, (2,))
    for r in range(1, 4):
        H = dk.cohomotopy(dk.TensorPowerV(r), r)
        assert H.betti == [0] * r + [1] and not any(H.torsion)


def test_j_h_examples():
    assert dk.check_kequivq_i(TIMES2) == []
    A0 = el.direct_sum(el.sphere(0), el.sphere(0))
    N = dk.NQA(A0)
    assert el.mat_equal(N.j_matrix(0), el.identity(2))
    assert N.h_matrix(0).shape == (0, 2)


def test_l_examples():
    A = el.direct_sum(el.sphere(0), el.sphere(2))
    N = dk.NQA(A)
    L0 = N.l_matrix(0)
    assert L0[N.index(0)[((0, 0), ())], 0] == 1
    L2 = N.l_matrix(2)
    col = {N.basis(2)[i]: int(L2[i, 0]) for i in range(N.rank(2)) if L2[i, 0]}
    assert col == {((2, 0), (1, 2)): 1, ((2, 0), (2, 1)): -1}


def test_connes_B_examples():
    N = dk.NQA(el.disk(0))
    assert N.connes_B(((0, 0), ()), 0) == {((1, 0), (1,)): 1}
    for A in sample("broutes", 4):
        N = dk.NQA(A)
        for n in range(min(A.top_degree, 3)):
            for key in N.basis(n):
                if len(key[1]) == n:
                    a = dk.prune(N.connes_B(key, n))
                    assert a == dk.prune(N.connes_B_formula(key, n)) == dk.prune(N.connes_B_permutation(key, n))


def test_connes_B_formula_differs_off_permutations():
    # the closed formula drops a term a ⊗ ∂_0 N x that survives when r > n
    N = dk.NQA(el.disk(2))
    assert not el.mat_equal(N.B_matrix(1, "cyclic"), N.B_matrix(1, "formula"))


def test_mixed_structures():
    for ring in (ZZ, CoeffRing(5)):
        for A in sample(f"mixed{ring.modulus}", 3, ring):
            assert dk.check_kequivq_ii(A) == []
            X, Y = dk.mixed_from_complex(A), dk.mixed_nqa(A)
            N = dk.NQA(A)
            L = [N.l_matrix(n) for n in range(A.top_degree + 1)]
            assert dk.equivalence_check(L, X, Y)["equivalence"]
            ident = [el.identity(A.rank(n)) for n in range(A.top_degree + 1)]
            assert dk.equivalence_check(ident, X, X)["equivalence"]
    A = sample("pemix", 1, CoeffRing(5))[0]
    P = [dk.NQA(A).p_hat_matrix(n) for n in range(A.top_degree + 1)]
    res = dk.equivalence_check(P, dk.mixed_nqa(A), dk.mixed_from_complex(A, scaled=True))
    assert res["equivalence"]


def test_rescaling_needs_a_field():
    with pytest.raises(ValueError):
        dk.rescaled_p_hat(TIMES2, 1)


def test_bar_of_Q_map():
    rng = rng_for(5, "bar")
    A = sample("bar", 1)[0]
    g = [el.identity(A.rank(n)) * 3 for n in range(A.top_degree + 1)]
    f = dk.CosimplicialMap(dk.QObject(A), dk.QObject(A), dk.q_of_map(A, A, g))
    assert f.check(3) == []
    P = dk.BarPackage(A, A, f)
    assert P.check() == []
    for n in range(A.top_degree + 1):
        assert el.mat_equal(P.bar(n), g[n])
        assert el.is_zero(P.delta(n))
