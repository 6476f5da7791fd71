from itertools import product
from math import factorial

from hypothesis import given, strategies as st

from doldkan.fin_maps import FinMap, coface, codegeneracy, compose, face
from doldkan import tensor_exterior as te


def words_elt(n, max_len=3):
    letters = st.integers(1, n)
    word = st.lists(letters, min_size=0, max_size=max_len).map(tuple)
    return st.dictionaries(word, st.integers(-3, 3), max_size=4).map(lambda d: te.prune(d))


def test_fin_action_examples():
    assert te.fin_action_T(coface(1, 0), {(1,): 1}) == {(2,): 1, (1,): -1}
    x = {(1, 2): 3, (2,): -1}
    assert te.fin_action_T(FinMap(2, 2, [0, 1, 2]), x) == x
    assert te.fin_action_T(codegeneracy(2, 0), {(1, 2): 1}) == {}


def test_theta_examples():
    assert te.theta({(1,): 1}) == {(1, 1): 1}
    assert te.theta({(1, 2): 1}) == {(1, 1, 2): 1, (1, 2, 2): -1}
    assert te.theta(te.theta({(1, 2): 1})) == {}


def test_projection_examples():
    assert te.project_p({(2, 1): 1}) == {(1, 2): -1}
    assert te.project_p({(1, 1): 1}) == {}
    assert te.epsilon(2) == {(1, 2): 1, (2, 1): -1}
    for n in range(7):
        assert te.p_of_epsilon(n) == factorial(n)


def test_surjection_count_by_enumeration():
    for r in range(5):
        for n in range(r + 1):
            brute = sum(1 for w in product(range(1, n + 1), repeat=r) if set(w) == set(range(1, n + 1)))
            assert len(te.surjections(r, n)) == brute == te.count_surjections(r, n)
    assert len(te.surjections(3, 2)) == 6


def test_epsilon_killed_by_faces():
    for n in range(1, 5):
        acc = {}
        for i in range(n + 1):
            te.add_into(acc, te.fin_action_T(face(n, i), te.epsilon(n)), (-1) ** i)
        assert te.reduce_to_surjections(acc, n - 1) == {}


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), words_elt(n), words_elt(n))))
def test_theta_is_square_zero_derivation(args):
    n, x, y = args
    assert te.theta(te.theta(x)) == {}
    for wx, cx in x.items():
        for wy, cy in y.items():
            lhs = te.theta({wx + wy: 1})
            rhs = te.add_into(te.word_mul(te.theta({wx: 1}), {wy: 1}),
                              te.word_mul({wx: 1}, te.theta({wy: 1})), (-1) ** len(wx))
            assert lhs == te.prune(rhs)


@given(st.integers(0, 3).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 3), words_elt(max(n, 1)))),
       st.data())
def test_action_is_functorial_and_p_natural(args, data):
    n, m, x = args
    x = {w: c for w, c in x.items() if all(l <= n for l in w)}
    a = FinMap(n, m, data.draw(st.lists(st.integers(0, m), min_size=n + 1, max_size=n + 1)))
    k = data.draw(st.integers(0, 3))
    b = FinMap(m, k, data.draw(st.lists(st.integers(0, k), min_size=m + 1, max_size=m + 1)))
    assert te.fin_action_T(compose(b, a), x) == te.fin_action_T(b, te.fin_action_T(a, x))
    assert te.fin_action_ext(a, te.project_p(x)) == te.project_p(te.fin_action_T(a, x))
