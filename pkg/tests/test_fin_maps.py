from itertools import product

import pytest
from hypothesis import given, strategies as st

from doldkan.fin_maps import (
    FinMap, FinMapError, all_maps, check_cosimplicial_identities, check_simplicial_identities,
    codegeneracy, coface, compose, cyclic, degeneracy, face, generators, identity, mu_top,
    simplicial_view,
)


@st.composite
def finmaps(draw, n=None, m=None):
    n = draw(st.integers(0, 4)) if n is None else n
    m = draw(st.integers(0, 4)) if m is None else m
    return FinMap(n, m, draw(st.lists(st.integers(0, m), min_size=n + 1, max_size=n + 1)))


def test_small_examples():
    f = FinMap(2, 2, [2, 0, 1])
    assert compose(identity(2), f) == f
    assert compose(codegeneracy(1, 0), coface(0, 0)) == identity(0)
    t = cyclic(2)
    assert compose(t, compose(t, t)) == identity(2)
    assert mu_top(2).values == (0, 1, 0)
    assert cyclic(2).values == (1, 2, 0)
    assert coface(1, 1).values == (0, 2) and coface(1, 1).target_dim == 2
    assert degeneracy(0, 0) == coface(0, 1)


def test_generators_shape():
    g = generators(3)
    assert len(g["coface"]) == 5 and len(g["codegeneracy"]) == 3
    assert all(a.source_dim == 3 for gens in g.values() for a in gens)
    v = simplicial_view(2)
    assert v["faces"][1] == face(2, 1) == codegeneracy(2, 1)


def test_identities():
    assert check_cosimplicial_identities(4) == []
    assert check_simplicial_identities(4) == []


def test_cyclic_face_relation():
    # t_n d_i = d_{i-1} t_{n-1}, read as maps [n] -> [n-1] composed on the other side
    for n in range(1, 5):
        for i in range(1, n + 1):
            assert compose(face(n, i), cyclic(n)) == compose(cyclic(n - 1), face(n, i - 1))


def test_parse_roundtrip_and_errors():
    f = FinMap(2, 1, [0, 1, 1])
    assert FinMap.parse(str(f)) == f
    with pytest.raises(FinMapError):
        FinMap(1, 1, [0, 2])
    with pytest.raises(FinMapError):
        FinMap(1, 1, [0])


def test_all_maps_count():
    assert len(all_maps(2, 1)) == 2 ** 3
    assert len(set(all_maps(1, 2))) == 9


@given(finmaps(), st.data())
def test_composition_associative(f, data):
    g = data.draw(finmaps(n=f.target_dim))
    h = data.draw(finmaps(n=g.target_dim))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(identity(f.target_dim), f) == f == compose(f, identity(f.source_dim))


@given(finmaps())
def test_monotone_flags(f):
    assert f.is_monotone() == all(a <= b for a, b in zip(f.values, f.values[1:]))
    assert f.is_injective() == (len(set(f.values)) == len(f.values))
    assert f.is_surjective() == (set(f.values) == set(range(f.target_dim + 1)))
