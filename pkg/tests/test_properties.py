from hypothesis import given, settings, strategies as st

from doldkan import exact_linear as el
from doldkan import dold_kan_core as dk
from doldkan import ring_layer as rl
from doldkan.exact_linear import CoeffRing, ZZ
from doldkan.fin_maps import random_map
from doldkan.sampling import random_complex, random_dg_ring, random_elt, rng_for

rings = st.sampled_from([ZZ, CoeffRing(2), CoeffRing(3)])
seeds = st.integers(0, 10 ** 6)


@settings(max_examples=25)
@given(seeds, rings)
def test_round_trip_and_contraction(seed, ring):
    A, H = random_complex(rng_for(seed, "prop"), 3, 2, ring)
    qu = dk.normalize_quotient(dk.KObject(A), A.top_degree).complex
    assert qu.ranks == A.ranks
    assert el.cohomology(qu) == H
    assert dk.check_kequivq_i(A) == []
    assert dk.cohomotopy(dk.QObject(A), A.top_degree) == H


@settings(max_examples=25)
@given(seeds, rings)
def test_q_action_composes(seed, ring):
    rng = rng_for(seed, "qact")
    A, _ = random_complex(rng, 3, 2, ring)
    Q = dk.QObject(A)
    n, m, k = rng.randint(0, 3), rng.randint(0, 3), rng.randint(0, 3)
    a, b = random_map(rng, n, m), random_map(rng, m, k)
    x = random_elt(rng, Q.basis(n), ring)
    assert Q.act_elt(b, Q.act_elt(a, x)) == Q.act_elt(dk.compose(b, a), x)


@settings(max_examples=15)
@given(seeds, st.sampled_from([ZZ, CoeffRing(2)]))
def test_circ_is_associative_and_natural(seed, ring):
    rng = rng_for(seed, "circ")
    A = random_dg_ring(rng, ring)
    Q = dk.QObject(A)
    n, m = rng.randint(0, 2), rng.randint(0, 2)
    x, y, z = (random_elt(rng, Q.basis(n), ring, 0.3) for _ in range(3))
    assert rl.circ(A, rl.circ(A, x, y), z) == rl.circ(A, x, rl.circ(A, y, z))
    a = random_map(rng, n, m)
    lhs = Q.act_elt(a, rl.circ(A, x, y))
    rhs = rl.circ(A, Q.act_elt(a, x), Q.act_elt(a, y))
    assert rl.prune(lhs, ring.modulus) == rl.prune(rhs, ring.modulus)
