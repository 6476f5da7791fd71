from doldkan import exact_linear as el
from doldkan.exact_linear import CoeffRing, ZZ
from doldkan.sampling import random_complex, random_dg_ring, random_unimodular, rng_for


def test_random_complex_homology_known():
    for ring in (ZZ, CoeffRing(2), CoeffRing(5)):
        rng = rng_for(1, f"rc{ring.modulus}")
        for _ in range(25):
            C, H = random_complex(rng, 4, 3, ring)
            assert max(C.ranks) <= 3 and C.top_degree == 4
            assert el.cohomology(C) == H


def test_unimodular():
    rng = rng_for(1, "uni")
    for n in range(1, 5):
        assert abs(el.determinant(random_unimodular(rng, n))) == 1


def test_streams_are_reproducible():
    a = [random_dg_ring(rng_for(7, "s")).table for _ in range(1)]
    b = [random_dg_ring(rng_for(7, "s")).table for _ in range(1)]
    assert a == b
    assert rng_for(7, "s").random() != rng_for(7, "t").random()
