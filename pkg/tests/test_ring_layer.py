import pytest

from doldkan import exact_linear as el
from doldkan import ring_layer as rl
from doldkan.dold_kan_core import KObject, QObject, p_hat_elt
from doldkan.exact_linear import CoeffRing, ZZ
from doldkan.sampling import random_dg_ring, random_elt, rng_for

Z2 = CoeffRing(2)


def test_family_axioms():
    for ring in (ZZ, Z2):
        for A in (rl.truncated_polynomial(ring, 0, 3), rl.truncated_polynomial(ring, 1, 3),
                  rl.koszul_pair(ring, 2), rl.square_zero(ring, 3), rl.triangular_bimodule(ring, 1)):
            assert A.check_axioms() == []
            assert rl.StructDGRing.from_json(A.to_json()).table == A.table


def test_bad_table_rejected():
    A = rl.koszul_pair(ZZ, 1)
    table = dict(A.table)
    table[((0, 0), (1, 0))] = {(1, 0): 2}
    with pytest.raises(rl.DGRingError):
        rl.StructDGRing(ZZ, A.ranks, A.differentials, table, A.unit)


def test_upsilon_examples():
    A = rl.koszul_pair(ZZ, 1)  # x in degree 1, dx = y in degree 2
    one = {((0, 0), ()): 1}
    assert rl.upsilon(A, A, one, one) == {(((0, 0), (0, 0)), ()): 1}
    got = rl.upsilon(A, A, {((1, 0), (1,)): 1}, {((1, 0), (1,)): 1})
    assert got == {(((1, 0), (1, 0)), (1, 1)): 1, (((1, 0), (2, 0)), (1, 1, 1)): -1}


def test_circ_examples():
    A = rl.koszul_pair(ZZ, 1)
    one = rl.q_unit(A)
    y = {((1, 0), (1, 2)): 1}
    assert rl.circ(A, one, y) == y == rl.circ(A, y, one)
    # ωη ⊗ v1v1 - ω dη ⊗ v1v1v1 with ωη = 0 here
    assert rl.circ(A, {((1, 0), (1,)): 1}, {((1, 0), (1,)): 1}) == {((3, 0), (1, 1, 1)): -1}


def test_p_hat_is_multiplicative():
    rng = rng_for(2, "phat")
    for ring in (ZZ, Z2):
        A = random_dg_ring(rng, ring)
        Q = QObject(A)
        for _ in range(200):
            n = rng.randint(0, 3)
            x, y = (random_elt(rng, Q.basis(n), ring, 0.3) for _ in range(2))
            lhs = p_hat_elt(rl.circ(A, x, y), ring.modulus)
            rhs = rl.k_product(A, p_hat_elt(x, ring.modulus), p_hat_elt(y, ring.modulus))
            assert lhs == rl.prune(rhs, ring.modulus)


def test_tensor_rings():
    assert rl.tensor_dg(el.zero_complex(), 3).ranks == [1]
    S0 = rl.S_ring(0, 3)
    assert S0.ranks == [4] and all(not S0.d(k) for k in S0.all_keys())
    for n in range(2):
        H = el.cohomology(rl.D_ring(n, 4))
        assert H.betti[0] == 1 and sum(H.betti) == 1 and not any(H.torsion)


def test_qt_iso_trivial_cases():
    for U in (el.zero_complex(), el.sphere(0)):
        assert rl.qt_iso_report(U, 3, 2)["ok"]


def test_shuffle_conventions():
    assert list(rl.shuffles(1, 1)) and len(list(rl.shuffles(2, 2))) == 6
    A = rl.truncated_polynomial(ZZ, 0, 1)
    e1 = {((0, 0), (1,)): 1}
    assert rl.shuffle_product(A, e1, 1, e1, 1) == {((0, 0), (1, 2)): 1, ((0, 0), (2, 1)): -1}
    B = rl.truncated_polynomial(ZZ, 0, 3)
    x = {((0, 1), ()): 1}
    assert rl.shuffle_product(B, x, 0, x, 0) == {((0, 2), ()): 1}


def test_homotopy_ring():
    rng = rng_for(4, "homotopy")
    for ring in (ZZ, Z2):
        for _ in range(3):
            H = rl.HomotopyRing(random_dg_ring(rng, ring))
            assert H.check_l_multiplicative() == []
            assert H.check_B_derivation() == []
            assert H.l_is_equivalence()


def test_wrong_shuffle_sign_is_detected(monkeypatch):
    real = rl.shuffles

    def flipped(p, q):
        for mu, nu, sign in real(p, q):
            yield mu, nu, sign if (p == 0 or q == 0) else -sign

    monkeypatch.setattr(rl, "shuffles", flipped)
    bad = []
    for A in (rl.koszul_pair(ZZ, 1), rl.truncated_polynomial(ZZ, 1, 3)):
        bad += rl.HomotopyRing(A).check_l_multiplicative()
    assert bad


def test_reports():
    rng = rng_for(6, "reports")
    A, B, C = (random_dg_ring(rng, ZZ) for _ in range(3))
    assert rl.q_ring_report(A, rng, 40, 2)["ok"]
    assert rl.monoidal_report(A, B, C, rng, 40, nmax=2, iso_levels=2)["ok"]
    assert rl.coproduct_of_disks_report(2, 1)["ok"]
