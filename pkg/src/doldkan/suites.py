"""Named verification suites.

Each suite returns a list of :class:`Check` items.  Randomness comes from
``sampling.rng_for(seed, label)`` so a suite's output depends only on its
arguments.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from . import exact_linear as el
from . import nc_geometry as nc
from . import ring_layer as rl
from .dold_kan_core import (
    KObject, NQA, QObject, check_kequivq_i, check_kequivq_ii, equivalence_check, is_mixed_map,
    mixed_from_complex, mixed_nqa, normalize_moore, normalize_quotient, rescaled_p_hat,
    surjection_complex, _row_complex,
)
from .exact_linear import CoeffRing, ZZ
from .fin_maps import check_cosimplicial_identities, check_simplicial_identities, compose, random_map
from .sampling import random_complex, random_dg_ring, random_elt, rng_for
from .tensor_exterior import p_of_epsilon, prune

Z2 = CoeffRing(2)
Z5 = CoeffRing(5)


@dataclass
class Check:
    suite: str
    item: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        tail = f"  {self.detail}" if self.detail else ""
        return f"{self.suite:<12} {self.item:<44} {verdict}{tail}"


@dataclass
class Params:
    """Knobs shared by all suites; defaults reproduce the acceptance sizes."""

    seed: int = 0
    ring: CoeffRing = ZZ
    levels: int = 4
    rmax: int = 5
    wmax: int = 3
    scale: float = 1.0
    extra: dict = field(default_factory=dict)

    def count(self, n: int) -> int:
        return max(1, int(round(n * self.scale)))


def _first(bad, k=3) -> str:
    return "; ".join(str(b) for b in list(bad)[:k])


def _solvable(ring: CoeffRing) -> CoeffRing:
    return ring if (ring.is_integers or ring.is_field) else ZZ


# ---------------------------------------------------------------------------
# fin_maps and tensor_exterior


def suite_finmaps(P: Params) -> list[Check]:
    out = []
    bad = check_cosimplicial_identities(P.levels)
    out.append(Check("finmaps", f"cosimplicial identities n<={P.levels}", not bad, _first(bad)))
    bad = check_simplicial_identities(P.levels)
    out.append(Check("finmaps", f"simplicial identities n<={P.levels}", not bad, _first(bad)))
    rng = rng_for(P.seed, "finmaps")
    bad = []
    for _ in range(P.count(200)):
        n, m, k = (rng.randint(0, P.levels) for _ in range(3))
        f, g, h = random_map(rng, n, m), random_map(rng, m, k), random_map(rng, k, rng.randint(0, P.levels))
        if compose(h, compose(g, f)) != compose(compose(h, g), f):
            bad.append((f, g, h))
    out.append(Check("finmaps", "composition is associative", not bad, _first(bad)))
    return out


def suite_surjections(P: Params, nmax: int = 4, eps_max: int = 6) -> list[Check]:
    """H*(Z[sur_{n,*}], ∂_0) = Z[n], ker p = ∂_0 Z[sur_{n,n-1}], p(ε_n) = n!."""
    out = []
    for n in range(1, nmax + 1):
        C = surjection_complex(n)
        H = el.cohomology(C)
        ok = H == el.HomologySummary(ZZ, [0] * n + [1], [[] for _ in range(n + 1)])
        out.append(Check("surjections", f"cohomology of sur_{n},* is Z[{n}]", ok, "" if ok else str(H.betti)))
        _, _, p = _row_complex(n)
        ker = el.kernel(p[n], ZZ)
        ker_rows = el.hnf_rows([list(ker[:, j]) for j in range(ker.shape[1])], ZZ, width=C.rank(n))
        img_rows = el.image_lattice(C.diff(n - 1), ZZ)
        out.append(Check("surjections", f"ker p = image of d_0 on S_{n}", ker_rows == img_rows))
    bad = [(n, p_of_epsilon(n)) for n in range(eps_max + 1) if p_of_epsilon(n) != factorial(n)]
    out.append(Check("surjections", f"p(eps_n) = n! for n<={eps_max}", not bad, _first(bad)))
    return out


# ---------------------------------------------------------------------------
# Dold-Kan core


def _random_complexes(P: Params, label: str, count: int, ring: CoeffRing):
    rng = rng_for(P.seed, label)
    return [random_complex(rng, top=4, max_rank=3, ring=ring)[0] for _ in range(count)]


def suite_doldkan(P: Params, count: int = 50) -> list[Check]:
    """N(K(A)) = A for random complexes, in quotient and Moore form."""
    ring = _solvable(P.ring)
    bad_q, bad_m, bad_id = [], [], []
    for t, A in enumerate(_random_complexes(P, "doldkan", P.count(count), ring)):
        K = KObject(A)
        top = A.top_degree
        NQ = normalize_quotient(K, top).complex
        if NQ.ranks != A.ranks or any(not el.mat_equal(NQ.diff(n), A.diff(n), ring) for n in range(top)):
            bad_q.append(t)
        NM = normalize_moore(K, top).complex
        if NM.ranks != A.ranks or el.cohomology(NM) != el.cohomology(A):
            bad_m.append(t)
        if t < 10 and K.check_identities(3):
            bad_id.append(t)
    n = P.count(count)
    return [
        Check("doldkan", f"N(K(A)) = A on {n} complexes (matrices)", not bad_q, _first(bad_q)),
        Check("doldkan", f"Moore form of K(A) matches A on {n} complexes", not bad_m, _first(bad_m)),
        Check("doldkan", "K(A) satisfies cosimplicial identities", not bad_id, _first(bad_id)),
    ]


def suite_finq(P: Params, complexes: int = 4, triples: int = 500) -> list[Check]:
    """(βα)(a⊗x) = β(α(a⊗x)) on Q, for random maps and elements."""
    ring = _solvable(P.ring)
    out = []
    rng = rng_for(P.seed, "finq-draws")
    for t, A in enumerate(_random_complexes(P, "finq", complexes, ring)):
        Q = QObject(A)
        bad = []
        for _ in range(P.count(triples)):
            n, m, k = (rng.randint(0, 3) for _ in range(3))
            a, b = random_map(rng, n, m), random_map(rng, m, k)
            x = random_elt(rng, Q.basis(n), ring, 0.3)
            if Q.act_elt(compose(b, a), x) != Q.act_elt(b, Q.act_elt(a, x)):
                bad.append((str(a), str(b)))
        out.append(Check("finq", f"Q functorial, complex {t}, {P.count(triples)} triples", not bad, _first(bad)))
    return out


def suite_kequivq(P: Params, count: int = 20) -> list[Check]:
    ring = _solvable(P.ring)
    bad = []
    for t, A in enumerate(_random_complexes(P, "kequivq", P.count(count), ring)):
        b = check_kequivq_i(A)
        if b:
            bad.append((t, b[0]))
    return [Check("kequivq", f"p̂j = 1, [h,d] = 1 - jp̂ on {P.count(count)} complexes", not bad, _first(bad))]


def suite_kequivq_mixed(P: Params, count: int = 8) -> list[Check]:
    """μl = 0, ld = Bl, p̂B = Dp̂, H(NQA, μ) ≅ A, l an equivalence, and the Z/5 rescaling."""
    out = []
    for ring in (ZZ, Z5):
        bad_id, bad_h, bad_eq = [], [], []
        for t, A in enumerate(_random_complexes(P, f"kequivq2-{ring.modulus}", P.count(count), ring)):
            b = check_kequivq_ii(A)
            if b:
                bad_id.append((t, b[0]))
            N = NQA(A)
            H = N.mu_homology()
            want = el.HomologySummary(ring, list(A.ranks), [[] for _ in A.ranks])
            if H != want:
                bad_h.append(t)
            L = [N.l_matrix(n) for n in range(A.top_degree + 1)]
            if not equivalence_check(L, mixed_from_complex(A), mixed_nqa(A))["equivalence"]:
                bad_eq.append(t)
        out.append(Check("kequivq2", f"μl = 0, ld = Bl, p̂B = Dp̂ over {ring}", not bad_id, _first(bad_id)))
        out.append(Check("kequivq2", f"H(NQA, μ) ≅ A over {ring}", not bad_h, _first(bad_h)))
        out.append(Check("kequivq2", f"l is a mixed equivalence over {ring}", not bad_eq, _first(bad_eq)))
    bad = []
    for t, A in enumerate(_random_complexes(P, "rescale", P.count(count), Z5)):
        top = A.top_degree
        pr = [rescaled_p_hat(A, n) for n in range(top + 1)]
        N = NQA(A)
        if not is_mixed_map(pr, mixed_nqa(A), mixed_from_complex(A)):
            bad.append((t, "not mixed"))
        for n in range(top + 1):
            if not el.mat_equal(el.matmul(pr[n], N.l_matrix(n), Z5), el.identity(A.rank(n)), Z5):
                bad.append((t, f"p̂l != 1 in degree {n}"))
    out.append(Check("kequivq2", "rescaled p̂ is a mixed left inverse of l over Z/5", not bad, _first(bad)))
    return out


# ---------------------------------------------------------------------------
# ring layer


def suite_monoidal(P: Params, triples: int = 200) -> list[Check]:
    rng = rng_for(P.seed, "monoidal")
    out = []
    for ring in (ZZ, Z2):
        A, B, C = (random_dg_ring(rng, ring) for _ in range(3))
        rep = rl.monoidal_report(A, B, C, rng, P.count(triples), nmax=2, iso_levels=3)
        out.append(Check("monoidal", f"υ iso, natural, aso1 over {ring}, {P.count(triples)} triples",
                         rep["ok"], "" if rep["ok"] else str(rep["failures"])))
    for t in range(3):
        ring = ZZ if t % 2 == 0 else Z2
        A = random_dg_ring(rng, ring)
        rep = rl.q_ring_report(A, rng, P.count(60), nmax=3)
        out.append(Check("monoidal", f"(QA, ∘) Fin-ring, p̂ ring map, gr = A⊠TV #{t} over {ring}",
                         rep["ok"], "" if rep["ok"] else str(rep["failures"])))
    return out


def suite_homotopy(P: Params, count: int = 10) -> list[Check]:
    """l: A -> πQA is a graded ring iso and B is a ⋆-derivation."""
    out = []
    for ring in (ZZ, Z2):
        rng = rng_for(P.seed, f"homotopy-{ring.modulus}")
        bad = []
        for t in range(P.count(count)):
            A = random_dg_ring(rng, ring)
            H = rl.HomotopyRing(A)
            problems = (H.check_l_multiplicative() + H.check_B_derivation() + H.check_associative())
            if not H.l_is_equivalence():
                problems.append("l not an equivalence")
            if problems:
                bad.append((t, A.name, problems[0]))
        out.append(Check("homotopy", f"l ring iso, B derivation on {P.count(count)} rings over {ring}",
                         not bad, _first(bad)))
    return out


def suite_qttq(P: Params) -> list[Check]:
    rep = rl.qt_iso_report(el.disk(0), P.wmax, 2)
    rep2 = rl.coproduct_of_disks_report(P.wmax, 2)
    return [
        Check("qttq", f"TQU ≅ QTU, U = Z<0,1>, words <= {P.wmax}", rep["ok"], _first(rep.get("failures", []))),
        Check("qttq", "Q(D(0) ∐ D(0)) ≅ QD(0) ∐ QD(0)", rep2["ok"], _first(rep2.get("failures", []))),
    ]


# ---------------------------------------------------------------------------
# noncommutative geometry


def test_algebras() -> list:
    return [nc.dual_numbers(Z2), nc.upper_triangular(Z2)]


def _report_check(suite: str, item: str, rep: dict) -> Check:
    bad = {k: v for k, v in rep["failures"].items() if v}
    return Check(suite, item, rep["ok"], "" if rep["ok"] else str(bad))


def suite_yangbaxter(P: Params, nmax: int = 3) -> list[Check]:
    out = []
    for S in test_algebras():
        rep = nc.amitsur_report(S, nmax, assoc_nmax=2)
        out.append(_report_check("yangbaxter", f"τ, Yang-Baxter, delta_rules, {S.name}", rep))
    return out


def suite_amitsur(P: Params, nmax: int = 3) -> list[Check]:
    out = []
    for S in test_algebras():
        bad = nc.omega_report(nc.omega(S, nmax))
        out.append(Check("amitsur", f"Ω is a DG-ring, {S.name}", not bad, _first(bad)))
        rep = nc.FormsComparison(S, nmax).report()
        out.append(_report_check("amitsur", f"ᾱ, β inverse ring isos n<={nmax}, {S.name}", rep))
    return out


def suite_qomega(P: Params, nmax: int = 2) -> list[Check]:
    out = []
    for S in test_algebras():
        rep = nc.QOmegaComparison(S, P.wmax).report(nmax)
        out.append(_report_check("qomega", f"QΩ ≅ ∐ on words <= {P.wmax}, {S.name}", rep))
    bad = nc.q_disk_basis_check(3)
    out.append(Check("qomega", "Q Z<0,1> ≅ ⊕Z with α(e_i) = e_α(i)", not bad, _first(bad)))
    return out


def suite_hkr(P: Params, top: int = 2) -> list[Check]:
    out = []
    for S in test_algebras():
        rep = nc.nchkr_report(S, max(P.wmax, top + 1), top)
        detail = f"H={rep['homology'].betti} Ω={rep['omega_ranks']}"
        if not rep["ok"]:
            detail += " " + str({k: v for k, v in rep["failures"].items() if v})
        out.append(Check("hkr", f"H_n(N∐, μ) ≅ Ω^n n<={top}, {S.name}", rep["ok"], detail))
    return out


SUITES = {
    "finmaps": suite_finmaps,
    "surjections": suite_surjections,
    "doldkan": suite_doldkan,
    "finq": suite_finq,
    "kequivq": suite_kequivq,
    "kequivq2": suite_kequivq_mixed,
    "monoidal": suite_monoidal,
    "homotopy": suite_homotopy,
    "yangbaxter": suite_yangbaxter,
    "amitsur": suite_amitsur,
    "qomega": suite_qomega,
    "hkr": suite_hkr,
    "qttq": suite_qttq,
}


def run(names, P: Params) -> list[Check]:
    out = []
    for name in sorted(set(names)):
        if name not in SUITES:
            raise KeyError(name)
        out.extend(SUITES[name](P))
    return out
