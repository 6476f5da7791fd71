"""The twelve acceptance criteria, one test each.

Every test prints a single ``CRITERION n: PASS|FAIL`` line; the lines are
also collected into the terminal summary by conftest.  All checks are exact.
"""
import os
import subprocess
import sys

import pytest

from doldkan import suites
from conftest import ACCEPTANCE_LINES

P = suites.Params(seed=0)


def report(n: int, title: str, checks):
    ok = all(c.ok for c in checks)
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {title}  ({sum(c.ok for c in checks)}/{len(checks)} checks)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    failed = [c.line() for c in checks if not c.ok]
    assert ok, "\n".join(failed)


def test_criterion_01_dold_kan_round_trip():
    report(1, "N(K(A)) = A on 50 random complexes", suites.suite_doldkan(P, count=50))


def test_criterion_02_fin_functoriality_of_Q():
    report(2, "β(α(a⊗x)) = (βα)(a⊗x), 500 triples per complex", suites.suite_finq(P, complexes=4, triples=500))


def test_criterion_03_contraction_identities():
    report(3, "p̂j = 1 and [h,∂] = 1 - jp̂ on 20 complexes", suites.suite_kequivq(P, count=20))


def test_criterion_04_mixed_equivalence():
    report(4, "μl = 0, ld = Bl, p̂B = Dp̂, H(NQA, μ) ≅ A, Z/5 rescaling", suites.suite_kequivq_mixed(P, count=8))


def test_criterion_05_surjection_rows():
    report(5, "H*(Z[sur_n,*]) = Z[n], ker p = ∂_0(...), p(ε_n) = n!", suites.suite_surjections(P, 4, 6))


def test_criterion_06_monoidal_structure():
    report(6, "υ iso, Fin-natural, aso1 (200 triples); (QA, ∘) Fin-ring", suites.suite_monoidal(P, triples=200))


def test_criterion_07_homotopy_ring():
    report(7, "l: A -> πQA graded ring iso, B a ⋆-derivation, Z and Z/2", suites.suite_homotopy(P, count=10))


def test_criterion_08_amitsur_braided_product():
    checks = suites.suite_yangbaxter(P, nmax=3) + suites.suite_amitsur(P, nmax=3)
    report(8, "τ identities, δ product rules, ᾱβ = βᾱ = 1, ᾱ ring iso, n <= 3", checks)


def test_criterion_09_q_omega():
    report(9, "QΩ_RS ≅ ∐_RS on words <= 3, levels <= 2; Q Z<0,1> ≅ ⊕Z", suites.suite_qomega(P, nmax=2))


def test_criterion_10_noncommutative_hkr():
    report(10, "H_n(N∐_RS, μ) ≅ Ω^n_RS for n <= 2, as modules and rings", suites.suite_hkr(P, top=2))


def test_criterion_11_tqu_qtu():
    report(11, "TQU ≅ QTU and Q(D(0)∐D(0)) ≅ QD(0)∐QD(0)", suites.suite_qttq(P))


def _verify_output(hashseed: str) -> bytes:
    env = dict(os.environ, PYTHONHASHSEED=hashseed)
    cmd = [sys.executable, "-m", "doldkan", "verify", "--seed", "0",
           "--suite", "kequivq,monoidal,yangbaxter,finq", "--format", "csv"]
    res = subprocess.run(cmd, capture_output=True, env=env, check=False)
    assert res.returncode == 0, res.stderr.decode()
    return res.stdout


def test_criterion_12_determinism():
    a, b = _verify_output("1"), _verify_output("2")
    checks = [suites.Check("determinism", "byte-identical verify output", a == b and len(a) > 0)]
    report(12, "cmd_verify output byte-identical across runs, same seed", checks)
