"""
Noncommutative differential forms, the Amitsur cosimplicial ring with the
braided product, and the coproduct Fin-ring of an algebra.

An algebra S is free of finite rank over the coefficient ring k and its
unit is the first basis vector, so S̄ = S/k has basis e_1, …, e_{r-1}.
"""
from __future__ import annotations

import json
from functools import lru_cache
from itertools import product

import numpy as np

from . import exact_linear as el
from .dold_kan_core import CosimplicialAb, cohomotopy, KObject, QObject, matrix_of
from .exact_linear import BoundedComplex, CoeffRing, ZZ
from .fin_maps import FinMap, codegeneracy, coface, cyclic, face, mu_top
from .ring_layer import StructDGRing, circ, from_complex_and_mul, k_product, shuffle
from .tensor_exterior import add_into, epsilon, prune


class AlgebraError(ValueError):
    pass


class StructAlgebra:
    """A finite free k-algebra given by structure constants.

    ``consts[i][j]`` is the coordinate vector of e_i·e_j.  If the unit is not
    e_0 the basis is changed so that it is; this needs some coordinate of the
    unit to be invertible in k, which is exactly the splitting S = k·1 ⊕ S̄.
    """

    def __init__(self, ring: CoeffRing, consts, unit, labels=None, name: str = "", check: bool = True):
        self.ring = ring
        r = len(unit)
        C = np.zeros((r, r, r), dtype=object)
        for i in range(r):
            for j in range(r):
                for k in range(r):
                    C[i, j, k] = ring.reduce(int(consts[i][j][k]))
        unit = [ring.reduce(int(u)) for u in unit]
        labels = list(labels) if labels else [f"e{i}" for i in range(r)]
        if unit != [1] + [0] * (r - 1):
            C, labels = self._move_unit(C, unit, labels)
        self.rank = r
        self.C = C
        self.labels = labels
        self.name = name
        if check:
            bad = self.check_axioms()
            if bad:
                raise AlgebraError("; ".join(bad[:3]))

    def _move_unit(self, C, unit, labels):
        R = self.ring
        piv = next((j for j, u in enumerate(unit) if u and R.is_unit(u)), None)
        if piv is None:
            raise AlgebraError("the unit does not split off a free summand")
        r = len(unit)
        order = [piv] + [j for j in range(r) if j != piv]
        P = el.zeros(r, r)
        P[:, 0] = unit
        for col, j in enumerate(order[1:], start=1):
            P[j, col] = 1
        Pinv = el.solve(P, el.identity(r), R)
        new = np.zeros((r, r, r), dtype=object)
        for a in range(r):
            for b in range(r):
                va, vb = P[:, a], P[:, b]
                v = np.zeros(r, dtype=object)
                for i in range(r):
                    for j in range(r):
                        if va[i] and vb[j]:
                            v = v + va[i] * vb[j] * C[i, j, :]
                new[a, b, :] = R.reduce_matrix(el.matmul(Pinv, v.reshape(r, 1), R)[:, 0])
        new_labels = ["1"] + [labels[j] for j in order[1:]]
        return new, new_labels

    # arithmetic ---------------------------------------------------------------
    def mul(self, i: int, j: int) -> dict:
        return {k: int(c) for k, c in enumerate(self.C[i, j]) if c}

    def mul_elt(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                add_into(out, self.mul(i, j), a * b, self.ring.modulus)
        return out

    @property
    def sbar(self) -> range:
        return range(1, self.rank)

    def check_axioms(self) -> list[str]:
        bad = []
        for i in range(self.rank):
            if self.mul(0, i) != {i: 1} or self.mul(i, 0) != {i: 1}:
                bad.append(f"unit law fails on e{i}")
        for i, j, k in product(range(self.rank), repeat=3):
            if self.mul_elt(self.mul(i, j), {k: 1}) != self.mul_elt({i: 1}, self.mul(j, k)):
                bad.append(f"associativity fails on e{i}, e{j}, e{k}")
        return bad

    # io ------------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"modulus": self.ring.modulus, "rank": self.rank,
                "structure": [[[int(c) for c in self.C[i, j]] for j in range(self.rank)] for i in range(self.rank)],
                "unit": [1] + [0] * (self.rank - 1), "labels": self.labels}

    @classmethod
    def from_json(cls, doc, name: str = "") -> "StructAlgebra":
        if isinstance(doc, str):
            doc = json.loads(doc)
        m = int(doc.get("modulus", 0))
        ring = CoeffRing(m)
        consts = doc["structure"]
        r = int(doc.get("rank", len(consts)))
        if len(consts) != r or any(len(row) != r or any(len(v) != r for v in row) for row in consts):
            raise AlgebraError("structure tensor must be rank x rank x rank")
        return cls(ring, consts, doc["unit"], labels=doc.get("labels"), name=name)


def dual_numbers(ring: CoeffRing = CoeffRing(2)) -> StructAlgebra:
    """k[x]/(x²)."""
    consts = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return StructAlgebra(ring, consts, [1, 0], labels=["1", "x"], name="dual-numbers")


def upper_triangular(ring: CoeffRing = CoeffRing(2)) -> StructAlgebra:
    """2×2 upper-triangular matrices on e11, e12, e22 (unit e11 + e22)."""
    r = 3
    consts = [[[0] * r for _ in range(r)] for _ in range(r)]
    # e11 e11 = e11, e11 e12 = e12, e12 e22 = e12, e22 e22 = e22
    consts[0][0][0] = 1
    consts[0][1][1] = 1
    consts[1][2][1] = 1
    consts[2][2][2] = 1
    return StructAlgebra(ring, consts, [1, 0, 1], labels=["e11", "e12", "e22"], name="upper2")


def scalars(ring: CoeffRing = ZZ) -> StructAlgebra:
    return StructAlgebra(ring, [[[1]]], [1], labels=["1"], name="k")


# ---------------------------------------------------------------------------
# Ω_RS


class FormAlgebra:
    """Forms a_0 da_1 … da_n as labels ``(a0, (a1, …, an))`` with a_i ∈ S̄."""

    def __init__(self, S: StructAlgebra, rmax: int):
        self.S, self.rmax = S, rmax
        self.mod = S.ring.modulus

    def d(self, form) -> dict:
        a0, t = form
        if a0 == 0 or len(t) + 1 > self.rmax:
            return {}
        return {(0, (a0,) + t): 1}

    def _append(self, elt: dict, letters) -> dict:
        """elt · d e_{l_1} … d e_{l_k}; a unit letter gives zero."""
        if any(l == 0 for l in letters):
            return {}
        out = {}
        for (a0, t), c in elt.items():
            if len(t) + len(letters) <= self.rmax:
                out[(a0, t + tuple(letters))] = c
        return out

    @lru_cache(maxsize=None)
    def _times_scalar(self, form, b: int) -> tuple:
        """form · e_b, pushing e_b left through the da_i by Leibniz."""
        a0, t = form
        if b == 0:
            return ((form, 1),)
        if not t:
            return tuple(((k, ()), c) for k, c in self.S.mul(a0, b).items())
        head, an = (a0, t[:-1]), t[-1]
        out: dict = {}
        # ω' d(a_n) b = ω' d(a_n b) - ω' a_n db
        for k, c in self.S.mul(an, b).items():
            if k:
                add_into(out, self._append({head: 1}, (k,)), c, self.mod)
        left = dict(self._times_scalar(head, an))
        add_into(out, self._append(left, (b,)), -1, self.mod)
        return tuple(out.items())

    def mul(self, f1, f2) -> dict:
        b0, u = f2
        out: dict = {}
        for f, c in self._times_scalar(f1, b0):
            add_into(out, self._append({f: 1}, u), c, self.mod)
        return out

    def forms(self, n: int) -> list:
        return [(a0, t) for a0 in range(self.S.rank) for t in product(self.S.sbar, repeat=n)]


def omega(S: StructAlgebra, rmax: int = 3, check: bool = False) -> StructDGRing:
    """Ω_RS truncated at form degree rmax, as a structure-constant DG-ring."""
    F = FormAlgebra(S, rmax)
    labels = [F.forms(n) for n in range(rmax + 1)]
    pos = {f: (n, i) for n in range(rmax + 1) for i, f in enumerate(labels[n])}
    ranks = [len(l) for l in labels]
    diffs = []
    for n in range(rmax):
        M = el.zeros(ranks[n + 1], ranks[n])
        for i, f in enumerate(labels[n]):
            for g, c in F.d(f).items():
                M[pos[g][1], i] += c
        diffs.append(M)
    C = BoundedComplex(S.ring, ranks, diffs, labels=labels)

    def mul(k1, k2):
        f1, f2 = labels[k1[0]][k1[1]], labels[k2[0]][k2[1]]
        return {pos[g]: c for g, c in F.mul(f1, f2).items()}

    A = from_complex_and_mul(C, mul, {(0, 0): 1}, labels=labels, check=check, name=f"Ω({S.name})")
    A.form_pos = pos
    # forms of degree rmax + 1 exist as soon as S̄ != 0
    A.truncated = S.rank > 1
    A.algebra = S
    return A


def omega_report(A: StructDGRing, full: bool = True) -> list[str]:
    """Leibniz, d² = 0 and associativity of Ω on basis pairs/triples."""
    bad = []
    keys = A.all_keys()
    mod = A.ring.modulus
    for a in keys:
        for b in keys:
            if a[0] + b[0] + 1 > A.top_degree:
                continue
            lhs = A.d_elt(A.mul(a, b))
            rhs = add_into(A.mul_elt(A.d(a), {b: 1}), A.mul_elt({a: 1}, A.d(b)), (-1) ** a[0], mod)
            if lhs != rhs:
                bad.append(f"Leibniz on {a}, {b}")
    if full:
        for a, b, c in product(keys, repeat=3):
            if a[0] + b[0] + c[0] > A.top_degree:
                continue
            if A.mul_elt(A.mul(a, b), {c: 1}) != A.mul_elt({a: 1}, A.mul(b, c)):
                bad.append(f"associativity on {a}, {b}, {c}")
    return bad


# ---------------------------------------------------------------------------
# the Amitsur ring and its braided product


class AmitsurRing(CosimplicialAb):
    """[n] ↦ S^{⊗(n+1)} with the braided product •.

    The product moves legs of the right factor to the left across legs of
    the left factor with τ(s⊗t) = st⊗1 + 1⊗st - s⊗t, recursively from the
    first leg.  A map α acts by α(s_0⊗…⊗s_n) = δ_{α(0)}(s_0)•…•δ_{α(n)}(s_n).
    """

    def __init__(self, S: StructAlgebra):
        self.S = S
        self.ring = S.ring
        self.mod = S.ring.modulus
        self._pcache: dict = {}
        self._acache: dict = {}

    def basis(self, n):
        return list(product(range(self.S.rank), repeat=n + 1))

    def is_degenerate(self, key, n):
        return any(k == 0 for k in key[1:])

    # τ --------------------------------------------------------------------------
    def tau(self, s: int, t: int) -> dict:
        out: dict = {}
        for k, c in self.S.mul(s, t).items():
            add_into(out, {(k, 0): c}, 1, self.mod)
            add_into(out, {(0, k): c}, 1, self.mod)
        add_into(out, {(s, t): 1}, -1, self.mod)
        return out

    def tau_elt(self, x: dict) -> dict:
        out: dict = {}
        for (s, t), c in x.items():
            add_into(out, self.tau(s, t), c, self.mod)
        return out

    # product --------------------------------------------------------------------
    def _cross(self, xs: tuple, y: int) -> dict:
        """Move the leg y left across x_1 … x_m: returns {(y', x'): c}."""
        states = {(y, ()): 1}
        for xk in reversed(xs):
            nxt: dict = {}
            for (yy, tail), c in states.items():
                for (p, q), c2 in self.tau(xk, yy).items():
                    add_into(nxt, {(p, (q,) + tail): c * c2}, 1, self.mod)
            states = nxt
        return states

    def bullet_basis(self, x: tuple, y: tuple) -> dict:
        key = (x, y)
        hit = self._pcache.get(key)
        if hit is not None:
            return hit
        if len(x) == 1:
            out = {(k,): c for k, c in self.S.mul(x[0], y[0]).items()}
        else:
            out = {}
            for (p, xs2), c in self._cross(x[1:], y[0]).items():
                head = self.S.mul(x[0], p)
                if not head:
                    continue
                rest = self.bullet_basis(xs2, y[1:])
                for h, ch in head.items():
                    for r, cr in rest.items():
                        add_into(out, {(h,) + r: c * ch * cr}, 1, self.mod)
        out = prune(out, self.mod)
        self._pcache[key] = out
        return out

    def bullet(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                add_into(out, self.bullet_basis(a, b), ca * cb, self.mod)
        return out

    def unit(self, n: int) -> dict:
        return {(0,) * (n + 1): 1}

    def delta(self, n: int, i: int, s: int) -> dict:
        """δ_i(e_s) ∈ S^{⊗(n+1)}: e_s in slot i, units elsewhere."""
        key = [0] * (n + 1)
        key[i] = s
        return {tuple(key): 1}

    def q(self, n: int, i: int, s: int) -> dict:
        return add_into(self.delta(n, i, s), self.delta(n, 0, s), -1, self.mod)

    def act(self, alpha: FinMap, key) -> dict:
        ck = (alpha, key)
        hit = self._acache.get(ck)
        if hit is None:
            m = alpha.target_dim
            hit = self.unit(m)
            for i, s in enumerate(key):
                hit = self.bullet(hit, self.delta(m, alpha.values[i], s))
            self._acache[ck] = hit
        return hit

    def standard_act(self, alpha: FinMap, key) -> dict:
        """Cosimplicial action for monotone α: multiply the legs landing in each slot."""
        if not alpha.is_monotone():
            raise ValueError("standard action needs a monotone map")
        m = alpha.target_dim
        slots = [{0: 1} for _ in range(m + 1)]
        for i, s in enumerate(key):
            slots[alpha.values[i]] = self.S.mul_elt(slots[alpha.values[i]], {s: 1})
        out = {(): 1}
        for sl in slots:
            out = {k + (s,): c * cs for k, c in out.items() for s, cs in sl.items()}
        return prune(out, self.mod)


def amitsur_report(S: StructAlgebra, nmax: int = 3, assoc_nmax: int = 2) -> dict:
    """τ² = 1, μ_0τ = μ_0, Yang–Baxter, the δ product rules, ring maps and associativity."""
    Am = AmitsurRing(S)
    mod = S.ring.modulus
    r = S.rank
    fails: dict = {k: [] for k in ("tau2", "mu0tau", "yang_baxter", "delta_rules", "delta_hom",
                                   "structure_maps", "assoc", "unit", "standard")}
    for s, t in product(range(r), repeat=2):
        if Am.tau_elt(Am.tau(s, t)) != {(s, t): 1}:
            fails["tau2"].append((s, t))
        lhs: dict = {}
        for (p, q), c in Am.tau(s, t).items():
            add_into(lhs, S.mul(p, q), c, mod)
        if lhs != S.mul(s, t):
            fails["mu0tau"].append((s, t))

    def t12(x):
        out: dict = {}
        for (a, b, c), v in x.items():
            for (p, q), w in Am.tau(a, b).items():
                add_into(out, {(p, q, c): v * w}, 1, mod)
        return out

    def t23(x):
        out: dict = {}
        for (a, b, c), v in x.items():
            for (p, q), w in Am.tau(b, c).items():
                add_into(out, {(a, p, q): v * w}, 1, mod)
        return out

    for key in product(range(r), repeat=3):
        x = {key: 1}
        if t12(t23(t12(x))) != t23(t12(t23(x))):
            fails["yang_baxter"].append(key)

    for n in range(nmax + 1):
        for i in range(n + 1):
            for j in range(n + 1):
                for a, b in product(range(r), repeat=2):
                    lhs = Am.bullet(Am.delta(n, i, a), Am.delta(n, j, b))
                    if i < j:
                        key = [0] * (n + 1)
                        key[i], key[j] = a, b
                        rhs = {tuple(key): 1}
                    elif i == j:
                        rhs = {}
                        for s, c in S.mul(a, b).items():
                            add_into(rhs, Am.delta(n, i, s), c, mod)
                    else:
                        rhs = {}
                        add_into(rhs, Am.bullet(Am.delta(n, j, a), Am.delta(n, i, b)), -1, mod)
                        for s, c in S.mul(a, b).items():
                            add_into(rhs, Am.delta(n, i, s), c, mod)
                            add_into(rhs, Am.delta(n, j, s), c, mod)
                    if prune(lhs, mod) != prune(rhs, mod):
                        fails["delta_rules"].append((n, i, j, a, b))
        basis = Am.basis(n)
        gens = [coface(n, i) for i in range(n + 2)] if n < nmax else []
        if n >= 1:
            gens += [codegeneracy(n, j) for j in range(n)]
        for g in gens:
            if Am.act(g, (0,) * (n + 1)) != Am.unit(g.target_dim):
                fails["structure_maps"].append((str(g), "unit"))
            for x in basis:
                if Am.act(g, x) != Am.standard_act(g, x):
                    fails["standard"].append((str(g), x))
            for x, y in product(basis, repeat=2):
                lhs: dict = {}
                for z, c in Am.bullet_basis(x, y).items():
                    add_into(lhs, Am.standard_act(g, z), c, mod)
                rhs = Am.bullet(Am.standard_act(g, x), Am.standard_act(g, y))
                if prune(lhs, mod) != prune(rhs, mod):
                    fails["structure_maps"].append((str(g), x, y))
                    break
        for x in basis:
            if Am.bullet(Am.unit(n), {x: 1}) != {x: 1} or Am.bullet({x: 1}, Am.unit(n)) != {x: 1}:
                fails["unit"].append(x)
        if n <= assoc_nmax:
            for x, y, z in product(basis, repeat=3):
                lhs = Am.bullet(Am.bullet_basis(x, y), {z: 1})
                rhs = Am.bullet({x: 1}, Am.bullet_basis(y, z))
                if lhs != rhs:
                    fails["assoc"].append((x, y, z))
                    break
    # δ_i is a ring map S -> level n (the middle case of the δ product rules)
    fails["delta_hom"] = [f for f in fails["delta_rules"] if f[1] == f[2]]
    ok = not any(fails.values())
    return {"failures": {k: v[:5] for k, v in fails.items()}, "counts": {k: len(v) for k, v in fails.items()}, "ok": ok}


# ---------------------------------------------------------------------------
# ᾱ: KΩ -> ⊗ and β


class FormsComparison:
    """The maps ᾱ: K^nΩ_RS -> S^{⊗(n+1)} and β in the other direction."""

    def __init__(self, S: StructAlgebra, nmax: int = 3):
        self.S = S
        self.Om = omega(S, max(nmax, 1))
        self.K = KObject(self.Om)
        self.Am = AmitsurRing(S)
        self.mod = S.ring.modulus
        self.nmax = nmax

    def form(self, key):
        return self.Om.labels(key[0])[key[1]]

    def alpha_bar(self, key, n: int) -> dict:
        fkey, I = key
        a0, t = self.form(fkey)
        out = self.Am.delta(n, 0, a0)
        for i, a in zip(I, t):
            out = self.Am.bullet(out, self.Am.q(n, i, a))
        return out

    def delta_K(self, n: int, i: int, s: int) -> dict:
        """δ_i(s) = s⊗1 + ds⊗v_i in K^nΩ."""
        return self.K.act(FinMap(0, n, [i]), ((0, s), ()))

    def beta(self, key: tuple, n: int) -> dict:
        out = {((0, 0), ()): 1}
        for i, s in enumerate(key):
            out = k_product(self.Om, out, self.delta_K(n, i, s))
        return out

    def matrices(self, n: int):
        src = self.K.basis(n)
        dst = self.Am.basis(n)
        R = self.S.ring
        A = matrix_of(lambda k: self.alpha_bar(k, n), src, dst, R)
        B = matrix_of(lambda k: self.beta(k, n), dst, src, R)
        return A, B

    def report(self) -> dict:
        R = self.S.ring
        fails: dict = {k: [] for k in ("inverse", "ring_map", "fin", "q_relations", "normalized")}
        for n in range(self.nmax + 1):
            A, B = self.matrices(n)
            if not el.mat_equal(el.matmul(A, B, R), el.identity(A.shape[0]), R) or \
                    not el.mat_equal(el.matmul(B, A, R), el.identity(B.shape[0]), R):
                fails["inverse"].append(n)
            src = self.K.basis(n)
            images = {k: self.alpha_bar(k, n) for k in src}
            for x, y in product(src, repeat=2):
                lhs: dict = {}
                for z, c in k_product(self.Om, {x: 1}, {y: 1}).items():
                    add_into(lhs, images[z], c, self.mod)
                if prune(lhs, self.mod) != prune(self.Am.bullet(images[x], images[y]), self.mod):
                    fails["ring_map"].append((n, x, y))
            gens = [coface(n, i) for i in range(n + 2)] if n < self.nmax else []
            if n >= 1:
                gens += [codegeneracy(n, j) for j in range(n)] + [mu_top(n), cyclic(n)]
            for g in gens:
                for k in src:
                    lhs: dict = {}
                    for z, c in self.K.act(g, k).items():
                        add_into(lhs, self.alpha_bar(z, g.target_dim), c, self.mod)
                    rhs: dict = {}
                    for z, c in images[k].items():
                        add_into(rhs, self.Am.act(g, z), c, self.mod)
                    if prune(lhs, self.mod) != prune(rhs, self.mod):
                        fails["fin"].append((n, str(g), k))
                        break
            fails["q_relations"] += self.q_relations(n)
        fails["normalized"] = self.normalized_check()
        return {"failures": {k: v[:5] for k, v in fails.items()},
                "counts": {k: len(v) for k, v in fails.items()},
                "ok": not any(fails.values())}

    def q_relations(self, n: int) -> list:
        """q_i(a)•q_i(b) = 0 and q_i(a)•q_j(b) = -q_j(a)•q_i(b) for i != j."""
        Am, bad = self.Am, []
        for i, j in product(range(1, n + 1), repeat=2):
            for a, b in product(self.S.sbar, repeat=2):
                lhs = Am.bullet(Am.q(n, i, a), Am.q(n, j, b))
                if i != j:
                    lhs = add_into(lhs, Am.bullet(Am.q(n, j, a), Am.q(n, i, b)), 1, self.mod)
                if prune(lhs, self.mod):
                    bad.append((n, i, j, a, b))
        return bad

    def normalized_check(self) -> list:
        """N(⊗_RS) = Ω_RS: ᾱ(Ω^n ⊗ v_1∧…∧v_n) is the Moore part and carries d to ∂."""
        R = self.S.ring
        bad = []
        Om, Am = self.Om, self.Am
        for n in range(self.nmax + 1):
            I = tuple(range(1, n + 1))
            basis = Am.basis(n)
            idx = {k: i for i, k in enumerate(basis)}
            cols = []
            for fk in Om.basis(n):
                img = self.alpha_bar((fk, I), n)
                for j in range(n):
                    mj = {}
                    for z, c in img.items():
                        add_into(mj, Am.standard_act(codegeneracy(n, j), z), c, self.mod)
                    if mj:
                        bad.append(("moore", n, fk))
                v = el.zeros(len(basis), 1)
                for z, c in img.items():
                    v[idx[z], 0] += c
                cols.append(v)
            # the Moore part has rank rank(Ω^n)
            if n >= 1:
                stack = np.concatenate([Am.matrix(codegeneracy(n, j)) for j in range(n)], axis=0)
                moore_rank = len(basis) - el.rank(stack, R)
            else:
                moore_rank = len(basis)
            if moore_rank != Om.rank(n):
                bad.append(("moore-rank", n, moore_rank, Om.rank(n)))
            if n < self.nmax:
                for fk in Om.basis(n):
                    img = self.alpha_bar((fk, I), n)
                    lhs: dict = {}
                    for i in range(n + 2):
                        for z, c in img.items():
                            add_into(lhs, Am.standard_act(coface(n, i), z), (-1) ** i * c, self.mod)
                    rhs: dict = {}
                    for gk, c in Om.d(fk).items():
                        add_into(rhs, self.alpha_bar((gk, I + (n + 1,)), n + 1), c, self.mod)
                    if prune(lhs, self.mod) != prune(rhs, self.mod):
                        bad.append(("coboundary", n, fk))
        top = self.nmax - 1
        if cohomotopy(Am, top) != el.cohomology(omega(self.S, top)):
            bad.append(("cohomotopy", top))
        return bad


# ---------------------------------------------------------------------------
# the coproduct Fin-ring ∐_RS


class CoproductRing:
    """∐^n_R S: alternating words of tagged S̄ letters.

    A word is a tuple of ``(tag, s)`` with 0 <= tag <= n, s ∈ S̄ and adjacent
    tags distinct; the empty word is the unit.  ``wmax`` bounds the length
    of basis words; products are computed exactly and truncated afterwards
    only when ``truncate`` is set.
    """

    def __init__(self, S: StructAlgebra, wmax: int = 3):
        self.S, self.wmax = S, wmax
        self.ring = S.ring
        self.mod = S.ring.modulus
        self._mcache: dict = {}

    def basis(self, n: int, wmax: int | None = None) -> list:
        w = self.wmax if wmax is None else wmax
        out = [()]
        frontier = [()]
        for _ in range(w):
            nxt = []
            for word in frontier:
                last = word[-1][0] if word else None
                for tag in range(n + 1):
                    if tag == last:
                        continue
                    for s in self.S.sbar:
                        nxt.append(word + ((tag, s),))
            out.extend(nxt)
            frontier = nxt
        return out

    def _concat(self, w1: tuple, w2: tuple) -> dict:
        key = (w1, w2)
        hit = self._mcache.get(key)
        if hit is not None:
            return hit
        if not w1 or not w2 or w1[-1][0] != w2[0][0]:
            out = {w1 + w2: 1}
        else:
            tag = w1[-1][0]
            out = {}
            for k, c in self.S.mul(w1[-1][1], w2[0][1]).items():
                if k == 0:
                    add_into(out, self._concat(w1[:-1], w2[1:]), c, self.mod)
                else:
                    add_into(out, {w1[:-1] + ((tag, k),) + w2[1:]: c}, 1, self.mod)
        self._mcache[key] = out
        return out

    def mul(self, x: dict, y: dict, truncate: bool = False) -> dict:
        out: dict = {}
        for a, ca in x.items():
            for b, cb in y.items():
                add_into(out, self._concat(a, b), ca * cb, self.mod)
        if truncate:
            out = {w: c for w, c in out.items() if len(w) <= self.wmax}
        return out

    def letter(self, tag: int, s: int) -> dict:
        """δ_tag(e_s)."""
        return {(): 1} if s == 0 else {((tag, s),): 1}

    def q(self, tag: int, s: int) -> dict:
        return add_into(self.letter(tag, s), self.letter(0, s), -1, self.mod)

    def act(self, alpha: FinMap, word: tuple) -> dict:
        """Retag by α and merge equal neighbours."""
        out = {(): 1}
        for tag, s in word:
            out = self.mul(out, self.letter(alpha.values[tag], s))
        return out

    def act_elt(self, alpha: FinMap, x: dict) -> dict:
        out: dict = {}
        for w, c in x.items():
            add_into(out, self.act(alpha, w), c, self.mod)
        return out


class QOmegaComparison:
    """φ: Q^nΩ_RS -> ∐^n_RS, a0 da1…dar ⊗ v_{j1}…v_{jr} ↦ δ_0(a0) q_{j1}(a1) … q_{jr}(ar)."""

    def __init__(self, S: StructAlgebra, wmax: int = 3):
        self.S, self.wmax = S, wmax
        self.Om = omega(S, wmax + 1)
        self.Q = QObject(self.Om)
        self.Cp = CoproductRing(S, wmax)
        self.mod = S.ring.modulus

    def weight(self, key) -> int:
        a0, t = self.Om.labels(key[0][0])[key[0][1]]
        return len(t) + (1 if a0 else 0)

    def phi(self, key) -> dict:
        (fk, x) = key
        a0, t = self.Om.labels(fk[0])[fk[1]]
        out = self.Cp.letter(0, a0)
        for j, a in zip(x, t):
            out = self.Cp.mul(out, self.Cp.q(j, a))
        return out

    def phi_elt(self, elt: dict) -> dict:
        out: dict = {}
        for k, c in elt.items():
            add_into(out, self.phi(k), c, self.mod)
        return out

    def q_basis(self, n: int, wmax: int | None = None) -> list:
        w = self.wmax if wmax is None else wmax
        return [k for k in self.Q.basis(n) if self.weight(k) <= w]

    def report(self, nmax: int = 2) -> dict:
        R = self.S.ring
        fails: dict = {"bijective": [], "ring_map": [], "fin": []}
        for n in range(nmax + 1):
            for L in range(self.wmax + 1):
                src = self.q_basis(n, L)
                dst = self.Cp.basis(n, L)
                M = matrix_of(self.phi, src, dst, R)
                if M.shape[0] != M.shape[1] or not el.is_invertible(M, R):
                    fails["bijective"].append((n, L, M.shape))
            src = self.q_basis(n)
            for x, y in product(src, repeat=2):
                if self.weight(x) + self.weight(y) > self.wmax:
                    continue
                lhs = self.phi_elt(circ(self.Om, {x: 1}, {y: 1}))
                rhs = self.Cp.mul(self.phi(x), self.phi(y))
                if prune(lhs, self.mod) != prune(rhs, self.mod):
                    fails["ring_map"].append((n, x, y))
            gens = [coface(n, i) for i in range(n + 2)] if n < nmax else []
            if n >= 1:
                gens += [codegeneracy(n, j) for j in range(n)] + [mu_top(n), cyclic(n)]
            for g in gens:
                for k in src:
                    lhs = self.phi_elt(self.Q.act(g, k))
                    rhs = self.Cp.act_elt(g, self.phi(k))
                    if prune(lhs, self.mod) != prune(rhs, self.mod):
                        fails["fin"].append((n, str(g), k))
                        break
        return {"failures": {k: v[:5] for k, v in fails.items()},
                "counts": {k: len(v) for k, v in fails.items()},
                "ok": not any(fails.values())}


def q_disk_basis_check(nmax: int = 3, ring: CoeffRing = ZZ) -> list:
    """Q Z<0,1> ≅ ⊕Z: with e_0 = x⊗1 and e_i = y⊗v_i + e_0, α(e_i) = e_{α(i)}."""
    from .fin_maps import all_maps
    U = el.disk(0, ring)
    Q = QObject(U)
    x, y = (0, 0), (1, 0)

    def e(n, i):
        out = {(x, ()): 1}
        if i:
            out[(y, (i,))] = 1
        return out

    bad = []
    for n in range(nmax + 1):
        for m in range(nmax + 1):
            for alpha in all_maps(n, m):
                for i in range(n + 1):
                    if Q.act_elt(alpha, e(n, i)) != e(m, alpha.values[i]):
                        bad.append((str(alpha), i))
    return bad


# ---------------------------------------------------------------------------
# noncommutative HKR: H_*(N∐_RS, μ) ≅ Ω_RS


class CoproductNormalized:
    """The normalized chain complex of ∐_RS (faces μ_i), words of length <= wmax.

    Degree n is spanned by words at level n that use every tag 1..n; words
    missing one of these tags are degenerate.
    """

    def __init__(self, S: StructAlgebra, wmax: int = 3):
        self.S, self.wmax = S, wmax
        self.Cp = CoproductRing(S, wmax)
        self.ring = S.ring
        self.mod = S.ring.modulus
        self._b: dict = {}
        self._m: dict = {}
        self.comparison = None

    def basis(self, n: int) -> list:
        if n not in self._b:
            need = set(range(1, n + 1))
            self._b[n] = [w for w in self.Cp.basis(n) if need <= {t for t, _ in w}]
        return self._b[n]

    def reduce(self, x: dict, n: int) -> dict:
        need = set(range(1, n + 1))
        return {w: c for w, c in x.items() if need <= {t for t, _ in w} and len(w) <= self.wmax}

    def mu(self, word, n: int) -> dict:
        out: dict = {}
        for i in range(n + 1):
            add_into(out, self.Cp.act(face(n, i), word), (-1) ** i, self.mod)
        return self.reduce(out, n - 1)

    def mu_matrix(self, n: int):
        if n not in self._m:
            if n == 0:
                self._m[n] = el.zeros(0, len(self.basis(0)))
            else:
                self._m[n] = matrix_of(lambda w: self.mu(w, n), self.basis(n), self.basis(n - 1), self.ring)
        return self._m[n]

    def homology(self, top: int):
        ranks = [len(self.basis(n)) for n in range(top + 2)]
        H = el.chain_homology(self.ring, ranks, [self.mu_matrix(n) for n in range(top + 2)])
        return el.HomologySummary(self.ring, H.betti[:top + 1], H.torsion[:top + 1])

    def connes_B(self, x: dict, n: int) -> dict:
        acc: dict = {}
        for i in range(n + 1):
            add_into(acc, self.Cp.act_elt(cyclic(n, i), x), (-1) ** (n * i), self.mod)
        return self.reduce(self.Cp.act_elt(coface(n, 0), acc), n + 1)

    def star(self, x: dict, p: int, y: dict, q: int) -> dict:
        Cp = self.Cp
        out = shuffle(x, p, y, q, lambda e, lev, j: Cp.act_elt(coface(lev, j + 1), e),
                      lambda u, v: Cp.mul(u, v), self.mod)
        return self.reduce(out, p + q)

    def vec(self, x: dict, n: int):
        idx = {w: i for i, w in enumerate(self.basis(n))}
        v = el.zeros(len(idx), 1)
        for w, c in self.reduce(x, n).items():
            v[idx[w], 0] += c
        return self.ring.reduce_matrix(v)

    def is_boundary(self, x: dict, n: int) -> bool:
        v = self.vec(x, n)
        if el.is_zero(v, self.ring):
            return True
        M = self.mu_matrix(n + 1)
        return M.shape[1] > 0 and el.in_image(M, v, self.ring)


def nchkr_report(S: StructAlgebra, wmax: int = 3, top: int = 2, ring_wmax: int | None = None) -> dict:
    """H_n(N∐_RS, μ) against Ω^n_RS for n <= top, plus l∘d = B∘l and the shuffle product."""
    R = S.ring
    mod = R.modulus
    N = CoproductNormalized(S, wmax)
    phi = QOmegaComparison(S, wmax)
    Om = phi.Om
    H = N.homology(top)
    omega_ranks = [Om.rank(n) for n in range(top + 1)]
    res = {"homology": H, "omega_ranks": omega_ranks, "failures": {}}

    def l(fk):
        n = fk[0]
        return N.reduce(phi.phi_elt({(fk, w): c for w, c in epsilon(n).items()}), n)

    fails: dict = {"ranks": [], "l_cycle": [], "l_iso": [], "ld_Bl": [], "shuffle": []}
    for n in range(top + 1):
        b, t = H.group(n)
        if b != omega_ranks[n] or t:
            fails["ranks"].append((n, b, omega_ranks[n]))
        cols = []
        for fk in Om.basis(n):
            img = l(fk)
            if n >= 1:
                mu: dict = {}
                for w, c in img.items():
                    add_into(mu, N.mu(w, n), c, mod)
                if mu:
                    fails["l_cycle"].append((n, fk))
            cols.append(N.vec(img, n))
        # l induces an isomorphism Ω^n -> H_n
        L = np.concatenate(cols, axis=1) if cols else el.zeros(len(N.basis(n)), 0)
        Mb = N.mu_matrix(n + 1)
        both = np.concatenate([Mb, L], axis=1)
        rk_b, rk_both = el.rank(Mb, R), el.rank(both, R)
        if rk_both - rk_b != Om.rank(n):
            fails["l_iso"].append(n)
        if n + 1 <= top and n + 2 <= wmax:
            for fk in Om.basis(n):
                lhs = N.connes_B(l(fk), n)
                rhs: dict = {}
                for gk, c in Om.d(fk).items():
                    add_into(rhs, l(gk), c, mod)
                if prune(lhs, mod) != prune(rhs, mod):
                    fails["ld_Bl"].append((n, fk))
    # multiplicativity through the shuffle product, on a larger word bound
    rw = ring_wmax if ring_wmax is not None else wmax + 1
    N2 = CoproductNormalized(S, rw)
    phi2 = QOmegaComparison(S, rw)

    def l2(fk):
        n = fk[0]
        return N2.reduce(phi2.phi_elt({(fk, w): c for w, c in epsilon(n).items()}), n)

    for p in range(top + 1):
        for q in range(top + 1 - p):
            for a in Om.basis(p):
                for b in Om.basis(q):
                    lhs = N2.star(l2(a), p, l2(b), q)
                    rhs: dict = {}
                    for k, c in Om.mul(a, b).items():
                        add_into(rhs, l2(k), c, mod)
                    diff = add_into(dict(lhs), rhs, -1, mod)
                    if not N2.is_boundary(diff, p + q):
                        fails["shuffle"].append((a, b))
    res["failures"] = {k: v[:5] for k, v in fails.items()}
    res["counts"] = {k: len(v) for k, v in fails.items()}
    res["ok"] = not any(fails.values())
    return res
