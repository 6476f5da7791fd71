"""
DG-rings, the perturbed product on QA, the exterior product on KA, the
monoidal map υ, tensor DG-rings TU and the shuffle product on homotopy.

A DG-ring here is a ``BoundedComplex`` with a multiplication table on basis
keys and a unit element.  Products landing above the top degree are zero,
which is the quotient by a DG ideal, so every identity survives truncation.
"""
from __future__ import annotations

import json
from itertools import combinations, product

import numpy as np

from . import exact_linear as el
from .dold_kan_core import NQA, QObject, matrix_of, p_hat_elt
from .exact_linear import BoundedComplex, CoeffRing, ZZ
from .fin_maps import FinMap, codegeneracy, coface, cyclic
from .tensor_exterior import add_into, prune, sort_sign, theta_word, words


class DGRingError(ValueError):
    pass


def _mul_elts(mul, x: dict, y: dict, mod: int = 0) -> dict:
    out: dict = {}
    for k1, c1 in x.items():
        for k2, c2 in y.items():
            add_into(out, mul(k1, k2), c1 * c2, mod)
    return out


class StructDGRing(BoundedComplex):
    """A DG-ring on the keyed basis ``(n, i)`` given by a product table.

    ``table`` maps ``((p, i), (q, j))`` to an element (dict) of degree p+q;
    missing pairs multiply to zero.
    """

    def __init__(self, ring: CoeffRing, ranks, differentials, table: dict, unit: dict,
                 labels=None, check: bool = True, name: str = ""):
        super().__init__(ring, ranks, differentials, labels=labels, check=check)
        mod = ring.modulus
        self.table = {}
        for pair, v in table.items():
            v = prune(v, mod)
            if v:
                self.table[pair] = v
        self.unit = prune(unit, mod)
        self.name = name
        if check:
            bad = self.check_axioms()
            if bad:
                raise DGRingError("; ".join(bad[:5]))

    def mul(self, k1, k2) -> dict:
        return self.table.get((k1, k2), {})

    def mul_elt(self, x: dict, y: dict) -> dict:
        return _mul_elts(self.mul, x, y, self.ring.modulus)

    def d_elt(self, x: dict) -> dict:
        out: dict = {}
        for k, c in x.items():
            add_into(out, self.d(k), c, self.ring.modulus)
        return out

    def all_keys(self):
        return [k for n in range(self.top_degree + 1) for k in self.basis(n)]

    def check_axioms(self) -> list[str]:
        bad = []
        keys = self.all_keys()
        mod = self.ring.modulus
        for k in keys:
            if self.mul_elt(self.unit, {k: 1}) != {k: 1} or self.mul_elt({k: 1}, self.unit) != {k: 1}:
                bad.append(f"unit law fails on {k}")
        for a, b in product(keys, repeat=2):
            ab = self.mul(a, b)
            lhs = self.d_elt(ab)
            rhs = add_into(self.mul_elt(self.d(a), {b: 1}), self.mul_elt({a: 1}, self.d(b)),
                           (-1) ** a[0], mod)
            if lhs != rhs:
                bad.append(f"Leibniz fails on {a}, {b}")
            if a[0] + b[0] > self.top_degree:
                continue
            for c in keys:
                if a[0] + b[0] + c[0] > self.top_degree:
                    continue
                if self.mul_elt(ab, {c: 1}) != self.mul_elt({a: 1}, self.mul(b, c)):
                    bad.append(f"associativity fails on {a}, {b}, {c}")
        return bad

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        doc = super().to_json()
        doc["unit"] = [int(self.unit.get((0, i), 0)) for i in range(self.rank(0))]
        doc["products"] = [[list(a), list(b), [[k[0], k[1], int(c)] for k, c in sorted(v.items())]]
                           for (a, b), v in sorted(self.table.items())]
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc) -> "StructDGRing":
        if isinstance(doc, str):
            doc = json.loads(doc)
        C = BoundedComplex.from_json(doc)
        table = {}
        for a, b, terms in doc.get("products", []):
            table[(tuple(a), tuple(b))] = {(n, i): c for n, i, c in terms}
        unit = {(0, i): c for i, c in enumerate(doc["unit"]) if c}
        return cls(C.ring, C.ranks, C.differentials, table, unit)


def from_complex_and_mul(C: BoundedComplex, mul, unit: dict, labels=None, check=True, name="") -> StructDGRing:
    """Tabulate ``mul(k1, k2) -> dict`` over the basis of C."""
    keys = [k for n in range(C.top_degree + 1) for k in C.basis(n)]
    table = {}
    for a, b in product(keys, repeat=2):
        if a[0] + b[0] <= C.top_degree:
            v = mul(a, b)
            if v:
                table[(a, b)] = v
    return StructDGRing(C.ring, C.ranks, C.differentials, table, unit,
                        labels=labels or [C.labels(n) for n in range(C.top_degree + 1)],
                        check=check, name=name)


# ---------------------------------------------------------------------------
# small DG-rings


def truncated_polynomial(ring: CoeffRing = ZZ, degree: int = 0, k: int = 2, top: int = 3) -> StructDGRing:
    """Z[x]/(x^k) with |x| = degree and d = 0, cut at the given top degree."""
    if degree == 0:
        top = 0
        ranks = [k]
        pos = {i: (0, i) for i in range(k)}
    else:
        ranks = [0] * (top + 1)
        pos = {}
        for i in range(k):
            if i * degree <= top:
                pos[i] = (i * degree, ranks[i * degree])
                ranks[i * degree] += 1
    table = {}
    for i, j in product(pos, repeat=2):
        if i + j < k and i + j in pos:
            table[(pos[i], pos[j])] = {pos[i + j]: 1}
    labels = [[f"x^{i}" for i in pos if pos[i][0] == n] for n in range(len(ranks))]
    return StructDGRing(ring, ranks, None, table, {pos[0]: 1}, labels=labels,
                        name=f"poly(deg={degree},k={k})")


def koszul_pair(ring: CoeffRing = ZZ, c: int = 1) -> StructDGRing:
    """Span of 1, x, y, xy with |x| = 1, |y| = 2, x² = 0, xy = yx and dx = c·y."""
    one, x, y, xy = (0, 0), (1, 0), (2, 0), (3, 0)
    table = {(one, k): {k: 1} for k in (one, x, y, xy)}
    table.update({(k, one): {k: 1} for k in (x, y, xy)})
    table[(x, y)] = {xy: 1}
    table[(y, x)] = {xy: 1}
    diffs = [el.zeros(1, 1), el.as_matrix([[c]]), el.zeros(1, 1)]
    return StructDGRing(ring, [1, 1, 1, 1], diffs, table, {one: 1},
                        labels=[["1"], ["x"], ["y"], ["xy"]], name=f"koszul(c={c})")


def square_zero(ring: CoeffRing = ZZ, c: int = 1) -> StructDGRing:
    """1, e in degree 0 and f in degree 1, all products of e, f zero, de = c·f."""
    one, e, f = (0, 0), (0, 1), (1, 0)
    table = {(one, k): {k: 1} for k in (one, e, f)}
    table.update({(k, one): {k: 1} for k in (e, f)})
    return StructDGRing(ring, [2, 1], [el.as_matrix([[0, c]])], table, {one: 1},
                        labels=[["1", "e"], ["f"]], name=f"square-zero(c={c})")


def triangular_bimodule(ring: CoeffRing = ZZ, c: int = 0) -> StructDGRing:
    """Idempotents e1, e2 in degree 0, m in degree 1 with e1·m = m = m·e2.

    With c != 0 the differential is d(e1) = c·m = -d(e2); this ring is not
    graded commutative.
    """
    e1, e2, m = (0, 0), (0, 1), (1, 0)
    table = {(e1, e1): {e1: 1}, (e2, e2): {e2: 1}, (e1, m): {m: 1}, (m, e2): {m: 1}}
    return StructDGRing(ring, [2, 1], [el.as_matrix([[c, -c]])], table, {e1: 1, e2: 1},
                        labels=[["e1", "e2"], ["m"]], name=f"triangular(c={c})")


def rebase(A: StructDGRing, P: list) -> StructDGRing:
    """The same DG-ring in the basis given by the columns of the unimodular P[n]."""
    R = A.ring
    Pinv = [el.solve(P[n], el.identity(A.rank(n)), R) if A.rank(n) else el.zeros(0, 0)
            for n in range(A.top_degree + 1)]

    def vec(elt, n):
        v = el.zeros(A.rank(n), 1)
        for (m, i), c in elt.items():
            v[i, 0] += c
        return v

    def new_elt(old_elt, n):
        w = el.matmul(Pinv[n], vec(old_elt, n), R)
        return {(n, i): int(w[i, 0]) for i in range(A.rank(n)) if R.reduce(int(w[i, 0]))}

    def old_elt(key):
        n, i = key
        return {(n, r): int(P[n][r, i]) for r in range(A.rank(n)) if P[n][r, i]}

    diffs = [el.matmul(Pinv[n + 1], el.matmul(A.diff(n), P[n], R), R) for n in range(A.top_degree)]

    def mul(a, b):
        prod = A.mul_elt(old_elt(a), old_elt(b))
        return new_elt(prod, a[0] + b[0]) if prod else {}

    C = BoundedComplex(R, A.ranks, diffs)
    return from_complex_and_mul(C, mul, new_elt(A.unit, 0), name=A.name + "*")


def dg_tensor(A: StructDGRing, B: StructDGRing, top: int | None = None) -> StructDGRing:
    """A ⊗ B with the Koszul sign (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb'."""
    R = A.ring
    T = el.tensor(A, B)
    top = T.top_degree if top is None else min(top, T.top_degree)
    pos = {}
    for n in range(T.top_degree + 1):
        for i, lab in enumerate(T.labels(n)):
            pos[lab] = (n, i)
    # labels of the tensor complex are pairs of (degree, index) keys
    inv = {v: k for k, v in pos.items()}

    def split(key):
        return inv[key]

    def mul(x, y):
        (a1, b1), (a2, b2) = split(x), split(y)
        s = (-1) ** (b1[0] * a2[0])
        out: dict = {}
        for ka, ca in A.mul(a1, a2).items():
            for kb, cb in B.mul(b1, b2).items():
                key = pos.get((ka, kb))
                if key is not None:
                    add_into(out, {key: s * ca * cb}, 1, R.modulus)
        return out

    unit = {}
    for ka, ca in A.unit.items():
        for kb, cb in B.unit.items():
            add_into(unit, {pos[(ka, kb)]: ca * cb}, 1, R.modulus)
    C = BoundedComplex(R, T.ranks[:top + 1], T.differentials[:top])
    return from_complex_and_mul(C, mul, unit, name=f"({A.name})⊗({B.name})")


# ---------------------------------------------------------------------------
# tensor DG-rings TU, S(n), D(n)


def tensor_dg(U: BoundedComplex, wmax: int = 4) -> StructDGRing:
    """TU on words of length <= wmax; concatenation past wmax is dropped.

    Each degree lists its words in lexicographic order of the U-keys; the
    label of a basis element is its word.
    """
    R = U.ring
    letters = [k for n in range(U.top_degree + 1) for k in U.basis(n)]
    by_deg: dict = {}
    for k in range(wmax + 1):
        for w in product(letters, repeat=k):
            by_deg.setdefault(sum(u[0] for u in w), []).append(w)
    top = max(by_deg) if by_deg else 0
    ranks = [len(by_deg.get(n, [])) for n in range(top + 1)]
    pos = {w: (n, i) for n in by_deg for i, w in enumerate(by_deg[n])}
    diffs = []
    for n in range(top):
        M = el.zeros(ranks[n + 1], ranks[n])
        for i, w in enumerate(by_deg.get(n, [])):
            sgn_deg = 0
            for t, u in enumerate(w):
                for u2, c in U.d(u).items():
                    w2 = w[:t] + (u2,) + w[t + 1:]
                    M[pos[w2][1], i] += (-1) ** sgn_deg * c
                sgn_deg += u[0]
        diffs.append(M)
    table = {}
    for w1, k1 in pos.items():
        for w2, k2 in pos.items():
            w = w1 + w2
            if len(w) <= wmax:
                table[(k1, k2)] = {pos[w]: 1}
    labels = [by_deg.get(n, []) for n in range(top + 1)]
    A = StructDGRing(R, ranks, diffs, table, {pos[()]: 1}, labels=labels, check=False,
                     name=f"T(U),w<={wmax}")
    A.word_pos = pos
    A.wmax = wmax
    return A


def S_ring(n: int, wmax: int = 4, ring: CoeffRing = ZZ) -> StructDGRing:
    return tensor_dg(el.sphere(n, ring), wmax)


def D_ring(n: int, wmax: int = 4, ring: CoeffRing = ZZ) -> StructDGRing:
    return tensor_dg(el.disk(n, ring), wmax)


# ---------------------------------------------------------------------------
# graded pairs A ⊗ B as keyed objects, for υ


class PairComplex:
    """The tensor complex of two keyed complexes; keys are pairs ``(a, b)``."""

    def __init__(self, A, B):
        if A.ring != B.ring:
            raise ValueError("coefficient rings differ")
        self.A, self.B, self.ring = A, B, A.ring
        self.top_degree = A.top_degree + B.top_degree
        self._basis: dict = {}

    def basis(self, n):
        if n not in self._basis:
            out = []
            for p in range(n + 1):
                for a in self.A.basis(p):
                    out.extend((a, b) for b in self.B.basis(n - p))
            self._basis[n] = out
        return self._basis[n]

    def degree(self, key):
        return self.A.degree(key[0]) + self.B.degree(key[1])

    def d(self, key):
        a, b = key
        out = {(a2, b): c for a2, c in self.A.d(a).items()}
        s = (-1) ** self.A.degree(a)
        for b2, c in self.B.d(b).items():
            out[(a, b2)] = out.get((a, b2), 0) + s * c
        return prune(out, self.ring.modulus)


def upsilon(A, B, x: dict, y: dict) -> dict:
    """υ((a⊗x)⊗(b⊗y)) = a⊗b⊗xy + (-1)^{|a|} a⊗db⊗θ(x)y, bilinearly."""
    mod = A.ring.modulus
    out: dict = {}
    for (ka, wx), cx in x.items():
        sa = (-1) ** A.degree(ka)
        tx = theta_word(wx)
        for (kb, wy), cy in y.items():
            add_into(out, {((ka, kb), wx + wy): cx * cy}, 1, mod)
            for kb2, cd in B.d(kb).items():
                for t, ct in tx.items():
                    add_into(out, {((ka, kb2), t + wy): sa * cx * cy * cd * ct}, 1, mod)
    return out


def upsilon_matrix(A, B, n: int):
    """υ on level n as a square matrix from (QA ⊗ QB)^n to Q^n(A⊗B)."""
    QA, QB = QObject(A), QObject(B)
    P = PairComplex(A, B)
    src = [(x, y) for x in QA.basis(n) for y in QB.basis(n)]
    dst = QObject(P).basis(n)
    return matrix_of(lambda k: upsilon(A, B, {k[0]: 1}, {k[1]: 1}), src, dst, A.ring), src, dst


def flatten_key(elt: dict) -> dict:
    """Nested pair keys ((a, b), c) or (a, (b, c)) become (a, b, c)."""
    def flat(k):
        if isinstance(k[0], int):
            return (k,)
        return flat(k[0]) + flat(k[1])
    return {(flat(k), w): c for (k, w), c in elt.items()}


def aso1_sides(A, B, C, x, y, z):
    AB, BC = PairComplex(A, B), PairComplex(B, C)
    left = upsilon(AB, C, upsilon(A, B, x, y), z)
    right = upsilon(A, BC, x, upsilon(B, C, y, z))
    return flatten_key(left), flatten_key(right)


# ---------------------------------------------------------------------------
# the Fin-rings (QA, ∘) and (KA, ∧)


def g_product(A, x: dict, y: dict) -> dict:
    """(ω⊗x)(η⊗y) = ωη ⊗ xy, the product of A ⊠ TV."""
    mod = A.ring.modulus
    out: dict = {}
    for (k1, w1), c1 in x.items():
        for (k2, w2), c2 in y.items():
            for k, c in A.mul(k1, k2).items():
                add_into(out, {(k, w1 + w2): c1 * c2 * c}, 1, mod)
    return out


def h_product(A, x: dict, y: dict) -> dict:
    """The perturbation (-1)^{|x|} ωdη ⊗ θ(x)y."""
    mod = A.ring.modulus
    out: dict = {}
    for (k1, w1), c1 in x.items():
        s = (-1) ** len(w1)
        tw = theta_word(w1)
        if not tw:
            continue
        for (k2, w2), c2 in y.items():
            for k2d, cd in A.d(k2).items():
                for k, c in A.mul(k1, k2d).items():
                    for t, ct in tw.items():
                        add_into(out, {(k, t + w2): s * c1 * c2 * cd * c * ct}, 1, mod)
    return out


def circ(A, x: dict, y: dict) -> dict:
    """(ω⊗x)∘(η⊗y) = ωη⊗xy + (-1)^{|x|} ωdη⊗θ(x)y."""
    return add_into(g_product(A, x, y), h_product(A, x, y), 1, A.ring.modulus)


def q_unit(A) -> dict:
    return {(k, ()): c for k, c in A.unit.items()}


def k_product(A, x: dict, y: dict) -> dict:
    """(a⊗x)(b⊗y) = ab ⊗ x∧y on KA."""
    mod = A.ring.modulus
    out: dict = {}
    for (k1, I), c1 in x.items():
        for (k2, J), c2 in y.items():
            s, srt = sort_sign(I + J)
            if not s:
                continue
            for k, c in A.mul(k1, k2).items():
                add_into(out, {(k, srt): s * c1 * c2 * c}, 1, mod)
    return out


def filtration_min(A, elt: dict) -> int:
    """Smallest A-degree occurring in elt (large if elt is zero)."""
    return min((A.degree(k) for (k, _), c in elt.items() if c), default=10 ** 9)


# ---------------------------------------------------------------------------
# TQU ≅ QTU


class TQU:
    """Level n of the tensor Fin-ring on QU, words of length <= wmax."""

    def __init__(self, U: BoundedComplex, wmax: int):
        self.U, self.wmax, self.ring = U, wmax, U.ring
        self.QU = QObject(U)

    def basis(self, n, length=None):
        letters = self.QU.basis(n)
        lengths = range(self.wmax + 1) if length is None else [length]
        return [w for k in lengths for w in product(letters, repeat=k)]

    def act(self, alpha: FinMap, word) -> dict:
        out = {(): 1}
        mod = self.ring.modulus
        for q in word:
            img = self.QU.act(alpha, q)
            nxt: dict = {}
            for w, c in out.items():
                for q2, c2 in img.items():
                    add_into(nxt, {w + (q2,): c * c2}, 1, mod)
            out = nxt
        return out


def qt_phi(TU: StructDGRing, word) -> dict:
    """Φ(q_1 ⊗ … ⊗ q_k) = q_1 ∘ … ∘ q_k in Q(TU), each q_i = u_i ⊗ x_i."""
    out = q_unit(TU)
    for (u, x) in word:
        out = circ(TU, out, {(TU.word_pos[(u,)], x): 1})
    return out


def qt_iso_report(U: BoundedComplex, wmax: int = 3, nmax: int = 2) -> dict:
    """Bijectivity, multiplicativity and Fin-naturality of Φ: TQU -> QTU."""
    TU = tensor_dg(U, wmax)
    T = TQU(U, wmax)
    QT = QObject(TU)
    R = U.ring
    report = {"bijective": True, "ring_map": True, "natural": True, "failures": []}
    length_of = {}
    for w, k in TU.word_pos.items():
        length_of[k] = len(w)
    for n in range(nmax + 1):
        for k in range(wmax + 1):
            src = T.basis(n, k)
            dst = [key for key in QT.basis(n) if length_of[key[0]] == k]
            M = matrix_of(lambda w: qt_phi(TU, w), src, dst, R)
            if M.shape[0] != M.shape[1] or not el.is_invertible(M, R):
                report["bijective"] = False
                report["failures"].append(f"Φ not bijective at level {n}, length {k}")
        words_n = T.basis(n)
        for w1 in words_n:
            for w2 in words_n:
                if len(w1) + len(w2) > wmax:
                    continue
                if qt_phi(TU, w1 + w2) != prune(circ(TU, qt_phi(TU, w1), qt_phi(TU, w2)), R.modulus):
                    report["ring_map"] = False
                    report["failures"].append(f"Φ not multiplicative on {w1}, {w2}")
        gens = [coface(n, i) for i in range(n + 2)] if n < nmax else []
        if n >= 1:
            gens += [codegeneracy(n, j) for j in range(n + 1)] + [cyclic(n)]
        for g in gens:
            for w in words_n:
                lhs: dict = {}
                for w2, c in T.act(g, w).items():
                    add_into(lhs, qt_phi(TU, w2), c, R.modulus)
                rhs = QT.act_elt(g, qt_phi(TU, w))
                if lhs != rhs:
                    report["natural"] = False
                    report["failures"].append(f"Φ not natural for {g} on {w}")
                    break
    report["ok"] = report["bijective"] and report["ring_map"] and report["natural"]
    return report


def coproduct_of_disks_report(wmax: int = 3, nmax: int = 2, ring: CoeffRing = ZZ) -> dict:
    """Q(D(0) ∐ D(0)) ≅ QD(0) ∐ QD(0).

    D(0) ∐ D(0) = T(U ⊕ U) with U = Z<0,1>, and QD(0) ∐ QD(0) = T(QU ⊕ QU),
    so Φ for U ⊕ U is the comparison map.  We also check that Φ commutes
    with the two summand inclusions.
    """
    U1 = el.disk(0, ring)
    U2 = el.direct_sum(U1, U1)
    rep = qt_iso_report(U2, wmax, nmax)
    TU1, TU2 = tensor_dg(U1, wmax), tensor_dg(U2, wmax)
    T1 = TQU(U1, wmax)
    ok = True
    for tag in (0, 1):
        def inc(u, tag=tag):
            return (u[0], u[1] + tag * U1.rank(u[0]))
        for n in range(nmax + 1):
            for w in T1.basis(n):
                lhs = qt_phi(TU2, tuple((inc(u), x) for u, x in w))
                rhs: dict = {}
                for (k, x), c in qt_phi(TU1, w).items():
                    word = TU1.labels(k[0])[k[1]]
                    add_into(rhs, {(TU2.word_pos[tuple(inc(u) for u in word)], x): c}, 1, ring.modulus)
                if lhs != rhs:
                    ok = False
                    rep["failures"].append(f"inclusion {tag} incompatible on {w}")
    rep["inclusions"] = ok
    rep["ok"] = rep["ok"] and ok
    return rep


# ---------------------------------------------------------------------------
# shuffle product on homotopy of a simplicial ring


def shuffles(p: int, q: int):
    """(μ, ν, sign) over (p, q)-shuffles of {0, …, p+q-1}."""
    n = p + q
    for mu in combinations(range(n), p):
        nu = tuple(i for i in range(n) if i not in mu)
        s, _ = sort_sign(mu + nu)
        yield mu, nu, s


def shuffle(x: dict, p: int, y: dict, q: int, degeneracy, mul, mod: int = 0) -> dict:
    """x ⋆ y = Σ sign · s_ν(x)·s_μ(y) for a simplicial ring.

    ``degeneracy(elt, level, j)`` applies s_j on the given level and
    ``mul`` multiplies two elements of the same level.
    """
    out: dict = {}
    for mu, nu, s in shuffles(p, q):
        xs, lev = x, p
        for j in nu:
            xs, lev = degeneracy(xs, lev, j), lev + 1
        ys, lev = y, q
        for j in mu:
            ys, lev = degeneracy(ys, lev, j), lev + 1
        add_into(out, mul(xs, ys), s, mod)
    return out


def shuffle_product(A: StructDGRing, x: dict, p: int, y: dict, q: int) -> dict:
    """The shuffle product on QA, with s_j = ∂_{j+1} and the product ∘."""
    Q = QObject(A)
    return shuffle(x, p, y, q, lambda e, lev, j: Q.act_elt(coface(lev, j + 1), e),
                   lambda u, v: circ(A, u, v), A.ring.modulus)


def l_elt(A, key) -> dict:
    from .tensor_exterior import epsilon
    n = A.degree(key)
    return {(key, w): c for w, c in epsilon(n).items()}


def l_of(A, elt: dict) -> dict:
    out: dict = {}
    for k, c in elt.items():
        add_into(out, l_elt(A, k), c, A.ring.modulus)
    return out


class HomotopyRing:
    """πQA through the surjection model of NQA, with ⋆ and B."""

    def __init__(self, A: StructDGRing):
        self.A = A
        self.N = NQA(A)
        self.ring = A.ring

    def vec(self, elt: dict, n: int):
        idx = self.N.index(n)
        v = el.zeros(len(idx), 1)
        for k, c in self.N.reduce(elt, n).items():
            v[idx[k], 0] += c
        return self.ring.reduce_matrix(v)

    def is_boundary(self, elt: dict, n: int) -> bool:
        """Whether the class of elt in N^n lies in the image of μ from N^{n+1}."""
        v = self.vec(elt, n)
        if el.is_zero(v, self.ring):
            return True
        M = self.N.mu_matrix(n + 1)
        if M.shape[1] == 0:
            return False
        return el.in_image(M, v, self.ring)

    def star(self, x, p, y, q):
        return self.N.reduce(shuffle_product(self.A, x, p, y, q), p + q)

    def B(self, x: dict, n: int) -> dict:
        out: dict = {}
        for k, c in self.N.reduce(x, n).items():
            add_into(out, self.N.connes_B(k, n), c, self.ring.modulus)
        return out

    def check_l_multiplicative(self) -> list[str]:
        """l(a)⋆l(b) - l(ab) ∈ im μ for basis pairs with |a|+|b| <= top."""
        A, bad = self.A, []
        mod = self.ring.modulus
        for p in range(A.top_degree + 1):
            for q in range(A.top_degree + 1 - p):
                for a in A.basis(p):
                    for b in A.basis(q):
                        lhs = self.star(l_elt(A, a), p, l_elt(A, b), q)
                        diff = add_into(dict(lhs), l_of(A, A.mul(a, b)), -1, mod)
                        if not self.is_boundary(diff, p + q):
                            bad.append(f"l({a})⋆l({b}) != l({a}{b})")
        return bad

    def check_B_derivation(self) -> list[str]:
        """B(x⋆y) - Bx⋆y - (-1)^{|x|} x⋆By ∈ im μ on l-classes."""
        A, bad = self.A, []
        mod = self.ring.modulus
        for p in range(A.top_degree):
            for q in range(A.top_degree - p):
                for a in A.basis(p):
                    for b in A.basis(q):
                        x, y = l_elt(A, a), l_elt(A, b)
                        lhs = self.B(self.star(x, p, y, q), p + q)
                        t1 = self.star(self.B(x, p), p + 1, y, q)
                        t2 = self.star(x, p, self.B(y, q), q + 1)
                        diff = add_into(add_into(dict(lhs), t1, -1, mod), t2, -(-1) ** p, mod)
                        if not self.is_boundary(diff, p + q + 1):
                            bad.append(f"B not a derivation on l({a}), l({b})")
        return bad

    def check_associative(self) -> list[str]:
        A, bad = self.A, []
        mod = self.ring.modulus
        top = A.top_degree
        for p in range(top + 1):
            for q in range(top + 1 - p):
                for r in range(top + 1 - p - q):
                    for a in A.basis(p):
                        for b in A.basis(q):
                            for c in A.basis(r):
                                x, y, z = l_elt(A, a), l_elt(A, b), l_elt(A, c)
                                lhs = self.star(self.star(x, p, y, q), p + q, z, r)
                                rhs = self.star(x, p, self.star(y, q, z, r), q + r)
                                if not self.is_boundary(add_into(dict(lhs), rhs, -1, mod), p + q + r):
                                    bad.append(f"⋆ not associative on {a}, {b}, {c}")
        return bad

    def l_is_equivalence(self) -> bool:
        from .dold_kan_core import equivalence_check, mixed_from_complex, mixed_nqa
        A = self.A
        L = [self.N.l_matrix(n) for n in range(A.top_degree + 1)]
        res = equivalence_check(L, mixed_from_complex(A), mixed_nqa(A))
        return bool(res["equivalence"])


# ---------------------------------------------------------------------------
# randomized reports for the product structures


def _random_level_elt(rng, Q: QObject, n: int, density=0.4):
    from .sampling import random_elt
    return random_elt(rng, Q.basis(n), Q.ring, density)


def _filtered(A, elt: dict, m: int) -> bool:
    return all(A.degree(k) >= m for (k, _), c in elt.items() if c)


def q_ring_report(A: StructDGRing, rng, trials: int = 200, nmax: int = 3) -> dict:
    """(QA, ∘) as a Fin-ring: associativity, unit, Fin-maps as ring maps, p̂,
    the filtration ideals, the associated graded product and the cocycle
    identity for h = ∘ - g."""
    from .sampling import random_finmap
    Q = QObject(A)
    mod = A.ring.modulus
    fails: dict = {k: 0 for k in ("assoc", "unit", "fin_ring", "fin_unit", "p_hat", "ideal", "graded", "cocycle")}
    one = q_unit(A)
    for _ in range(trials):
        n = rng.randint(0, nmax)
        x, y, z = (_random_level_elt(rng, Q, n) for _ in range(3))
        if circ(A, circ(A, x, y), z) != circ(A, x, circ(A, y, z)):
            fails["assoc"] += 1
        if circ(A, one, x) != prune(x, mod) or circ(A, x, one) != prune(x, mod):
            fails["unit"] += 1
        m = rng.randint(0, nmax)
        alpha = random_finmap(rng, n, m)
        lhs = Q.act_elt(alpha, circ(A, x, y))
        rhs = circ(A, Q.act_elt(alpha, x), Q.act_elt(alpha, y))
        if lhs != rhs:
            fails["fin_ring"] += 1
        if Q.act_elt(alpha, one) != one:
            fails["fin_unit"] += 1
        if p_hat_elt(circ(A, x, y), mod) != k_product(A, p_hat_elt(x, mod), p_hat_elt(y, mod)):
            fails["p_hat"] += 1
        f = rng.randint(0, A.top_degree)
        yf = {k: c for k, c in y.items() if A.degree(k[0]) >= f}
        if not (_filtered(A, circ(A, x, yf), f) and _filtered(A, circ(A, yf, x), f)
                and _filtered(A, Q.act_elt(alpha, yf), f)):
            fails["ideal"] += 1
        # homogeneous basis pairs: ∘ - g lands one filtration step higher
        kx = rng.choice(Q.basis(n)) if Q.basis(n) else None
        ky = rng.choice(Q.basis(n)) if Q.basis(n) else None
        if kx is not None:
            diff = add_into(circ(A, {kx: 1}, {ky: 1}), g_product(A, {kx: 1}, {ky: 1}), -1, mod)
            if not _filtered(A, diff, A.degree(kx[0]) + A.degree(ky[0]) + 1):
                fails["graded"] += 1
        g, h = (lambda u, v: g_product(A, u, v)), (lambda u, v: h_product(A, u, v))
        left = add_into(h(h(x, y), z), h(x, h(y, z)), -1, mod)
        right = lin_terms(mod, (1, g(x, h(y, z))), (-1, h(g(x, y), z)), (1, h(x, g(y, z))), (-1, g(h(x, y), z)))
        if left != right:
            fails["cocycle"] += 1
    return {"trials": trials, "failures": fails, "ok": not any(fails.values())}


def lin_terms(mod, *terms) -> dict:
    out: dict = {}
    for c, e in terms:
        add_into(out, e, c, mod)
    return out


def _filtration_respecting_iso(M, src, dst, g_fn, filt_src, filt_dst, ring) -> bool:
    """M = G + H with G a bijection of bases and H raising the filtration."""
    G = matrix_of(g_fn, src, dst, ring)
    if G.shape[0] != G.shape[1]:
        return False
    for j in range(G.shape[1]):
        col = [i for i in range(G.shape[0]) if G[i, j]]
        if len(col) != 1 or not ring.is_unit(int(G[col[0], j])):
            return False
    if sorted(int(i) for j in range(G.shape[1]) for i in range(G.shape[0]) if G[i, j]) != list(range(G.shape[0])):
        return False
    H = ring.reduce_matrix(M - G)
    for j in range(H.shape[1]):
        for i in range(H.shape[0]):
            if H[i, j] and filt_dst(dst[i]) <= filt_src(src[j]):
                return False
    return True


def monoidal_report(A, B, C, rng, trials: int = 200, nmax: int = 3, iso_levels: int | None = None) -> dict:
    """υ: levelwise iso, Fin-natural and associative on random triples."""
    from .sampling import random_finmap
    mod = A.ring.modulus
    P = PairComplex(A, B)
    QA, QB, QC, QP = QObject(A), QObject(B), QObject(C), QObject(P)
    fails = {"iso": 0, "natural": 0, "aso1": 0}
    for n in range(nmax + 1 if iso_levels is None else iso_levels + 1):
        M, src, dst = upsilon_matrix(A, B, n)
        g_fn = lambda k: {((k[0][0], k[1][0]), k[0][1] + k[1][1]): 1}
        ok = _filtration_respecting_iso(M, src, dst, g_fn,
                                        lambda k: B.degree(k[1][0]),
                                        lambda k: B.degree(k[0][1]), A.ring)
        if not ok:
            fails["iso"] += 1
    for _ in range(trials):
        n = rng.randint(0, nmax)
        m = rng.randint(0, nmax)
        x, y, z = _random_level_elt(rng, QA, n), _random_level_elt(rng, QB, n), _random_level_elt(rng, QC, n)
        alpha = random_finmap(rng, n, m)
        lhs = upsilon(A, B, QA.act_elt(alpha, x), QB.act_elt(alpha, y))
        rhs = QP.act_elt(alpha, upsilon(A, B, x, y))
        if prune(lhs, mod) != rhs:
            fails["natural"] += 1
        left, right = aso1_sides(A, B, C, x, y, z)
        if prune(left, mod) != prune(right, mod):
            fails["aso1"] += 1
    return {"trials": trials, "failures": fails, "ok": not any(fails.values())}
