"""
Cosimplicial abelian groups, normalization, and the functors K and Q.

Graded inputs only need a small interface: ``ring``, ``top_degree``,
``basis(n)``, ``degree(key)`` and ``d(key) -> dict``.  ``BoundedComplex``
provides it with keys ``(n, i)``; the ring layer adds tensor and word
complexes with other keys.

The normalized complex of QA is handled in its quotient form, where the
degree-n part is free on ``a ⊗ σ`` with σ a surjection {1..r} -> {1..n}.
Both the cosimplicial coboundary (the class of ∂_0) and the simplicial
faces μ_i descend to this quotient, so j, h, l, B and the mixed structure
are all matrices on one basis.  The Moore form is available for any
cosimplicial group and is used as a cross-check.
"""
from __future__ import annotations

import json
from functools import cached_property
from itertools import combinations
from math import factorial
from typing import Callable

import numpy as np

from . import exact_linear as el
from .exact_linear import BoundedComplex, CoeffRing, HomologySummary, ZZ
from .fin_maps import FinMap, coface, codegeneracy, compose, cyclic, face, identity as fin_id
from .tensor_exterior import (
    add_into, epsilon, fin_action_word, perm_sign, project_p, reduce_to_surjections,
    prune, sort_sign, surjections, words,
)


class TruncationError(ValueError):
    """A requested degree lies beyond the configured truncation."""


class NotCosimplicialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# vectors and matrices over keyed bases


def to_vector(elt: dict, index: dict, ring: CoeffRing = ZZ):
    v = np.zeros(len(index), dtype=object)
    for k, c in elt.items():
        try:
            v[index[k]] += c
        except KeyError:
            raise KeyError(f"{k!r} is not a basis element here") from None
    return ring.reduce_matrix(v)


def to_elt(vec, keys, ring: CoeffRing = ZZ) -> dict:
    out = {}
    for k, c in zip(keys, vec):
        c = ring.reduce(int(c))
        if c:
            out[k] = c
    return out


def matrix_of(fn: Callable[[object], dict], src_keys, dst_keys, ring: CoeffRing = ZZ):
    """Matrix (columns = images of ``src_keys``) of a linear map given on keys."""
    index = {k: i for i, k in enumerate(dst_keys)}
    M = el.zeros(len(dst_keys), len(src_keys))
    for j, k in enumerate(src_keys):
        for k2, c in fn(k).items():
            M[index[k2], j] += c
    return ring.reduce_matrix(M)


def apply_linear(fn: Callable[[object], dict], elt: dict, mod: int = 0) -> dict:
    out: dict = {}
    for k, c in elt.items():
        add_into(out, fn(k), c, mod)
    return out


# ---------------------------------------------------------------------------
# cosimplicial abelian groups


class CosimplicialAb:
    """A cosimplicial (or Fin-) abelian group with keyed free levels.

    Subclasses implement ``basis(n)`` and ``act(alpha, key)``.  When
    ``fin_enabled`` is false only monotone maps may act.
    """

    fin_enabled = True
    ring: CoeffRing = ZZ

    def basis(self, n: int) -> list:
        raise NotImplementedError

    def act(self, alpha: FinMap, key) -> dict:
        raise NotImplementedError

    def is_degenerate(self, key, n: int):
        """True when a level-n basis key lies in Σ_{i≥1} ∂_i(C^{n-1}); None if unknown."""
        return None

    def rank(self, n: int) -> int:
        return len(self.basis(n))

    def index(self, n: int) -> dict:
        cache = self.__dict__.setdefault("_index_cache", {})
        if n not in cache:
            cache[n] = {k: i for i, k in enumerate(self.basis(n))}
        return cache[n]

    def act_elt(self, alpha: FinMap, elt: dict) -> dict:
        if not self.fin_enabled and not alpha.is_monotone():
            raise ValueError(f"{alpha} is not monotone and this object is only cosimplicial")
        return apply_linear(lambda k: self.act(alpha, k), elt, self.ring.modulus)

    def matrix(self, alpha: FinMap):
        cache = self.__dict__.setdefault("_matrix_cache", {})
        if alpha not in cache:
            if not self.fin_enabled and not alpha.is_monotone():
                raise ValueError(f"{alpha} is not monotone")
            cache[alpha] = matrix_of(lambda k: self.act(alpha, k), self.basis(alpha.source_dim),
                                     self.basis(alpha.target_dim), self.ring)
        return cache[alpha]

    def coboundary_matrix(self, n: int):
        """∂ = Σ (-1)^i ∂_i : C^n -> C^{n+1}."""
        M = el.zeros(self.rank(n + 1), self.rank(n))
        for i in range(n + 2):
            M = M + (-1) ** i * self.matrix(coface(n, i))
        return self.ring.reduce_matrix(M)

    def check_identities(self, nmax: int) -> list[str]:
        """Cosimplicial identities as matrix equations up to level nmax."""
        bad = []
        R = self.ring
        for n in range(nmax):
            for j in range(n + 2):
                for i in range(j):
                    if n + 2 > nmax:
                        continue
                    lhs = el.matmul(self.matrix(coface(n + 1, j)), self.matrix(coface(n, i)), R)
                    rhs = el.matmul(self.matrix(coface(n + 1, i)), self.matrix(coface(n, j - 1)), R)
                    if not el.mat_equal(lhs, rhs, R):
                        bad.append(f"∂_{j}∂_{i} at level {n}")
        for n in range(1, nmax + 1):
            for j in range(n):
                for i in range(n + 1):
                    lhs = el.matmul(self.matrix(codegeneracy(n, j)), self.matrix(coface(n - 1, i)), R)
                    alpha = compose(codegeneracy(n, j), coface(n - 1, i))
                    if not el.mat_equal(lhs, self.matrix(alpha), R):
                        bad.append(f"μ_{j}∂_{i} at level {n}")
        return bad

    def to_json(self, nmax: int) -> dict:
        gens = {}
        for n in range(nmax):
            for i in range(n + 2):
                gens[f"coface {n} {i}"] = self.matrix(coface(n, i)).tolist()
        for n in range(1, nmax + 1):
            for j in range(n):
                gens[f"codegeneracy {n} {j}"] = self.matrix(codegeneracy(n, j)).tolist()
        return {"ring": self.ring.tag, "ranks": [self.rank(n) for n in range(nmax + 1)],
                "generators": {k: [[int(x) for x in row] for row in v] for k, v in gens.items()}}

    def dumps(self, nmax: int) -> str:
        return json.dumps(self.to_json(nmax), sort_keys=True)


class ConstantCosimplicial(CosimplicialAb):
    """Every level is the same free module and every map acts as the identity."""

    def __init__(self, rank: int, ring: CoeffRing = ZZ):
        self.ring = ring
        self._rank = rank

    def basis(self, n):
        return list(range(self._rank))

    def act(self, alpha, key):
        return {key: 1}

    def is_degenerate(self, key, n):
        return n > 0


class TensorPowerV(CosimplicialAb):
    """The Fin-group T^rV: level n is spanned by words of length r in v_1..v_n."""

    def __init__(self, r: int, ring: CoeffRing = ZZ):
        self.r = r
        self.ring = ring

    def basis(self, n):
        return list(words(self.r, n))

    def act(self, alpha, key):
        return fin_action_word(alpha, key)

    def is_degenerate(self, key, n):
        return len(set(key)) != n


class FunctionalCosimplicial(CosimplicialAb):
    def __init__(self, ring, basis_fn, act_fn, fin_enabled=True, degenerate_fn=None):
        self.ring = ring
        self._basis_fn = basis_fn
        self._act_fn = act_fn
        self.fin_enabled = fin_enabled
        self._deg_fn = degenerate_fn
        self._bcache: dict = {}

    def basis(self, n):
        if n not in self._bcache:
            self._bcache[n] = list(self._basis_fn(n))
        return self._bcache[n]

    def act(self, alpha, key):
        return self._act_fn(alpha, key)

    def is_degenerate(self, key, n):
        return self._deg_fn(key, n) if self._deg_fn else None


# ---------------------------------------------------------------------------
# normalization


class Normalized:
    """A normalized complex together with the embedding of its basis.

    ``embed[n]`` has the basis of N^n as columns, in C^n coordinates (Moore
    form) or lists the chosen basis keys (quotient form).
    """

    def __init__(self, complex_: BoundedComplex, embed, form: str):
        self.complex = complex_
        self.embed = embed
        self.form = form


def normalize(C: CosimplicialAb, top: int) -> BoundedComplex:
    return normalize_moore(C, top).complex


def moore_basis(C: CosimplicialAb, n: int):
    """Columns spanning ∩_{i<n} ker(μ_i: C^n -> C^{n-1}) (canonical form)."""
    R = C.ring
    rk = C.rank(n)
    if n == 0:
        return el.identity(rk)
    if rk == 0:
        return el.zeros(0, 0)
    stack = np.concatenate([C.matrix(codegeneracy(n, i)) for i in range(n)], axis=0)
    return el.kernel(stack, R)


def normalize_moore(C: CosimplicialAb, top: int) -> Normalized:
    R = C.ring
    bases = [moore_basis(C, n) for n in range(top + 2)]
    ranks = [b.shape[1] for b in bases]
    diffs = []
    for n in range(top):
        img = el.matmul(C.coboundary_matrix(n), bases[n], R)
        if ranks[n + 1] == 0 or ranks[n] == 0:
            diffs.append(el.zeros(ranks[n + 1], ranks[n]))
        else:
            diffs.append(el.solve(bases[n + 1], img, R))
    truncated = ranks[top + 1] > 0 and ranks[top] > 0
    cx = BoundedComplex(R, ranks[:top + 1], diffs, truncated=truncated)
    return Normalized(cx, bases[:top + 1], "moore")


def normalize_quotient(C: CosimplicialAb, top: int) -> Normalized:
    """N^n = C^n / Σ_{i≥1} ∂_i C^{n-1} on the nondegenerate keys, d = class of ∂_0."""
    R = C.ring
    keys = []
    for n in range(top + 2):
        ks = []
        for k in C.basis(n):
            flag = C.is_degenerate(k, n) if n > 0 else False
            if flag is None:
                raise ValueError("quotient normalization needs basis-level degeneracy data")
            if not flag:
                ks.append(k)
        keys.append(ks)
    diffs = []
    for n in range(top):
        d0 = coface(n, 0)
        idx = {k: i for i, k in enumerate(keys[n + 1])}

        def img(k, d0=d0, idx=idx):
            return {k2: c for k2, c in C.act(d0, k).items() if k2 in idx}

        diffs.append(matrix_of(img, keys[n], keys[n + 1], R))
    truncated = bool(keys[top + 1]) and bool(keys[top])
    cx = BoundedComplex(R, [len(k) for k in keys[:top + 1]], diffs,
                        labels=[list(k) for k in keys[:top + 1]], truncated=truncated)
    return Normalized(cx, keys[:top + 1], "quotient")


def moore_to_quotient_ok(C: CosimplicialAb, top: int) -> bool:
    """The projection Moore -> quotient is an isomorphism of complexes."""
    R = C.ring
    mo = normalize_moore(C, top)
    qu = normalize_quotient(C, top)
    proj = []
    for n in range(top + 1):
        idx = C.index(n)
        rows = [idx[k] for k in qu.embed[n]]
        P = mo.embed[n][rows, :] if len(rows) and mo.embed[n].shape[1] else el.zeros(len(rows), mo.embed[n].shape[1])
        if not el.is_invertible(P, R):
            return False
        proj.append(P)
    for n in range(top):
        lhs = el.matmul(qu.complex.diff(n), proj[n], R)
        rhs = el.matmul(proj[n + 1], mo.complex.diff(n), R)
        if not el.mat_equal(lhs, rhs, R):
            return False
    return True


def cohomotopy(C: CosimplicialAb, top: int) -> HomologySummary:
    """π^n(C) = H^n(NC) for n <= top."""
    return el.cohomology(normalize(C, top))


# ---------------------------------------------------------------------------
# Q and K


def _deg_of(A, key) -> int:
    return A.degree(key)


class QObject(CosimplicialAb):
    """Q^nA = ⊕_r A^r ⊗ T^rV^n with α(a⊗x) = a⊗αx + da⊗v_{α(0)}αx.

    Keys are ``(a_key, word)``.  Tensor degrees above ``rmax`` are dropped;
    ``truncated`` records whether that can lose anything.
    """

    def __init__(self, A, rmax: int | None = None):
        self.A = A
        self.ring = A.ring
        top = A.top_degree
        self.rmax = top if rmax is None else rmax
        self.truncated = self.rmax < top
        self._bcache: dict = {}
        self._acache: dict = {}

    def basis(self, n):
        if n not in self._bcache:
            out = []
            for r in range(min(self.A.top_degree, self.rmax) + 1):
                ws = words(r, n)
                for k in self.A.basis(r):
                    out.extend((k, w) for w in ws)
            self._bcache[n] = out
        return self._bcache[n]

    def act(self, alpha, key):
        ck = (alpha, key)
        hit = self._acache.get(ck)
        if hit is not None:
            return hit
        k, w = key
        mod = self.ring.modulus
        xw = fin_action_word(alpha, w)
        out = {(k, w2): c for w2, c in xw.items()}
        a0 = alpha.values[0]
        if a0 and xw:
            for k2, c2 in self.A.d(k).items():
                if self.A.degree(k2) > self.rmax:
                    continue
                for w2, c in xw.items():
                    kk = (k2, (a0,) + w2)
                    v = out.get(kk, 0) + c2 * c
                    out[kk] = v
        out = {kk: (v % mod if mod else v) for kk, v in out.items()}
        out = {kk: v for kk, v in out.items() if v}
        self._acache[ck] = out
        return out

    def is_degenerate(self, key, n):
        return len(set(key[1])) != n

    def filtration_degree(self, key) -> int:
        return self.A.degree(key[0])


class KObject(CosimplicialAb):
    """K^nA = ⊕_r A^r ⊗ Λ^rV^n; keys ``(a_key, increasing tuple)``."""

    def __init__(self, A):
        self.A = A
        self.ring = A.ring
        self.Q = QObject(A)
        self._bcache: dict = {}

    def basis(self, n):
        if n not in self._bcache:
            out = []
            for r in range(self.A.top_degree + 1):
                subs = [tuple(c) for c in combinations(range(1, n + 1), r)]
                for k in self.A.basis(r):
                    out.extend((k, s) for s in subs)
            self._bcache[n] = out
        return self._bcache[n]

    def act(self, alpha, key):
        return p_hat_elt(self.Q.act(alpha, key), self.ring.modulus)

    def is_degenerate(self, key, n):
        return len(key[1]) != n


def p_hat_elt(elt: dict, mod: int = 0) -> dict:
    """1 ⊗ p : Q -> K on an element."""
    out: dict = {}
    for (k, w), c in elt.items():
        s, srt = sort_sign(w)
        if s:
            kk = (k, srt)
            v = out.get(kk, 0) + s * c
            if mod:
                v %= mod
            if v:
                out[kk] = v
            else:
                out.pop(kk)
    return out


def p_hat_matrix(A, n: int):
    Q, K = QObject(A), KObject(A)
    return matrix_of(lambda k: p_hat_elt({k: 1}), Q.basis(n), K.basis(n), A.ring)


def Q(A, rmax=None) -> QObject:
    return QObject(A, rmax)


def K(A) -> KObject:
    return KObject(A)


# ---------------------------------------------------------------------------
# the normalized complex NQA in surjection form


def _row_complex(r: int) -> tuple[BoundedComplex, BoundedComplex, list]:
    """(Z[sur_{r,*}], ∂_0), the sphere Z[r] and p(σ) = sign(σ) on S_r."""
    ranks = [len(surjections(r, n)) for n in range(r + 1)]
    diffs = []
    for n in range(r):
        src, dst = surjections(r, n), surjections(r, n + 1)
        d0 = coface(n, 0)
        diffs.append(matrix_of(lambda w: reduce_to_surjections(fin_action_word(d0, w), n + 1), src, dst))
    C = BoundedComplex(ZZ, ranks, diffs, labels=[list(surjections(r, n)) for n in range(r + 1)])
    S = el.sphere(r)
    p = [None] * (r + 1)
    p[r] = el.as_matrix([[perm_sign(w) for w in surjections(r, r)]])
    for n in range(r):
        p[n] = el.zeros(S.rank(n), C.rank(n))
    return C, S, p


_ROW_CACHE: dict = {}


def row_contraction(r: int):
    """Integral contraction (j', h') of Z[sur_{r,*}] onto Z[r], cached per r."""
    if r not in _ROW_CACHE:
        C, S, p = _row_complex(r)
        ct = el.contraction(C, S, p)
        _ROW_CACHE[r] = (C, S, ct)
    return _ROW_CACHE[r]


def surjection_complex(r: int) -> BoundedComplex:
    return _row_complex(r)[0]


class NQA:
    """The normalized complex of QA on the surjection basis.

    Degree n has basis ``(a_key, σ)`` with a ∈ A^r and σ ∈ sur_{r,n}.  The
    coboundary splits as a horizontal part 1⊗∂_0 and a vertical part
    d⊗v_1∂_0.
    """

    def __init__(self, A):
        self.A = A
        self.ring = A.ring
        self.Q = QObject(A)
        self.top = A.top_degree

    @cached_property
    def _bases(self):
        out = []
        for n in range(self.top + 2):
            ks = []
            for r in range(n, self.top + 1):
                sj = surjections(r, n)
                for k in self.A.basis(r):
                    ks.extend((k, s) for s in sj)
            out.append(ks)
        return out

    def basis(self, n):
        return self._bases[n] if 0 <= n < len(self._bases) else []

    def index(self, n):
        cache = self.__dict__.setdefault("_idx", {})
        if n not in cache:
            cache[n] = {k: i for i, k in enumerate(self.basis(n))}
        return cache[n]

    def rank(self, n):
        return len(self.basis(n))

    def reduce(self, elt: dict, n: int) -> dict:
        return {k: c for k, c in elt.items() if len(set(k[1])) == n}

    # elementary operators --------------------------------------------------
    def horizontal(self, key) -> dict:
        k, s = key
        n = _level(s)
        d0 = coface(n, 0)
        return {(k, w): c for w, c in reduce_to_surjections(fin_action_word(d0, s), n + 1).items()}

    def vertical(self, key) -> dict:
        k, s = key
        n = _level(s)
        d0 = coface(n, 0)
        out: dict = {}
        img = reduce_to_surjections({(1,) + w: c for w, c in fin_action_word(d0, s).items()}, n + 1)
        for k2, c2 in self.A.d(k).items():
            for w, c in img.items():
                add_into(out, {(k2, w): c2 * c}, 1, self.ring.modulus)
        return out

    def coboundary(self, key) -> dict:
        return add_into(self.horizontal(key), self.vertical(key), 1, self.ring.modulus)

    def coboundary_via_Q(self, key, n) -> dict:
        """Class of ∂_0 computed through the full Q action."""
        return self.reduce(self.Q.act(coface(n, 0), key), n + 1)

    def face_sum(self, key, n) -> dict:
        """μ = Σ_{i=0}^n (-1)^i μ_i : N^n -> N^{n-1}."""
        out: dict = {}
        for i in range(n + 1):
            add_into(out, self.reduce(self.Q.act(face(n, i), key), n - 1), (-1) ** i, self.ring.modulus)
        return out

    def connes_B(self, key, n) -> dict:
        """B = ∂_0 ∘ Σ (-1)^{ni} t_n^i, through the Fin action of Q."""
        acc: dict = {}
        for i in range(n + 1):
            add_into(acc, self.Q.act(cyclic(n, i), key), (-1) ** (n * i))
        out = self.Q.act_elt(coface(n, 0), acc)
        return self.reduce(out, n + 1)

    def connes_B_formula(self, key, n) -> dict:
        """B(a⊗x) = da ⊗ Σ (-1)^{in} v_{i+1} ∂_0 t^i x, with t and ∂_0 acting on TV only."""
        k, s = key
        tv: dict = {}
        d0 = coface(n, 0)
        for i in range(n + 1):
            for w, c in fin_action_word(cyclic(n, i), s).items():
                for w2, c2 in fin_action_word(d0, w).items():
                    add_into(tv, {(i + 1,) + w2: (-1) ** (i * n) * c * c2})
        tv = reduce_to_surjections(tv, n + 1)
        out: dict = {}
        for k2, c2 in self.A.d(k).items():
            for w, c in tv.items():
                add_into(out, {(k2, w): c2 * c}, 1, self.ring.modulus)
        return out

    def connes_B_permutation(self, key, n) -> dict:
        """On a ⊗ σ with σ ∈ S_n: da ⊗ Σ (-1)^{in} (1…n+1)^i (1∐σ)."""
        k, s = key
        if len(s) != n:
            raise ValueError("closed formula applies to permutations only")
        base = (1,) + tuple(x + 1 for x in s)
        tv: dict = {}
        for i in range(n + 1):
            w = tuple((x - 1 + i) % (n + 1) + 1 for x in base)
            add_into(tv, {w: (-1) ** (i * n)})
        out: dict = {}
        for k2, c2 in self.A.d(k).items():
            for w, c in tv.items():
                add_into(out, {(k2, w): c2 * c}, 1, self.ring.modulus)
        return out

    # matrices ----------------------------------------------------------------
    def _mat(self, name, n, fn, src, dst):
        cache = self.__dict__.setdefault("_mcache", {})
        if (name, n) not in cache:
            cache[(name, n)] = matrix_of(fn, self.basis(src), self.basis(dst), self.ring)
        return cache[(name, n)]

    def d_matrix(self, n):
        return self._mat("d", n, self.coboundary, n, n + 1)

    def horizontal_matrix(self, n):
        return self._mat("h", n, self.horizontal, n, n + 1)

    def vertical_matrix(self, n):
        return self._mat("v", n, self.vertical, n, n + 1)

    def mu_matrix(self, n):
        """μ: N^n -> N^{n-1}."""
        if n == 0:
            return el.zeros(0, self.rank(0))
        return self._mat("mu", n, lambda k: self.face_sum(k, n), n, n - 1)

    def B_matrix(self, n, route: str = "cyclic"):
        fn = {"cyclic": self.connes_B, "formula": self.connes_B_formula}[route]
        return self._mat("B" + route, n, lambda k: fn(k, n), n, n + 1)

    def p_hat_matrix(self, n):
        M = el.zeros(self.A.rank(n), self.rank(n))
        for j, (k, s) in enumerate(self.basis(n)):
            if len(s) == n:
                M[k[1], j] = perm_sign(s)
        return self.ring.reduce_matrix(M)

    def l_matrix(self, n):
        M = el.zeros(self.rank(n), self.A.rank(n))
        idx = self.index(n)
        for k in self.A.basis(n):
            for w, c in epsilon(n).items():
                M[idx[(k, w)], k[1]] += c
        return self.ring.reduce_matrix(M)

    def complex(self) -> BoundedComplex:
        top = self.top
        return BoundedComplex(self.ring, [self.rank(n) for n in range(top + 1)],
                              [self.d_matrix(n) for n in range(top)],
                              labels=[self.basis(n) for n in range(top + 1)])

    def mu_homology(self) -> HomologySummary:
        top = self.top
        return el.chain_homology(self.ring, [self.rank(n) for n in range(top + 1)],
                                 [self.mu_matrix(n) for n in range(top + 1)])

    # comparison maps -----------------------------------------------------------
    def _row_block(self, n, which):
        """1 ⊗ h' (N^n -> N^{n-1}) assembled from the cached row contractions."""
        R = self.ring
        M = el.zeros(self.rank(n - 1), self.rank(n))
        if n == 0:
            return M
        dst = self.index(n - 1)
        for r in range(n, self.top + 1):
            C, _, ct = row_contraction(r)
            h = ct.h[n]
            src_s = surjections(r, n)
            dst_s = surjections(r, n - 1)
            for k in self.A.basis(r):
                cols = [self.index(n)[(k, s)] for s in src_s]
                rows = [dst[(k, s)] for s in dst_s]
                if rows and cols:
                    M[np.ix_(rows, cols)] = h
        return R.reduce_matrix(M)

    def h_prime(self, n):
        cache = self.__dict__.setdefault("_hp", {})
        if n not in cache:
            cache[n] = self._row_block(n, "h")
        return cache[n]

    def j_prime(self, n):
        """1 ⊗ j' : A^n -> N^n, a ↦ a ⊗ j'(1)."""
        M = el.zeros(self.rank(n), self.A.rank(n))
        if n > self.top:
            return M
        _, _, ct = row_contraction(n)
        col = ct.j[n][:, 0]
        idx = self.index(n)
        for k in self.A.basis(n):
            for s, c in zip(surjections(n, n), col):
                M[idx[(k, s)], k[1]] += c
        return self.ring.reduce_matrix(M)

    def j_matrix(self, n):
        """j = 1⊗j' + (1⊗h')((1⊗j')d - d⊗v_1∂_0 j')."""
        R = self.ring
        base = self.j_prime(n)
        if n + 1 > self.top:
            return base
        corr = el.matmul(self.j_prime(n + 1), self.A.diff(n), R) - el.matmul(self.vertical_matrix(n), base, R)
        return R.reduce_matrix(base + el.matmul(self.h_prime(n + 1), corr, R))

    def h_matrix(self, n):
        """h = (1⊗h' - (1⊗h')(d⊗v_1∂_0)(1⊗h'))(1 - (1⊗j')p̂) : N^n -> N^{n-1}.

        The row homotopies satisfy ∂_0 h' + h' ∂_0 = 1 - j'p, which fixes the
        sign of the projector factor.
        """
        R = self.ring
        if n == 0:
            return el.zeros(0, self.rank(0))
        hp = self.h_prime(n)
        pert = hp - el.matmul(hp, el.matmul(self.vertical_matrix(n - 1), hp, R), R)
        jp = el.identity(self.rank(n)) - el.matmul(self.j_prime(n), self.p_hat_matrix(n), R)
        return R.reduce_matrix(el.matmul(pert, jp, R))


def _level(word) -> int:
    return max(word) if word else 0


# ---------------------------------------------------------------------------
# helpers checking that K and Q agree


def check_kequivq_i(A) -> list[str]:
    """p̂ j = 1 and ∂h + h∂ = 1 - j p̂, degree by degree."""
    N = NQA(A)
    R = A.ring
    bad = []
    top = A.top_degree
    for n in range(top + 1):
        if not el.mat_equal(el.matmul(N.p_hat_matrix(n), N.j_matrix(n), R), el.identity(A.rank(n)), R):
            bad.append(f"p̂j != 1 in degree {n}")
        if n < top:
            lhs = el.matmul(N.d_matrix(n), N.j_matrix(n), R)
            rhs = el.matmul(N.j_matrix(n + 1), A.diff(n), R)
            if not el.mat_equal(lhs, rhs, R):
                bad.append(f"j is not a chain map in degree {n}")
        lhs = el.zeros(N.rank(n), N.rank(n))
        if n >= 1:
            lhs = lhs + el.matmul(N.d_matrix(n - 1), N.h_matrix(n), R)
        if n < top:
            lhs = lhs + el.matmul(N.h_matrix(n + 1), N.d_matrix(n), R)
        rhs = el.identity(N.rank(n)) - el.matmul(N.j_matrix(n), N.p_hat_matrix(n), R)
        if not el.mat_equal(lhs, rhs, R):
            bad.append(f"[h,∂] != 1 - jp̂ in degree {n}")
    return bad


# ---------------------------------------------------------------------------
# mixed complexes


class MixedComplex:
    """Graded module with b (degree -1) and B (degree +1), b² = B² = bB + Bb = 0."""

    def __init__(self, ring: CoeffRing, ranks, b, B, check: bool = True):
        self.ring = ring
        self.ranks = list(ranks)
        top = len(self.ranks) - 1
        self.b = [self._shape(b[n] if n < len(b) else None, self.rank(n - 1), self.rank(n)) for n in range(top + 1)]
        self.B = [self._shape(B[n] if n < len(B) else None, self.rank(n + 1), self.rank(n)) for n in range(top + 1)]
        if check:
            bad = self.violations()
            if bad:
                raise ValueError("not a mixed complex: " + "; ".join(bad))

    @staticmethod
    def _shape(M, r, c):
        if M is None:
            return el.zeros(r, c)
        M = np.asarray(M, dtype=object)
        if M.shape != (r, c):
            if M.size == 0:
                return el.zeros(r, c)
            raise ValueError(f"operator shape {M.shape}, expected {(r, c)}")
        return M

    def rank(self, n):
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    @property
    def top(self):
        return len(self.ranks) - 1

    def violations(self) -> list[str]:
        R = self.ring
        bad = []
        for n in range(self.top + 1):
            if n >= 2 and not el.is_zero(el.matmul(self.b[n - 1], self.b[n], R), R):
                bad.append(f"b² at {n}")
            if n + 1 <= self.top - 0 and n + 1 < len(self.B) and not el.is_zero(el.matmul(self.B[n + 1], self.B[n], R), R):
                bad.append(f"B² at {n}")
            if n + 1 <= self.top:
                lhs = el.matmul(self.b[n + 1], self.B[n], R)
                if n >= 1:
                    lhs = lhs + el.matmul(self.B[n - 1], self.b[n], R)
                if not el.is_zero(lhs, R):
                    bad.append(f"bB + Bb at {n}")
        return bad

    def homology(self) -> HomologySummary:
        return el.chain_homology(self.ring, self.ranks, self.b)


def mixed_from_complex(A: BoundedComplex, scaled: bool = False) -> MixedComplex:
    """(A, 0, d), or (A, 0, D) with D = (n+1)d when ``scaled``."""
    B = [A.diff(n) * ((n + 1) if scaled else 1) for n in range(A.top_degree + 1)]
    return MixedComplex(A.ring, A.ranks, [], B)


def mixed_nqa(A) -> MixedComplex:
    N = NQA(A)
    top = A.top_degree
    return MixedComplex(A.ring, [N.rank(n) for n in range(top + 1)],
                        [N.mu_matrix(n) for n in range(top + 1)],
                        [N.B_matrix(n) for n in range(top + 1)])


def is_mixed_map(f, X: MixedComplex, Y: MixedComplex) -> bool:
    R = X.ring
    for n in range(X.top + 1):
        fn = f[n]
        if n >= 1 and not el.mat_equal(el.matmul(Y.b[n], fn, R), el.matmul(f[n - 1], X.b[n], R), R):
            return False
        if n + 1 <= X.top and not el.mat_equal(el.matmul(Y.B[n], fn, R), el.matmul(f[n + 1], X.B[n], R), R):
            return False
    return True


def chain_cone_homology(f, X: MixedComplex, Y: MixedComplex) -> HomologySummary:
    """Homology of the cone of f with respect to b: cone_n = X_{n-1} ⊕ Y_n."""
    R = X.ring
    top = max(X.top + 1, Y.top)
    ranks = [X.rank(n - 1) + Y.rank(n) for n in range(top + 1)]
    bnd = []
    for n in range(top + 1):
        M = el.zeros(ranks[n - 1] if n >= 1 else 0, ranks[n])
        if n >= 1:
            xa, ya = X.rank(n - 1), Y.rank(n)
            xb = X.rank(n - 2)
            if n - 1 >= 1 and xa and xb:
                M[:xb, :xa] = -X.b[n - 1]
            if xa and n - 1 <= X.top:
                M[xb:, :xa] = f[n - 1]
            if ya and n <= Y.top:
                M[xb:, xa:] = Y.b[n]
        bnd.append(M)
    return el.chain_homology(R, ranks, bnd)


def equivalence_check(f, X: MixedComplex, Y: MixedComplex) -> dict:
    if X.violations() or Y.violations():
        raise ValueError("inputs are not mixed complexes")
    mixed = is_mixed_map(f, X, Y)
    cone = chain_cone_homology(f, X, Y)
    return {"source": X.homology(), "target": Y.homology(), "mixed_map": mixed,
            "equivalence": mixed and cone.is_zero()}


def rescaled_p_hat(A, n: int):
    """(1/n!) p̂ on N^nQA; needs n! invertible in the coefficient ring."""
    R = A.ring
    if R.is_integers:
        raise ValueError("rescaling needs a field of characteristic > n")
    N = NQA(A)
    inv = R.inv(factorial(n))
    return R.reduce_matrix(N.p_hat_matrix(n) * inv)


def check_kequivq_ii(A) -> list[str]:
    N = NQA(A)
    R = A.ring
    top = A.top_degree
    bad = []
    for n in range(top + 1):
        L = N.l_matrix(n)
        if n >= 1 and not el.is_zero(el.matmul(N.mu_matrix(n), L, R), R):
            bad.append(f"μl != 0 in degree {n}")
        if n < top:
            if not el.mat_equal(el.matmul(N.B_matrix(n), L, R), el.matmul(N.l_matrix(n + 1), A.diff(n), R), R):
                bad.append(f"ld != Bl in degree {n}")
            lhs = el.matmul(N.p_hat_matrix(n + 1), N.B_matrix(n), R)
            rhs = el.matmul(A.diff(n) * (n + 1), N.p_hat_matrix(n), R)
            if not el.mat_equal(lhs, rhs, R):
                bad.append(f"p̂B != Dp̂ in degree {n}")
            for key in N.basis(n):
                if len(key[1]) != n:
                    continue
                a = prune(N.connes_B(key, n), R.modulus)
                b = prune(N.connes_B_permutation(key, n), R.modulus)
                if a != b:
                    bad.append(f"B routes disagree on {key} in degree {n}")
                    break
    return bad


# ---------------------------------------------------------------------------
# path object and the naturality package


class PathObject:
    """PB^n = B^n ⊕ B^{n-1} ⊕ B^n with ∂ = [[d,0,0],[1,-d,-1],[0,0,d]]."""

    def __init__(self, B: BoundedComplex):
        self.B = B
        R = B.ring
        top = B.top_degree + 1
        ranks = [B.rank(n) + B.rank(n - 1) + B.rank(n) for n in range(top + 1)]
        diffs = []
        for n in range(top):
            a, b, c = B.rank(n), B.rank(n - 1), B.rank(n)
            a1, b1, c1 = B.rank(n + 1), B.rank(n), B.rank(n + 1)
            M = el.zeros(a1 + b1 + c1, a + b + c)
            M[:a1, :a] = B.diff(n)
            M[a1:a1 + b1, :a] = el.identity(a)
            if b:
                M[a1:a1 + b1, a:a + b] = -B.diff(n - 1)
            M[a1:a1 + b1, a + b:] = -el.identity(c)
            M[a1 + b1:, a + b:] = B.diff(n)
            diffs.append(M)
        self.complex = BoundedComplex(R, ranks, diffs)

    def eval_matrix(self, n: int, which: int):
        a, b = self.B.rank(n), self.B.rank(n - 1)
        M = el.zeros(a, 2 * a + b)
        if which == 0:
            M[:, :a] = el.identity(a)
        else:
            M[:, a + b:] = el.identity(a)
        return M

    def assemble(self, f0, kappa, f1, n):
        """The map (f0, κ, f1) in degree n as one matrix into PB^n."""
        return np.concatenate([f0[n], kappa[n], f1[n]], axis=0)


class CosimplicialMap:
    """Levelwise map ``QA -> QB`` given by ``fn(key, n) -> dict`` on level-n keys."""

    def __init__(self, src: QObject, dst: QObject, fn):
        self.src, self.dst, self.fn = src, dst, fn
        self._cache: dict = {}

    def __call__(self, key, n: int) -> dict:
        ck = (key, n)
        if ck not in self._cache:
            self._cache[ck] = self.fn(key, n)
        return self._cache[ck]

    def apply(self, elt: dict, n: int) -> dict:
        return apply_linear(lambda k: self(k, n), elt, self.src.ring.modulus)

    def check(self, nmax: int) -> list[str]:
        """Compatibility with cofaces and codegeneracies up to level nmax."""
        bad = []
        for n in range(nmax + 1):
            gens = [coface(n, i) for i in range(n + 2)] if n < nmax else []
            gens += [codegeneracy(n, j) for j in range(n)]
            for g in gens:
                for k in self.src.basis(n):
                    lhs = self.apply(self.src.act(g, k), g.target_dim)
                    rhs = self.dst.act_elt(g, self(k, n))
                    if lhs != rhs:
                        bad.append(f"{g} on {k}")
                        break
        return bad


def q_of_map(A, B, g: list) -> Callable:
    """Q(g) on keys for a chain map g given by matrices g[n]: A^n -> B^n."""

    def fn(key, n):
        k, w = key
        col = g[k[0]][:, k[1]]
        return {((k[0], i), w): int(c) for i, c in enumerate(col) if c}

    return fn


class BarPackage:
    """f̄ = p̂ N(f) j, δ = N(f) - NQ(f̄) and κ with [κ, ∂] = δ."""

    def __init__(self, A, B, f: CosimplicialMap):
        if A.ring != B.ring:
            raise ValueError("coefficient rings differ")
        self.A, self.B, self.f = A, B, f
        self.NA, self.NB = NQA(A), NQA(B)
        self.ring = A.ring
        self.top = max(A.top_degree, B.top_degree)

    def Nf(self, n):
        cache = self.__dict__.setdefault("_nf", {})
        if n not in cache:
            fn = lambda k: self.NB.reduce(self.f(k, n), n)
            src = self.NA.basis(n)
            dst = self.NB.basis(n)
            cache[n] = matrix_of(fn, src, dst, self.ring)
        return cache[n]

    def bar(self, n):
        R = self.ring
        if n > self.A.top_degree or n > self.B.top_degree:
            return el.zeros(self.B.rank(n), self.A.rank(n))
        return el.matmul(self.NB.p_hat_matrix(n), el.matmul(self.Nf(n), self.NA.j_matrix(n), R), R)

    def bar_list(self):
        return [self.bar(n) for n in range(self.A.top_degree + 1)]

    def NQbar(self, n):
        g = self.bar_list()
        fn = lambda key: self.NB.reduce(
            {((key[0][0], i), key[1]): int(c) for i, c in enumerate(g[key[0][0]][:, key[0][1]]) if c}, n)
        return matrix_of(fn, self.NA.basis(n), self.NB.basis(n), self.ring)

    def delta(self, n):
        return self.ring.reduce_matrix(self.Nf(n) - self.NQbar(n))

    def _dB(self, n):
        return self.NB.d_matrix(n) if n <= self.B.top_degree - 1 else el.zeros(self.NB.rank(n + 1), self.NB.rank(n))

    def _dA(self, n):
        return self.NA.d_matrix(n) if n <= self.A.top_degree - 1 else el.zeros(self.NA.rank(n + 1), self.NA.rank(n))

    def _hB(self, n):
        return self.NB.h_matrix(n) if 0 < n <= self.B.top_degree else el.zeros(self.NB.rank(n - 1), self.NB.rank(n))

    def _hA(self, n):
        return self.NA.h_matrix(n) if 0 < n <= self.A.top_degree else el.zeros(self.NA.rank(n - 1), self.NA.rank(n))

    def kappa(self, n):
        """κ = hδ + δh - (hδ∂ + ∂hδ)h : N^nQA -> N^{n-1}QB."""
        R = self.ring
        mm = lambda *ms: _chain(R, *ms)
        if n == 0:
            return el.zeros(0, self.NA.rank(0))
        t1 = mm(self._hB(n), self.delta(n))
        t2 = mm(self.delta(n - 1), self._hA(n))
        # [hδ, ∂] h evaluated on N^n: first h_A to degree n-1
        inner = mm(self._hB(n), self.delta(n), self._dA(n - 1)) + mm(self._dB(n - 2), self._hB(n - 1), self.delta(n - 1)) \
            if n >= 2 else mm(self._hB(n), self.delta(n), self._dA(n - 1))
        t3 = mm(inner, self._hA(n))
        return R.reduce_matrix(t1 + t2 - t3)

    def check(self) -> list[str]:
        R = self.ring
        bad = []
        top = min(self.A.top_degree, self.B.top_degree)
        for n in range(top + 1):
            lhs = el.zeros(self.NB.rank(n), self.NA.rank(n))
            if n >= 1:
                lhs = lhs + el.matmul(self._dB(n - 1), self.kappa(n), R)
            if n + 1 <= self.A.top_degree:
                lhs = lhs + el.matmul(self.kappa(n + 1), self._dA(n), R)
            if not el.mat_equal(lhs, self.delta(n), R):
                bad.append(f"[κ,∂] != δ in degree {n}")
        return bad

    def homotopy_H(self, n):
        """(Nf, κ, NQf̄) : N^nQA -> P(NQB)^n."""
        return np.concatenate([self.Nf(n), self.kappa(n), self.NQbar(n)], axis=0)


def _chain(R, *ms):
    out = ms[-1]
    for M in reversed(ms[:-1]):
        out = el.matmul(M, out, R)
    return out


def moore_lift(C: CosimplicialAb, n: int, elt: dict) -> dict:
    """The element of the Moore part of C^n with the given class modulo degeneracies."""
    R = C.ring
    basis = moore_basis(C, n)
    keys = C.basis(n)
    nondeg = [i for i, k in enumerate(keys) if not C.is_degenerate(k, n)]
    P = basis[nondeg, :]
    idx = {keys[i]: t for t, i in enumerate(nondeg)}
    y = el.zeros(len(nondeg), 1)
    for k, c in elt.items():
        y[idx[k], 0] += c
    x = el.solve(P, y, R)
    vec = el.matmul(basis, x, R)[:, 0]
    return to_elt(vec, keys, R)


def k_to_q_map(A, B, c: dict) -> Callable:
    """Levelwise map QA -> KA -> QB attached to a chain map into the Moore complex.

    ``c[a_key]`` is a Moore element of Q^rB (r = deg a).  The K-basis
    element a ⊗ v_I goes to η_I(c(a)), η_I the monotone injection [r] -> [n]
    with η(0) = 0 whose image is {0} ∪ I; precomposing with p̂ gives the map
    on QA.
    """
    QB = QObject(B)
    mod = A.ring.modulus

    def fn(key, n):
        out: dict = {}
        for (k2, I), s in p_hat_elt({key: 1}, mod).items():
            eta = FinMap(len(I), n, (0,) + I)
            add_into(out, QB.act_elt(eta, c[k2]), s, mod)
        return out

    return fn
