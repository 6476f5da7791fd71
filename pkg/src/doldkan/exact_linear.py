"""
Exact linear algebra over Z and Z/m.

Matrices are numpy arrays of dtype ``object`` holding Python ints, so no
entry ever overflows.  The heavy elimination loops run on plain lists.

Bounded cochain complexes, Smith normal form, cohomology and the
construction of contractions (a section ``j`` of a surjective
quasi-isomorphism together with a homotopy ``h``) live here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime


class LinearAlgebraError(ValueError):
    pass


class NoSolutionError(LinearAlgebraError):
    """A linear system has no solution over the coefficient ring."""


@dataclass(frozen=True)
class CoeffRing:
    """Z (``modulus == 0``) or Z/m with m >= 2."""

    modulus: int = 0

    def __post_init__(self):
        if self.modulus < 0 or self.modulus == 1:
            raise ValueError(f"bad modulus {self.modulus}")

    @classmethod
    def parse(cls, text: str) -> "CoeffRing":
        t = text.strip().lower()
        if t in ("z", "zz", "int", "integers"):
            return cls(0)
        if t.startswith("zmod:"):
            return cls(int(t[5:]))
        if t.startswith("z/"):
            return cls(int(t[2:]))
        raise ValueError(f"unknown coefficient ring {text!r}")

    @property
    def is_integers(self) -> bool:
        return self.modulus == 0

    @property
    def is_field(self) -> bool:
        return self.modulus != 0 and isprime(self.modulus)

    @property
    def tag(self) -> str:
        return "z" if self.modulus == 0 else f"zmod:{self.modulus}"

    def __str__(self):
        return "Z" if self.modulus == 0 else f"Z/{self.modulus}"

    def reduce(self, x: int) -> int:
        return x % self.modulus if self.modulus else x

    def reduce_matrix(self, M):
        M = np.asarray(M, dtype=object)
        return M % self.modulus if self.modulus else M

    def is_unit(self, x: int) -> bool:
        if self.modulus == 0:
            return x in (1, -1)
        return gcd(x % self.modulus, self.modulus) == 1

    def inv(self, x: int) -> int:
        if self.modulus == 0:
            if x in (1, -1):
                return x
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        return pow(x % self.modulus, -1, self.modulus)

    def _require_solvable(self):
        if not (self.is_integers or self.is_field):
            raise NotImplementedError(
                f"linear solving over {self} needs m prime; composite moduli only "
                "support arithmetic"
            )


ZZ = CoeffRing(0)


# ---------------------------------------------------------------------------
# dense matrix helpers


def zeros(rows: int, cols: int):
    return np.zeros((rows, cols), dtype=object)


def identity(n: int):
    M = zeros(n, n)
    for i in range(n):
        M[i, i] = 1
    return M


def as_matrix(rows, shape=None):
    if shape is not None and len(rows) == 0:
        return zeros(*shape)
    M = np.array(rows, dtype=object)
    if M.ndim == 1:
        M = M.reshape(1, -1) if len(rows) else zeros(0, 0)
    return M


def matmul(A, B, ring: CoeffRing = ZZ):
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.shape[1] != B.shape[0]:
        raise LinearAlgebraError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1])
    return ring.reduce_matrix(A.dot(B))


def mat_equal(A, B, ring: CoeffRing = ZZ) -> bool:
    A = ring.reduce_matrix(A)
    B = ring.reduce_matrix(B)
    return A.shape == B.shape and bool(np.all(A == B))


def is_zero(A, ring: CoeffRing = ZZ) -> bool:
    A = ring.reduce_matrix(A)
    return bool(np.all(A == 0))


def block_diag(*blocks):
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    M = zeros(r, c)
    i = j = 0
    for b in blocks:
        M[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return M


def kron(A, B):
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    if A.size == 0 or B.size == 0:
        return zeros(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])
    return np.kron(A, B)


def _rows(M) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(M, dtype=object)]


def _det_int(M) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    A = _rows(M)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def determinant(M, ring: CoeffRing = ZZ) -> int:
    M = np.asarray(M, dtype=object)
    if M.shape[0] != M.shape[1]:
        raise LinearAlgebraError("determinant of a non-square matrix")
    return ring.reduce(_det_int(M))


def is_invertible(M, ring: CoeffRing = ZZ) -> bool:
    M = np.asarray(M, dtype=object)
    if M.shape[0] != M.shape[1]:
        return False
    return ring.is_unit(_det_int(M))


# ---------------------------------------------------------------------------
# Smith normal form


def smith(M):
    """Smith normal form over Z.

    Returns ``(U, D, V)`` with ``U @ M @ V == D``, ``U`` and ``V``
    unimodular, ``D`` diagonal with nonnegative entries each dividing the
    next.
    """
    A = _rows(M)
    m = len(A)
    n = np.asarray(M).shape[1]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            ra, rs = A[dst], A[src]
            for c in range(n):
                if rs[c]:
                    ra[c] += q * rs[c]
            ua, us = U[dst], U[src]
            for c in range(m):
                if us[c]:
                    ua[c] += q * us[c]

    def add_col(dst, src, q):
        if q:
            for row in A:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        changed = True
            if changed:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, "r")
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            p = A[t][t]
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return as_matrix(U, (m, m)), as_matrix(A, (m, n)), as_matrix(V, (n, n))


def invariant_factors(M) -> list[int]:
    """Nonzero diagonal entries of the Smith form of an integer matrix."""
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return []
    _, D, _ = smith(M)
    return [int(D[i, i]) for i in range(min(D.shape)) if D[i, i] != 0]


# ---------------------------------------------------------------------------
# echelon forms, kernels, solving


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _column_echelon(M, ring: CoeffRing):
    """Unimodular column reduction ``E = M V``.

    Returns ``(Et, Vt, pivots)`` with the transposes of ``E`` and ``V`` as
    lists of rows; ``pivots[k]`` is the row of ``M`` holding the pivot of
    column ``k``.  Columns past ``len(pivots)`` of ``E`` vanish.
    """
    ring._require_solvable()
    M = np.asarray(M, dtype=object)
    nrows, ncols = M.shape
    mod = ring.modulus
    Et = [[int(M[i, j]) for i in range(nrows)] for j in range(ncols)]
    if mod:
        Et = [[x % mod for x in col] for col in Et]
    Vt = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    pivots: list[int] = []
    k = 0
    for r in range(nrows):
        if k == ncols:
            break
        nz = [c for c in range(k, ncols) if Et[c][r]]
        if not nz:
            continue
        if mod:
            c = nz[0]
            Et[k], Et[c] = Et[c], Et[k]
            Vt[k], Vt[c] = Vt[c], Vt[k]
            inv = pow(Et[k][r], -1, mod)
            Et[k] = [x * inv % mod for x in Et[k]]
            Vt[k] = [x * inv % mod for x in Vt[k]]
            for c in range(ncols):
                if c != k and Et[c][r]:
                    q = Et[c][r]
                    Et[c] = [(x - q * y) % mod for x, y in zip(Et[c], Et[k])]
                    Vt[c] = [(x - q * y) % mod for x, y in zip(Vt[c], Vt[k])]
        else:
            c0 = nz[0]
            Et[k], Et[c0] = Et[c0], Et[k]
            Vt[k], Vt[c0] = Vt[c0], Vt[k]
            for c in range(k + 1, ncols):
                b = Et[c][r]
                if not b:
                    continue
                a = Et[k][r]
                g, x, y = _xgcd(a, b)
                u, w = a // g, b // g
                # [col_k, col_c] <- [x col_k + y col_c, -w col_k + u col_c]
                ek, ec, vk, vc = Et[k], Et[c], Vt[k], Vt[c]
                Et[k] = [x * p + y * q for p, q in zip(ek, ec)]
                Et[c] = [u * q - w * p for p, q in zip(ek, ec)]
                Vt[k] = [x * p + y * q for p, q in zip(vk, vc)]
                Vt[c] = [u * q - w * p for p, q in zip(vk, vc)]
            if Et[k][r] < 0:
                Et[k] = [-x for x in Et[k]]
                Vt[k] = [-x for x in Vt[k]]
        pivots.append(r)
        k += 1
    return Et, Vt, pivots


def _rref_modp(M, p: int):
    """Row-reduced echelon form over Z/p (p prime) using int64 numpy rows."""
    A = (np.asarray(M, dtype=object) % p).astype(np.int64)
    nrows, ncols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = (A[rows] - np.outer(col[rows], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, ring: CoeffRing = ZZ) -> int:
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    if ring.is_field:
        return len(_rref_modp(M, ring.modulus)[1])
    return len(_column_echelon(M, ring)[2])


def hnf_rows(vectors: Iterable[Sequence[int]], ring: CoeffRing = ZZ, width=None) -> list[list[int]]:
    """Canonical basis of the row lattice (Hermite form / RREF).

    Pivots are leftmost, positive, and entries above each pivot are reduced
    into ``[0, pivot)``.  Zero rows are dropped.
    """
    ring._require_solvable()
    rows = [[ring.reduce(int(x)) for x in v] for v in vectors]
    if not rows:
        return []
    ncols = len(rows[0]) if width is None else width
    mod = ring.modulus
    out: list[list[int]] = []
    piv_cols: list[int] = []
    work = rows
    for c in range(ncols):
        nz = [i for i, r in enumerate(work) if r[c]]
        if not nz:
            continue
        if mod:
            p = work.pop(nz[0])
            inv = pow(p[c], -1, mod)
            p = [x * inv % mod for x in p]
            work = [[(x - r[c] * y) % mod for x, y in zip(r, p)] if r[c] else r for r in work]
        else:
            while len(nz) > 1:
                nz.sort(key=lambda i: abs(work[i][c]))
                i0 = nz[0]
                piv = work[i0]
                for i in nz[1:]:
                    q = work[i][c] // piv[c]
                    work[i] = [x - q * y for x, y in zip(work[i], piv)]
                nz = [i for i in nz if work[i][c]]
            p = work.pop(nz[0])
            if p[c] < 0:
                p = [-x for x in p]
        for idx, prev in enumerate(out):
            q = prev[c] // p[c] if not mod else prev[c]
            if q:
                out[idx] = [ring.reduce(x - q * y) for x, y in zip(prev, p)]
        out.append(p)
        piv_cols.append(c)
        work = [r for r in work if any(r)]
    return out


def kernel(M, ring: CoeffRing = ZZ, canonical: bool = True):
    """Basis of ``{x : M x = 0}`` as the columns of the returned matrix."""
    M = np.asarray(M, dtype=object)
    ncols = M.shape[1]
    if ncols == 0:
        return zeros(0, 0)
    if M.shape[0] == 0:
        return identity(ncols)
    if ring.is_field:
        R, piv = _rref_modp(M, ring.modulus)
        free = [c for c in range(ncols) if c not in set(piv)]
        if not free:
            return zeros(ncols, 0)
        K = zeros(ncols, len(free))
        for k, f in enumerate(free):
            K[f, k] = 1
            for t, c in enumerate(piv):
                K[c, k] = int(-R[t, f]) % ring.modulus
        return K
    _, Vt, piv = _column_echelon(M, ring)
    vecs = Vt[len(piv):]
    if canonical:
        vecs = hnf_rows(vecs, ring, width=ncols)
    if not vecs:
        return zeros(ncols, 0)
    return as_matrix(vecs).T.copy()


def image_lattice(M, ring: CoeffRing = ZZ) -> list[list[int]]:
    """Canonical basis (rows) of the column span of ``M``."""
    M = np.asarray(M, dtype=object)
    return hnf_rows([list(M[:, j]) for j in range(M.shape[1])], ring, width=M.shape[0])


def solve(M, Y, ring: CoeffRing = ZZ):
    """Some ``X`` with ``M X == Y`` over the ring; raise NoSolutionError."""
    M = np.asarray(M, dtype=object)
    Y = np.asarray(Y, dtype=object)
    if Y.ndim == 1:
        Y = Y.reshape(-1, 1)
    nrows, ncols = M.shape
    if Y.shape[0] != nrows:
        raise LinearAlgebraError("right-hand side has the wrong length")
    if ncols == 0:
        if not is_zero(Y, ring):
            raise NoSolutionError("nonzero right-hand side for an empty matrix")
        return zeros(0, Y.shape[1])
    if ring.is_field:
        return _solve_modp(M, Y, ring.modulus)
    Et, Vt, piv = _column_echelon(M, ring)
    mod = ring.modulus
    X = zeros(ncols, Y.shape[1])
    for col in range(Y.shape[1]):
        y = [ring.reduce(int(v)) for v in Y[:, col]]
        z = []
        for t, r in enumerate(piv):
            s = y[r] - sum(Et[u][r] * z[u] for u in range(t))
            p = Et[t][r]
            if mod:
                z.append(s * pow(p, -1, mod) % mod)
            else:
                if s % p:
                    raise NoSolutionError("right-hand side not in the integer image")
                z.append(s // p)
        resid = list(y)
        for t in range(len(piv)):
            if z[t]:
                for r in range(nrows):
                    resid[r] -= Et[t][r] * z[t]
        if any(ring.reduce(v) for v in resid):
            raise NoSolutionError("right-hand side not in the image")
        for t in range(len(piv)):
            if z[t]:
                for i in range(ncols):
                    X[i, col] += Vt[t][i] * z[t]
    return ring.reduce_matrix(X)


def _solve_modp(M, Y, p):
    ncols = M.shape[1]
    aug = np.concatenate([np.asarray(M, dtype=object), np.asarray(Y, dtype=object)], axis=1)
    R, piv = _rref_modp(aug, p)
    if piv and piv[-1] >= ncols:
        raise NoSolutionError("right-hand side not in the image")
    X = zeros(ncols, Y.shape[1])
    for t, c in enumerate(piv):
        for j in range(Y.shape[1]):
            X[c, j] = int(R[t, ncols + j])
    return X


def in_image(M, y, ring: CoeffRing = ZZ) -> bool:
    try:
        solve(M, y, ring)
    except NoSolutionError:
        return False
    return True


# ---------------------------------------------------------------------------
# modules and maps


@dataclass(frozen=True)
class FreeModule:
    labels: tuple = ()

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self.labels.index(label)


@dataclass(frozen=True)
class LinMap:
    domain: FreeModule
    codomain: FreeModule
    matrix: np.ndarray = field(compare=False)

    def __post_init__(self):
        if tuple(self.matrix.shape) != (self.codomain.rank, self.domain.rank):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match ranks "
                f"{self.codomain.rank}x{self.domain.rank}"
            )

    def compose(self, other: "LinMap", ring: CoeffRing = ZZ) -> "LinMap":
        """``self ∘ other``."""
        if other.codomain.rank != self.domain.rank:
            raise LinearAlgebraError("dimension mismatch in composition")
        return LinMap(other.domain, self.codomain, matmul(self.matrix, other.matrix, ring))


# ---------------------------------------------------------------------------
# complexes


@dataclass
class HomologySummary:
    """Per degree: free rank and torsion invariant factors."""

    ring: CoeffRing
    betti: list[int]
    torsion: list[list[int]]
    truncated_top: bool = False

    def __post_init__(self):
        for facs in self.torsion:
            for i, t in enumerate(facs):
                if t <= 1 or (i and t % facs[i - 1]):
                    raise ValueError(f"bad invariant factors {facs}")

    @property
    def top_degree(self) -> int:
        return len(self.betti) - 1

    def is_zero(self) -> bool:
        return all(b == 0 for b in self.betti) and all(not t for t in self.torsion)

    def group(self, n: int) -> tuple[int, tuple[int, ...]]:
        if 0 <= n < len(self.betti):
            return self.betti[n], tuple(self.torsion[n])
        return 0, ()

    def rows(self, name: str = "") -> list[dict]:
        out = []
        for n, (b, t) in enumerate(zip(self.betti, self.torsion)):
            out.append({
                "object": name,
                "degree": n,
                "betti": b,
                "torsion": list(t),
                "truncated": bool(self.truncated_top and n == self.top_degree),
            })
        return out

    def __eq__(self, other):
        if not isinstance(other, HomologySummary):
            return NotImplemented
        n = max(len(self.betti), len(other.betti))
        return all(self.group(i) == other.group(i) for i in range(n))

    def direct_sum(self, other: "HomologySummary") -> "HomologySummary":
        n = max(len(self.betti), len(other.betti))
        betti, tors = [], []
        for i in range(n):
            b1, t1 = self.group(i)
            b2, t2 = other.group(i)
            betti.append(b1 + b2)
            tors.append(_combine_torsion(list(t1) + list(t2)))
        return HomologySummary(self.ring, betti, tors,
                               self.truncated_top or other.truncated_top)


def _combine_torsion(factors: list[int]) -> list[int]:
    """Invariant factors of a direct sum of cyclic groups Z/f."""
    fs = [f for f in factors if f > 1]
    if not fs:
        return []
    return [f for f in invariant_factors(np.diag(np.array(fs, dtype=object))) if f > 1]


class BoundedComplex:
    """Cochain complex of free modules in degrees ``0..top_degree``.

    ``differentials[n]`` is the matrix of ``d: C^n -> C^{n+1}``.  When
    ``truncated`` is set the outgoing differential of the top degree was
    cut off, so cohomology there is only an upper bound.
    """

    def __init__(self, ring: CoeffRing, ranks: Sequence[int], differentials=None,
                 labels=None, truncated: bool = False, check: bool = True):
        self.ring = ring
        self.ranks = [int(r) for r in ranks]
        if differentials is None:
            differentials = [zeros(self.ranks[n + 1], self.ranks[n])
                             for n in range(len(self.ranks) - 1)]
        self.differentials = [ring.reduce_matrix(np.asarray(d, dtype=object).reshape(
            self.ranks[n + 1], self.ranks[n])) for n, d in enumerate(differentials)]
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ValueError("need one differential per consecutive degree pair")
        if labels is None:
            labels = [[f"e{n}_{i}" for i in range(r)] for n, r in enumerate(self.ranks)]
        self.modules = [FreeModule(tuple(l)) for l in labels]
        for n, m in enumerate(self.modules):
            if m.rank != self.ranks[n]:
                raise ValueError(f"label count differs from rank in degree {n}")
        self.truncated = truncated
        self._dcache: dict = {}
        if check:
            for n in range(len(self.differentials) - 1):
                if not is_zero(matmul(self.differentials[n + 1], self.differentials[n], ring), ring):
                    raise LinearAlgebraError(f"d∘d != 0 at degree {n}")

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def rank(self, n: int) -> int:
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    def diff(self, n: int):
        """Matrix of d from degree n to n+1 (zero matrix outside the range)."""
        if 0 <= n < len(self.differentials):
            return self.differentials[n]
        return zeros(self.rank(n + 1), self.rank(n))

    def labels(self, n: int) -> tuple:
        return self.modules[n].labels if 0 <= n < len(self.modules) else ()

    # keyed-basis view used by Q, K and the ring layer
    def basis(self, n: int) -> list:
        return [(n, i) for i in range(self.rank(n))]

    @staticmethod
    def degree(key) -> int:
        return key[0]

    def d(self, key) -> dict:
        hit = self._dcache.get(key)
        if hit is None:
            n, i = key
            col = self.diff(n)[:, i] if self.rank(n + 1) else []
            hit = {(n + 1, j): int(c) for j, c in enumerate(col) if c}
            self._dcache[key] = hit
        return hit

    def __eq__(self, other):
        if not isinstance(other, BoundedComplex):
            return NotImplemented
        if self.ring != other.ring or self.ranks != other.ranks:
            return False
        return all(mat_equal(a, b, self.ring) for a, b in zip(self.differentials, other.differentials))

    def __repr__(self):
        return f"BoundedComplex({self.ring}, ranks={self.ranks})"

    # serialization
    def to_json(self) -> dict:
        return {
            "ring": self.ring.tag,
            "ranks": self.ranks,
            "differentials": [[[int(x) for x in row] for row in d] for d in self.differentials],
            "truncated": self.truncated,
        }

    @classmethod
    def from_json(cls, doc) -> "BoundedComplex":
        if isinstance(doc, str):
            doc = json.loads(doc)
        ring = CoeffRing.parse(str(doc.get("ring", "z")))
        ranks = doc["ranks"]
        diffs = []
        for n, rows in enumerate(doc.get("differentials", [])):
            shape = (ranks[n + 1], ranks[n])
            diffs.append(as_matrix(rows, shape) if rows else zeros(*shape))
        while len(diffs) < len(ranks) - 1:
            n = len(diffs)
            diffs.append(zeros(ranks[n + 1], ranks[n]))
        return cls(ring, ranks, diffs, truncated=bool(doc.get("truncated", False)))


def _degree_ranks(C: BoundedComplex, n: int, incoming, outgoing):
    ring = C.ring
    r_out = rank(outgoing, ring) if outgoing.size else 0
    if ring.is_integers:
        facs = invariant_factors(incoming) if incoming.size else []
        r_in = len(facs)
        tors = [f for f in facs if f > 1]
    else:
        ring._require_solvable()
        r_in = rank(incoming, ring) if incoming.size else 0
        tors = []
    return C.rank(n) - r_out - r_in, tors


def cohomology(C: BoundedComplex) -> HomologySummary:
    betti, tors = [], []
    for n in range(C.top_degree + 1):
        b, t = _degree_ranks(C, n, C.diff(n - 1), C.diff(n) if n < C.top_degree else zeros(0, C.rank(n)))
        betti.append(b)
        tors.append(t)
    return HomologySummary(C.ring, betti, tors, truncated_top=C.truncated)


def chain_homology(ring: CoeffRing, ranks: Sequence[int], boundaries) -> HomologySummary:
    """Homology of a chain complex; ``boundaries[n]`` maps degree n to n-1."""
    betti, tors = [], []
    top = len(ranks) - 1
    for n in range(top + 1):
        out = boundaries[n] if 0 < n <= top and n < len(boundaries) else zeros(0, ranks[n])
        inc = boundaries[n + 1] if n + 1 <= top and n + 1 < len(boundaries) else zeros(ranks[n], 0)
        r_out = rank(out, ring) if out.size else 0
        if ring.is_integers:
            facs = invariant_factors(inc) if inc.size else []
            r_in, t = len(facs), [f for f in facs if f > 1]
        else:
            ring._require_solvable()
            r_in, t = (rank(inc, ring) if inc.size else 0), []
        betti.append(ranks[n] - r_out - r_in)
        tors.append(t)
    return HomologySummary(ring, betti, tors)


# ---------------------------------------------------------------------------
# builders


def sphere(n: int, ring: CoeffRing = ZZ) -> BoundedComplex:
    """Z[n]: the ring in degree n, zero elsewhere."""
    ranks = [0] * n + [1]
    return BoundedComplex(ring, ranks, labels=[[] for _ in range(n)] + [[f"z{n}"]])


def disk(n: int, ring: CoeffRing = ZZ) -> BoundedComplex:
    """Z<n,n+1>: the cone of the identity of Z[n]; d is 1 from degree n to n+1."""
    ranks = [0] * n + [1, 1]
    diffs = [zeros(ranks[k + 1], ranks[k]) for k in range(n + 1)]
    diffs[n] = as_matrix([[1]])
    labels = [[] for _ in range(n)] + [[f"x{n}"], [f"y{n + 1}"]]
    return BoundedComplex(ring, ranks, diffs, labels=labels)


def zero_complex(ring: CoeffRing = ZZ) -> BoundedComplex:
    return BoundedComplex(ring, [0])


def chain_map_ok(f: Sequence, C: BoundedComplex, D: BoundedComplex) -> bool:
    """``f[n]: C^n -> D^n`` commutes with the differentials."""
    ring = C.ring
    top = max(C.top_degree, D.top_degree)
    for n in range(top):
        lhs = matmul(D.diff(n), _deg(f, n, C, D), ring)
        rhs = matmul(_deg(f, n + 1, C, D), C.diff(n), ring)
        if not mat_equal(lhs, rhs, ring):
            return False
    return True


def _deg(f, n, C, D):
    if 0 <= n < len(f) and f[n] is not None:
        return np.asarray(f[n], dtype=object)
    return zeros(D.rank(n), C.rank(n))


def cone(f: Sequence, C: BoundedComplex, D: BoundedComplex) -> BoundedComplex:
    """Cone with ``cone^k = C^k ⊕ D^{k-1}`` and ``d(x, y) = (dx, f x - dy)``."""
    ring = C.ring
    top = max(C.top_degree, D.top_degree + 1)
    ranks = [C.rank(k) + D.rank(k - 1) for k in range(top + 1)]
    diffs = []
    for k in range(top):
        M = zeros(ranks[k + 1], ranks[k])
        a, b = C.rank(k), D.rank(k - 1)
        a1 = C.rank(k + 1)
        M[:a1, :a] = C.diff(k)
        M[a1:, :a] = _deg(f, k, C, D)
        if b:
            M[a1:, a:] = -D.diff(k - 1)
        diffs.append(M)
    labels = [[("c", l) for l in C.labels(k)] + [("d", l) for l in D.labels(k - 1)]
              for k in range(top + 1)]
    return BoundedComplex(ring, ranks, diffs, labels=labels)


def direct_sum(C: BoundedComplex, D: BoundedComplex) -> BoundedComplex:
    ring = C.ring
    top = max(C.top_degree, D.top_degree)
    ranks = [C.rank(k) + D.rank(k) for k in range(top + 1)]
    diffs = [block_diag(C.diff(k), D.diff(k)) for k in range(top)]
    labels = [[(0, l) for l in C.labels(k)] + [(1, l) for l in D.labels(k)]
              for k in range(top + 1)]
    return BoundedComplex(ring, ranks, diffs, labels=labels,
                          truncated=C.truncated or D.truncated)


def tensor(C: BoundedComplex, D: BoundedComplex) -> BoundedComplex:
    """Tensor product with ``d(x⊗y) = dx⊗y + (-1)^{|x|} x⊗dy``.

    The degree-n basis is ordered by ``p`` (degree of the left factor), then
    lexicographically by the factor indices.
    """
    ring = C.ring
    top = C.top_degree + D.top_degree
    index = []
    for n in range(top + 1):
        idx = {}
        for p in range(n + 1):
            for i in range(C.rank(p)):
                for j in range(D.rank(n - p)):
                    idx[(p, i, j)] = len(idx)
        index.append(idx)
    ranks = [len(ix) for ix in index]
    diffs = []
    for n in range(top):
        M = zeros(ranks[n + 1], ranks[n])
        for (p, i, j), col in index[n].items():
            q = n - p
            for (_, k), c in C.d((p, i)).items():
                M[index[n + 1][(p + 1, k, j)], col] += c
            s = -1 if p % 2 else 1
            for (_, k), c in D.d((q, j)).items():
                M[index[n + 1][(p, i, k)], col] += s * c
        diffs.append(M)
    labels = [[(C.labels(p)[i], D.labels(n - p)[j]) for (p, i, j) in index[n]]
              for n in range(top + 1)]
    return BoundedComplex(ring, ranks, diffs, labels=labels)


# ---------------------------------------------------------------------------
# contractions


@dataclass
class Contraction:
    """``p j = 1`` and ``∂h + h∂ = 1 - j p`` degree by degree."""

    j: list  # j[n]: A^n -> C^n
    h: list  # h[n]: C^n -> C^{n-1}
    p: list


def contraction(C: BoundedComplex, A: BoundedComplex, p: Sequence) -> Contraction:
    """Section and homotopy for a surjective quasi-isomorphism ``p: C -> A``.

    Works over Z (or a prime field).  The kernel of ``p`` is contracted top
    down by solving ``∂ s^n = 1 - s^{n+1} ∂`` inside the kernel; a chain
    section is then ``j = s - s_K e`` for any degreewise section ``s``,
    where ``e = ∂ s - s ∂`` lands in the kernel.
    """
    ring = C.ring
    ring._require_solvable()
    top = max(C.top_degree, A.top_degree)
    P = [_deg(p, n, C, A) for n in range(top + 2)]
    for n in range(top + 1):
        if not mat_equal(matmul(A.diff(n), P[n], ring), matmul(P[n + 1], C.diff(n), ring), ring):
            raise LinearAlgebraError("p is not a chain map")
    # degreewise section and kernel
    sec, Kb = [], []
    for n in range(top + 2):
        try:
            sec.append(solve(P[n], identity(A.rank(n)), ring) if A.rank(n) else zeros(C.rank(n), 0))
        except NoSolutionError as exc:
            raise NoSolutionError(f"p is not surjective in degree {n}") from exc
        Kb.append(kernel(P[n], ring) if C.rank(n) else zeros(0, 0))
    kr = [Kb[n].shape[1] for n in range(top + 2)]

    def dK(n):  # differential of the kernel complex, in kernel coordinates
        if kr[n] == 0 or kr[n + 1] == 0:
            return zeros(kr[n + 1], kr[n])
        return solve(Kb[n + 1], matmul(C.diff(n), Kb[n], ring), ring)

    DK = [dK(n) for n in range(top + 1)]
    # s_K[n]: K^n -> K^{n-1}, solved from the top
    sK = [zeros(0, kr[0])] + [None] * top + [zeros(kr[top], kr[top + 1])]
    for n in range(top, 0, -1):
        rhs = identity(kr[n])
        if n + 1 <= top:
            rhs = rhs - matmul(sK[n + 1], DK[n], ring)
        rhs = ring.reduce_matrix(rhs)
        if kr[n] == 0:
            sK[n] = zeros(kr[n - 1], 0)
            continue
        try:
            sK[n] = solve(DK[n - 1], rhs, ring)
        except NoSolutionError as exc:
            raise NoSolutionError(
                f"kernel of p is not acyclic in degree {n}: p is not a homotopy equivalence"
            ) from exc
    chk = identity(kr[0])
    if top >= 1 and kr[0]:
        chk = ring.reduce_matrix(chk - matmul(sK[1], DK[0], ring))
    if not is_zero(chk, ring):
        raise NoSolutionError("kernel of p has cohomology in degree 0")
    # chain section
    j = []
    for n in range(top + 1):
        e = ring.reduce_matrix(matmul(C.diff(n), sec[n], ring) - matmul(sec[n + 1], A.diff(n), ring))
        if kr[n + 1] and A.rank(n):
            e_k = solve(Kb[n + 1], e, ring)
            corr = matmul(Kb[n], matmul(sK[n + 1], e_k, ring), ring) if kr[n] else zeros(C.rank(n), A.rank(n))
            j.append(ring.reduce_matrix(sec[n] - corr))
        else:
            j.append(sec[n])
    # homotopy h = ι s_K π with π = 1 - j p projecting onto the kernel
    h = []
    for n in range(top + 1):
        if n == 0 or kr[n] == 0 or kr[n - 1] == 0:
            h.append(zeros(C.rank(n - 1), C.rank(n)))
            continue
        proj = ring.reduce_matrix(identity(C.rank(n)) - matmul(j[n], P[n], ring))
        coords = solve(Kb[n], proj, ring)
        h.append(matmul(Kb[n - 1], matmul(sK[n], coords, ring), ring))
    return Contraction(j=j, h=h, p=P[:top + 1])


def check_contraction(C: BoundedComplex, A: BoundedComplex, ct: Contraction) -> bool:
    ring = C.ring
    top = max(C.top_degree, A.top_degree)
    if not chain_map_ok(ct.j, A, C):
        return False
    for n in range(top + 1):
        if not mat_equal(matmul(ct.p[n], ct.j[n], ring), identity(A.rank(n)), ring):
            return False
        lhs = zeros(C.rank(n), C.rank(n))
        if n >= 1:
            lhs = lhs + matmul(C.diff(n - 1), ct.h[n], ring)
        if n + 1 <= top:
            lhs = lhs + matmul(ct.h[n + 1], C.diff(n), ring)
        rhs = identity(C.rank(n)) - matmul(ct.j[n], ct.p[n], ring)
        if not mat_equal(lhs, rhs, ring):
            return False
    return True
