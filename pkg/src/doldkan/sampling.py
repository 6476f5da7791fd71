"""Seeded random complexes, DG-rings, elements and maps used by the suites."""
from __future__ import annotations

import random

from . import exact_linear as el
from .exact_linear import BoundedComplex, CoeffRing, ZZ
from .fin_maps import FinMap


def rng_for(seed: int, label: str = "") -> random.Random:
    """Independent deterministic stream per (seed, label)."""
    return random.Random(f"{seed}:{label}")


def random_unimodular(rng: random.Random, n: int, ring: CoeffRing = ZZ, steps: int | None = None):
    """Product of random elementary matrices and sign flips."""
    M = el.identity(n)
    if n == 0:
        return M
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            q = rng.choice([-2, -1, 1, 2])
            M[i, :] = M[i, :] + q * M[j, :]
        elif rng.random() < 0.3 and not (ring.modulus == 2):
            M[i, :] = -M[i, :]
    return ring.reduce_matrix(M)


def _cell(kind: str, n: int, k: int, ring: CoeffRing) -> BoundedComplex:
    if kind == "sphere":
        return el.sphere(n, ring)
    ranks = [0] * n + [1, 1]
    diffs = [el.zeros(ranks[i + 1], ranks[i]) for i in range(n + 1)]
    diffs[n] = el.as_matrix([[k]])
    return BoundedComplex(ring, ranks, diffs)


def _pad(C: BoundedComplex, top: int) -> BoundedComplex:
    ranks = [C.rank(n) for n in range(top + 1)]
    diffs = [C.diff(n) if n < C.top_degree else el.zeros(ranks[n + 1], ranks[n]) for n in range(top)]
    return BoundedComplex(C.ring, ranks, diffs)


def random_complex(rng: random.Random, top: int = 4, max_rank: int = 3, ring: CoeffRing = ZZ,
                   max_cells: int | None = None) -> tuple[BoundedComplex, el.HomologySummary]:
    """A sum of spheres and k-disks (Z --k--> Z, k in {1,2,3}) in a random basis.

    Returns the complex together with its cohomology known by construction.
    """
    ranks = [0] * (top + 1)
    C = _pad(el.zero_complex(ring), top)
    betti = [0] * (top + 1)
    tors: list[list[int]] = [[] for _ in range(top + 1)]
    cells = max_cells if max_cells is not None else rng.randint(1, 2 * top + 2)
    for _ in range(cells):
        n = rng.randrange(top + 1)
        if rng.random() < 0.4 or n == top:
            if ranks[n] + 1 > max_rank:
                continue
            cell = _cell("sphere", n, 1, ring)
            ranks[n] += 1
            betti[n] += 1
        else:
            if ranks[n] + 1 > max_rank or ranks[n + 1] + 1 > max_rank:
                continue
            k = rng.choice([1, 2, 3])
            if ring.modulus and k % ring.modulus == 0:
                k = 1
            cell = _cell("disk", n, k, ring)
            ranks[n] += 1
            ranks[n + 1] += 1
            if ring.is_integers and k > 1:
                tors[n + 1].append(k)
            elif not ring.is_integers and ring.reduce(k) == 0:
                betti[n] += 1
                betti[n + 1] += 1
        C = el.direct_sum(C, _pad(cell, top))
    P = [random_unimodular(rng, C.rank(n), ring) for n in range(top + 1)]
    Pinv = [el.solve(P[n], el.identity(C.rank(n)), ring) if C.rank(n) else el.zeros(0, 0)
            for n in range(top + 1)]
    diffs = [el.matmul(Pinv[n + 1], el.matmul(C.diff(n), P[n], ring), ring) for n in range(top)]
    out = BoundedComplex(ring, C.ranks, diffs)
    tors = [sorted(el._combine_torsion(t)) if t else [] for t in tors]
    return out, el.HomologySummary(ring, betti, tors)


def random_chain_map(rng: random.Random, A: BoundedComplex, B: BoundedComplex, tries: int = 50):
    """A chain map A -> B found as d-compatible random data; falls back to 0."""
    R = A.ring
    top = min(A.top_degree, B.top_degree)
    for _ in range(tries):
        # null-homotopic maps dk + kd are always chain maps
        k = [el.zeros(B.rank(n - 1), A.rank(n)) if n >= 1 else el.zeros(0, A.rank(0)) for n in range(top + 2)]
        for n in range(1, top + 1):
            for i in range(B.rank(n - 1)):
                for j in range(A.rank(n)):
                    k[n][i, j] = rng.randint(-2, 2)
        f = []
        for n in range(top + 1):
            m = el.zeros(B.rank(n), A.rank(n))
            if n >= 1:
                m = m + el.matmul(B.diff(n - 1), k[n], R)
            if n + 1 <= A.top_degree and n + 1 <= top:
                m = m + el.matmul(k[n + 1], A.diff(n), R)
            f.append(R.reduce_matrix(m))
        return f
    return [el.zeros(B.rank(n), A.rank(n)) for n in range(top + 1)]


def random_elt(rng: random.Random, keys, ring: CoeffRing = ZZ, density: float = 0.5) -> dict:
    out = {}
    for k in keys:
        if rng.random() < density:
            c = ring.reduce(rng.randint(-3, 3))
            if c:
                out[k] = c
    if not out and keys:
        out[keys[rng.randrange(len(keys))]] = 1
    return out


def random_finmap(rng: random.Random, n: int, m: int) -> FinMap:
    return FinMap(n, m, [rng.randrange(m + 1) for _ in range(n + 1)])


def random_dg_ring(rng: random.Random, ring: CoeffRing = ZZ, rebase: bool = True):
    """A small DG-ring (ranks <= 2, degrees <= 3) drawn from a few families.

    Every family is checked against the DG-ring axioms on construction; a
    random change of basis then hides the special shape of the table.
    """
    from . import ring_layer as rl
    kind = rng.choice(["poly0", "poly", "koszul", "square_zero", "triangular"])
    c = rng.choice([1, 2, -1, 3]) if ring.is_integers else 1
    if kind == "poly0":
        A = rl.truncated_polynomial(ring, 0, 2)
    elif kind == "poly":
        A = rl.truncated_polynomial(ring, rng.choice([1, 2]), rng.choice([2, 3, 4]), 3)
    elif kind == "koszul":
        A = rl.koszul_pair(ring, c)
    elif kind == "square_zero":
        A = rl.square_zero(ring, c)
    else:
        A = rl.triangular_bimodule(ring, rng.choice([0, c]))
    if rebase:
        P = [random_unimodular(rng, A.rank(n), ring) for n in range(A.top_degree + 1)]
        A = rl.rebase(A, P)
    return A
