"""Set maps [n] -> [m]: the morphisms of Fin, and of Δ when monotone."""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import product


class FinMapError(ValueError):
    pass


class FinMap:
    """An arbitrary set map ``[n] -> [m]`` stored as its value array."""

    __slots__ = ("source_dim", "target_dim", "values", "_hash")

    def __init__(self, source_dim: int, target_dim: int, values):
        values = tuple(int(v) for v in values)
        if source_dim < 0 or target_dim < 0:
            raise FinMapError("dimensions must be nonnegative")
        if len(values) != source_dim + 1:
            raise FinMapError(f"expected {source_dim + 1} values, got {len(values)}")
        for v in values:
            if not 0 <= v <= target_dim:
                raise FinMapError(f"value {v} outside [0, {target_dim}]")
        self.source_dim = source_dim
        self.target_dim = target_dim
        self.values = values
        self._hash = hash((source_dim, target_dim, values))

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __eq__(self, other):
        return (isinstance(other, FinMap) and self.source_dim == other.source_dim
                and self.target_dim == other.target_dim and self.values == other.values)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FinMap({self})"

    def __str__(self):
        return f"{self.source_dim}->{self.target_dim}:[{','.join(map(str, self.values))}]"

    @classmethod
    def parse(cls, text: str) -> "FinMap":
        m = re.fullmatch(r"\s*(\d+)\s*->\s*(\d+)\s*:\s*\[([\d,\s]*)\]\s*", text)
        if not m:
            raise FinMapError(f"cannot parse map {text!r}")
        vals = [int(v) for v in m.group(3).split(",") if v.strip()]
        return cls(int(m.group(1)), int(m.group(2)), vals)

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.values, self.values[1:]))

    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.target_dim + 1

    def then(self, g: "FinMap") -> "FinMap":
        """``g ∘ self``."""
        return compose(g, self)


def compose(g: FinMap, f: FinMap) -> FinMap:
    """``g ∘ f``: apply ``f`` first."""
    if f.target_dim != g.source_dim:
        raise FinMapError(f"cannot compose {g} after {f}")
    return FinMap(f.source_dim, g.target_dim, [g.values[v] for v in f.values])


def identity(n: int) -> FinMap:
    return FinMap(n, n, range(n + 1))


def coface(n: int, i: int) -> FinMap:
    """∂_i: [n] -> [n+1], the monotone injection missing i."""
    if not 0 <= i <= n + 1:
        raise FinMapError(f"coface index {i} out of range for n={n}")
    return FinMap(n, n + 1, [k if k < i else k + 1 for k in range(n + 1)])


def codegeneracy(n: int, j: int) -> FinMap:
    """μ_j: [n] -> [n-1] for 0 <= j <= n-1, the monotone surjection hitting j twice.

    ``j == n`` gives the extra map μ_n, which is the identity below n and
    sends n to 0.
    """
    if n < 1 or not 0 <= j <= n:
        raise FinMapError(f"codegeneracy index {j} out of range for n={n}")
    if j == n:
        return mu_top(n)
    return FinMap(n, n - 1, [k if k <= j else k - 1 for k in range(n + 1)])


def mu_top(n: int) -> FinMap:
    if n < 1:
        raise FinMapError("mu_top needs n >= 1")
    return FinMap(n, n - 1, [k if k < n else 0 for k in range(n + 1)])


def cyclic(n: int, power: int = 1) -> FinMap:
    """t_n^power with t_n(i) = i+1 mod n+1."""
    if n < 0:
        raise FinMapError("cyclic needs n >= 0")
    return FinMap(n, n, [(k + power) % (n + 1) for k in range(n + 1)])


def generators(n: int) -> dict[str, list[FinMap]]:
    out = {"coface": [coface(n, i) for i in range(n + 2)]}
    if n >= 1:
        out["codegeneracy"] = [codegeneracy(n, j) for j in range(n)]
        out["mu_top"] = [mu_top(n)]
        out["cyclic"] = [cyclic(n)]
    return out


def face(n: int, i: int) -> FinMap:
    """Simplicial face d_i = μ_i: [n] -> [n-1], 0 <= i <= n."""
    return codegeneracy(n, i)


def degeneracy(n: int, j: int) -> FinMap:
    """Simplicial degeneracy s_j = ∂_{j+1}: [n] -> [n+1], 0 <= j <= n."""
    if not 0 <= j <= n:
        raise FinMapError(f"degeneracy index {j} out of range for n={n}")
    return coface(n, j + 1)


def simplicial_view(n: int) -> dict[str, list[FinMap]]:
    out = {"degeneracies": [degeneracy(n, j) for j in range(n + 1)]}
    if n >= 1:
        out["faces"] = [face(n, i) for i in range(n + 1)]
    return out


def delta(n: int, i: int) -> FinMap:
    """The map [0] -> [n] with 0 ↦ i (equal to ∂_{i+1}^{n-i} ∂_0^i)."""
    return FinMap(0, n, [i])


@lru_cache(maxsize=None)
def all_maps(n: int, m: int) -> tuple[FinMap, ...]:
    return tuple(FinMap(n, m, v) for v in product(range(m + 1), repeat=n + 1))


def random_map(rng, n: int, m: int, monotone: bool = False) -> FinMap:
    vals = [rng.randrange(m + 1) for _ in range(n + 1)]
    if monotone:
        vals.sort()
    return FinMap(n, m, vals)


def check_cosimplicial_identities(nmax: int) -> list[str]:
    """Return the list of violated cosimplicial identities for n <= nmax."""
    bad = []
    for n in range(nmax + 1):
        for j in range(n + 2):
            for i in range(j):
                if compose(coface(n + 1, j), coface(n, i)) != compose(coface(n + 1, i), coface(n, j - 1)):
                    bad.append(f"∂_{j}∂_{i} at n={n}")
        for n1 in range(2, nmax + 1):
            for i in range(n1 - 1):
                for j in range(i, n1 - 1):
                    lhs = compose(codegeneracy(n1 - 1, j), codegeneracy(n1, i))
                    rhs = compose(codegeneracy(n1 - 1, i), codegeneracy(n1, j + 1))
                    if lhs != rhs:
                        bad.append(f"μ_{j}μ_{i} at n={n1}")
        for j in range(n + 1):
            for i in range(n + 2):
                if n < 1 and j >= n:
                    continue
                if j >= n + 1:
                    continue
                lhs = compose(codegeneracy(n + 1, j), coface(n, i))
                if i < j:
                    rhs = compose(coface(n - 1, i), codegeneracy(n, j - 1)) if n >= 1 else None
                elif i in (j, j + 1):
                    rhs = identity(n)
                else:
                    rhs = compose(coface(n - 1, i - 1), codegeneracy(n, j)) if n >= 1 else None
                if rhs is not None and lhs != rhs:
                    bad.append(f"μ_{j}∂_{i} at n={n}")
    return bad


def check_simplicial_identities(nmax: int) -> list[str]:
    """Violated simplicial and cyclic identities for d_i = μ_i, s_j = ∂_{j+1}, t_n."""
    bad = []
    for n in range(2, nmax + 1):
        for j in range(1, n + 1):
            for i in range(j):
                lhs = compose(face(n - 1, i), face(n, j))
                rhs = compose(face(n - 1, j - 1), face(n, i))
                if lhs != rhs:
                    bad.append(f"d_{i}d_{j} at n={n}")
    for n in range(nmax + 1):
        for j in range(n + 1):
            for i in range(j + 1):
                if compose(degeneracy(n + 1, j + 1), degeneracy(n, i)) != compose(degeneracy(n + 1, i), degeneracy(n, j)):
                    bad.append(f"s_{i}s_{j} at n={n}")
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = compose(face(n + 1, i), degeneracy(n, j))
                if i < j:
                    rhs = compose(degeneracy(n - 1, j - 1), face(n, i))
                elif i in (j, j + 1):
                    rhs = identity(n)
                else:
                    rhs = compose(degeneracy(n - 1, j), face(n, i - 1)) if n >= 1 else None
                if rhs is not None and lhs != rhs:
                    bad.append(f"d_{i}s_{j} at n={n}")
    for n in range(1, nmax + 1):
        for i in range(1, n + 1):
            if compose(face(n, i), cyclic(n)) != compose(cyclic(n - 1), face(n, i - 1)):
                bad.append(f"d_{i}t at n={n}")
        if compose(face(n, 0), cyclic(n)) != face(n, n):
            bad.append(f"d_0t at n={n}")
        for i in range(1, n + 1):
            if compose(degeneracy(n, i), cyclic(n)) != compose(cyclic(n + 1), degeneracy(n, i - 1)):
                bad.append(f"s_{i}t at n={n}")
        pw = identity(n)
        for _ in range(n + 1):
            pw = compose(cyclic(n), pw)
        if pw != identity(n):
            bad.append(f"t^(n+1) at n={n}")
    return bad
