"""
The graded Fin-modules TV and ΛV.

In codimension n, V^n is free on v_1, …, v_n and v_0 stands for zero.  A
word is a tuple of letters in 1..n; elements are dicts ``word -> coeff``
with zero coefficients pruned.  Exterior monomials are strictly increasing
tuples.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from math import comb, factorial

from .fin_maps import FinMap

Word = tuple


# ---------------------------------------------------------------------------
# linear combination helpers shared by the whole package


def add_into(acc: dict, other: dict, scale: int = 1, mod: int = 0) -> dict:
    for k, c in other.items():
        v = acc.get(k, 0) + scale * c
        if mod:
            v %= mod
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)
    return acc


def lin_sum(terms, mod: int = 0) -> dict:
    acc: dict = {}
    for scale, elt in terms:
        add_into(acc, elt, scale, mod)
    return acc


def scale(elt: dict, c: int, mod: int = 0) -> dict:
    out = {}
    for k, v in elt.items():
        w = v * c
        if mod:
            w %= mod
        if w:
            out[k] = w
    return out


def prune(elt: dict, mod: int = 0) -> dict:
    out = {}
    for k, v in elt.items():
        if mod:
            v %= mod
        if v:
            out[k] = v
    return out


def word_str(w: Word) -> str:
    return ".".join(f"v{i}" for i in w) if w else "1"


def ext_str(w: Word) -> str:
    return "^".join(f"v{i}" for i in w) if w else "1"


def elt_str(elt: dict, fmt=word_str) -> str:
    if not elt:
        return "0"
    parts = []
    for k in sorted(elt):
        c = elt[k]
        parts.append(f"{c:+d}*{fmt(k)}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# TV


def word_mul(x: dict, y: dict, mod: int = 0) -> dict:
    out: dict = {}
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            k = w1 + w2
            v = out.get(k, 0) + c1 * c2
            if mod:
                v %= mod
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


@lru_cache(maxsize=None)
def _letter_image(values: tuple, letter: int) -> tuple:
    a0 = values[0]
    ai = values[letter]
    if ai == a0:
        return ()
    out = []
    if ai:
        out.append(((ai,), 1))
    if a0:
        out.append(((a0,), -1))
    return tuple(out)


@lru_cache(maxsize=200000)
def _word_image(values: tuple, word: Word) -> tuple:
    acc = {(): 1}
    for letter in word:
        img = dict(_letter_image(values, letter))
        if not img:
            return ()
        acc = word_mul(acc, img)
    return tuple(sorted(acc.items()))


def fin_action_word(alpha: FinMap, word: Word) -> dict:
    """Image of a single word: each v_i goes to v_{α(i)} - v_{α(0)}."""
    return dict(_word_image(alpha.values, word))


def fin_action_T(alpha: FinMap, x: dict, mod: int = 0) -> dict:
    out: dict = {}
    for w, c in x.items():
        if w and max(w) > alpha.source_dim:
            raise ValueError(f"letter out of range for {alpha}")
        add_into(out, fin_action_word(alpha, w), c, mod)
    return out


@lru_cache(maxsize=None)
def _theta_word(word: Word) -> tuple:
    out = {}
    for k, letter in enumerate(word):
        w = word[:k + 1] + (letter,) + word[k + 1:]
        out[w] = out.get(w, 0) + (-1) ** k
    return tuple((w, c) for w, c in out.items() if c)


def theta_word(word: Word) -> dict:
    return dict(_theta_word(word))


def theta(x: dict, mod: int = 0) -> dict:
    """The degree +1 derivation with θ(v_i) = v_i v_i."""
    out: dict = {}
    for w, c in x.items():
        add_into(out, theta_word(w), c, mod)
    return out


def graded_commutator(x: dict, y: dict, mod: int = 0) -> dict:
    """[x, y] = xy - (-1)^{|x||y|} yx for homogeneous x, y."""
    if not x or not y:
        return {}
    dx = len(next(iter(x)))
    dy = len(next(iter(y)))
    s = -1 if (dx * dy) % 2 == 0 else 1
    return add_into(word_mul(x, y, mod), word_mul(y, x, mod), s, mod)


def letter(i: int) -> dict:
    return {(i,): 1} if i else {}


# ---------------------------------------------------------------------------
# ΛV


def sort_sign(word: Word):
    """(sign, sorted tuple) or (0, None) if a letter repeats."""
    if len(set(word)) != len(word):
        return 0, None
    w = list(word)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            if w[j] > w[j + 1]:
                w[j], w[j + 1] = w[j + 1], w[j]
                sign = -sign
    return sign, tuple(w)


def project_p(x: dict, mod: int = 0) -> dict:
    """The canonical projection TV -> ΛV."""
    out: dict = {}
    for w, c in x.items():
        s, m = sort_sign(w)
        if s:
            v = out.get(m, 0) + s * c
            if mod:
                v %= mod
            if v:
                out[m] = v
            else:
                out.pop(m)
    return out


def wedge(x: dict, y: dict, mod: int = 0) -> dict:
    return project_p(word_mul(x, y), mod)


def fin_action_ext(alpha: FinMap, x: dict, mod: int = 0) -> dict:
    """Fin action on ΛV, computed through any lift to TV."""
    return project_p(fin_action_T(alpha, x), mod)


# ---------------------------------------------------------------------------
# ε_n and surjections


def perm_sign(perm) -> int:
    return sort_sign(tuple(perm))[0]


@lru_cache(maxsize=None)
def _epsilon(n: int) -> tuple:
    return tuple((tuple(p), perm_sign(p)) for p in permutations(range(1, n + 1)))


def epsilon(n: int) -> dict:
    """Σ_{σ ∈ S_n} sign(σ) v_{σ1} … v_{σn}."""
    return dict(_epsilon(n))


def is_surjective_word(word: Word, n: int) -> bool:
    return len(set(word)) == n


@lru_cache(maxsize=None)
def surjections(r: int, n: int) -> tuple:
    """Surjections {1..r} -> {1..n} as words, in lexicographic order."""
    if r < n:
        return ()
    return tuple(w for w in product(range(1, n + 1), repeat=r) if len(set(w)) == n)


def count_surjections(r: int, n: int) -> int:
    """Inclusion-exclusion count, used as an independent oracle."""
    return sum((-1) ** k * comb(n, k) * (n - k) ** r for k in range(n + 1))


def reduce_to_surjections(x: dict, n: int) -> dict:
    """Image in T^rV^n / Σ_j T^rV^n_j: drop words that miss a letter."""
    return {w: c for w, c in x.items() if len(set(w)) == n}


def words(r: int, n: int) -> tuple:
    return tuple(product(range(1, n + 1), repeat=r))


def p_of_epsilon(n: int) -> int:
    return project_p(epsilon(n)).get(tuple(range(1, n + 1)), 0)


def factorial_oracle(n: int) -> int:
    return factorial(n)


def ext_basis(n: int, r: int) -> list:
    from itertools import combinations
    return [tuple(c) for c in combinations(range(1, n + 1), r)]
