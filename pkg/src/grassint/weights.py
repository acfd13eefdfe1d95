"""Highest weights of SO(n) and the combinatorics of Grassmannian supports.

Weights are integer tuples of length floor(n/2).  For odd n the entries are
non-increasing and non-negative; for even n >= 4 the last entry may be
negative with |m_l| bounded by m_{l-1}; for n = 2 the single entry is any
integer (the characters of SO(2)).  Functions on Gr(k, n) decompose
multiplicity-free over the weights with all entries even and zero beyond
position min(k, n-k).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product

__all__ = [
    "HighestWeight",
    "weight_length",
    "admissible_weights",
    "weyl_dimension",
    "casimir_eigenvalue",
    "in_even_support",
    "grassmannian_support",
    "in_cosine_image",
]


def weight_length(n):
    return n // 2


class HighestWeight:
    """Dominant integral weight of SO(n)."""

    def __init__(self, n, entries):
        n = int(n)
        if n < 2:
            raise ValueError("need n >= 2")
        entries = tuple(int(v) for v in entries)
        l = weight_length(n)
        if len(entries) != l:
            raise ValueError(f"weight for SO({n}) must have {l} entries")
        if n == 2:
            pass  # any integer
        elif n % 2 == 1:
            if any(entries[i] < entries[i + 1] for i in range(l - 1)) or entries[-1] < 0:
                raise ValueError("entries must be non-increasing and non-negative")
        else:
            head = entries[:-1]
            if any(head[i] < head[i + 1] for i in range(len(head) - 1)):
                raise ValueError("entries must be non-increasing")
            if head and head[-1] < abs(entries[-1]):
                raise ValueError("last entry must satisfy |m_l| <= m_{l-1}")
        self.n = n
        self.entries = entries

    def __eq__(self, other):
        return isinstance(other, HighestWeight) and (self.n, self.entries) == (other.n, other.entries)

    def __hash__(self):
        return hash((self.n, self.entries))

    def __repr__(self):
        return f"HighestWeight(n={self.n}, entries={self.entries})"

    def abs_entries(self):
        return tuple(abs(v) for v in self.entries)

    def is_zero(self):
        return all(v == 0 for v in self.entries)


def in_even_support(w, k):
    """Whether every entry is even and entries vanish beyond position k."""
    if any(v % 2 for v in w.entries):
        return False
    l = len(w.entries)
    return all(w.entries[i] == 0 for i in range(min(k, l), l))


def grassmannian_support(w, k):
    """Whether w occurs in the decomposition of functions on Gr(k, n)."""
    return in_even_support(w, k) and in_even_support(w, w.n - k)


def admissible_weights(n, k, cap):
    """Weights occurring on Gr(k, n) with m_1 <= cap, sorted lexicographically.

    For even n with k = n/2 both signs of the last entry appear (the two
    chirality classes); everywhere else the last relevant entry is >= 0.
    """
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    if cap < 0 or cap % 2:
        raise ValueError("cap must be a non-negative even integer")
    l = weight_length(n)
    rows = min(k, n - k, l)
    signed_last = (n % 2 == 0) and rows == l
    out = []
    ladders = [range(0, cap + 1, 2)] * rows
    for mm in product(*ladders):
        if any(mm[i] < mm[i + 1] for i in range(rows - 1)):
            continue
        tail = (0,) * (l - rows)
        candidates = [mm + tail]
        if signed_last and mm[-1] > 0:
            candidates.append(mm[:-1] + (-mm[-1],))
        for c in candidates:
            out.append(HighestWeight(n, c))
    out.sort(key=lambda w: w.entries)
    return out


def _positive_roots(n):
    """Positive roots as coefficient tuples over e_1..e_l."""
    l = weight_length(n)
    roots = []
    for i in range(l):
        for j in range(i + 1, l):
            minus = [0] * l
            minus[i], minus[j] = 1, -1
            plus = [0] * l
            plus[i], plus[j] = 1, 1
            roots.append(tuple(minus))
            roots.append(tuple(plus))
    if n % 2 == 1:
        for i in range(l):
            short = [0] * l
            short[i] = 1
            roots.append(tuple(short))
    return roots


def rho_vector(n):
    """Half-sum of positive roots, as Fractions."""
    l = weight_length(n)
    if n % 2 == 1:
        return [Fraction(2 * (l - i) - 1, 2) for i in range(l)]
    return [Fraction(l - 1 - i) for i in range(l)]


def weyl_dimension(w):
    """Dimension of the irreducible SO(n) module with highest weight w."""
    n = w.n
    if n == 2:
        return 1
    rho = rho_vector(n)
    lam = [Fraction(v) for v in w.entries]
    dim = Fraction(1)
    for alpha in _positive_roots(n):
        num = sum((lam[i] + rho[i]) * alpha[i] for i in range(len(alpha)))
        den = sum(rho[i] * alpha[i] for i in range(len(alpha)))
        dim *= Fraction(num, den)
    if dim.denominator != 1 or dim <= 0:
        raise ValueError("weight is not dominant")
    return int(dim)


def casimir_eigenvalue(w):
    """Quadratic Casimir eigenvalue: sum of m_i (m_i + n - 2i), i 1-based."""
    n = w.n
    return sum(m * (m + n - 2 * (i + 1)) for i, m in enumerate(w.entries))


def in_cosine_image(n, i, j, w):
    """Range membership for the cosine (and sine) transform Gr(i) -> Gr(j).

    The weight must lie in the support of both Grassmannians and its second
    entry must satisfy |m_2| <= 2.
    """
    if w.n != n:
        raise ValueError("weight belongs to a different SO(n)")
    if not (grassmannian_support(w, i) and grassmannian_support(w, j)):
        return False
    if len(w.entries) >= 2 and abs(w.entries[1]) > 2:
        return False
    return True
