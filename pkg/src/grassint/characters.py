"""Weyl characters of SO(n) evaluated on explicit rotations.

A character is evaluated as its weight-multiplicity cosine sum in the
eigen-angle coordinates of the rotation; multiplicities come from the
Freudenthal recursion and are cached per highest weight.  This form is
stable everywhere, including near the identity where determinant-ratio
forms of the character formula cancel catastrophically.

Eigen-angle extraction still rejects rotations whose angles collide within
a tolerance: for even n the chirality orientation (which of the two
half-spin-like weight classes a signed angle pattern belongs to) is read
off eigenplane frames, and those are ill-conditioned at collisions.  Haar
samples avoid the degenerate set almost surely.
"""
from __future__ import annotations

from itertools import permutations, product

import numpy as np

from .weights import weight_length, weyl_dimension

__all__ = ["rotation_angles", "character_value", "character_at_identity",
           "weight_system", "DEGENERACY_TOL"]

DEGENERACY_TOL = 1e-6

_SYSTEMS = {}


def rotation_angles(matrix, tol=DEGENERACY_TOL):
    """Eigen-angles of a rotation matrix, oriented for even n.

    Returns the l = floor(n/2) rotation angles, magnitudes in (0, pi)
    sorted decreasingly.  For even n the sign of the last angle is chosen
    so that the eigenplane frame is positively oriented, which is what
    distinguishes the two chirality classes of weights.  Raises
    ValueError("degenerate element") when angles collide (or hit 0 for odd
    n, or pi for even n) within `tol`.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    l = weight_length(n)
    if n == 2:
        return np.array([np.arctan2(matrix[1, 0], matrix[0, 0])])
    vals, vecs = np.linalg.eig(matrix)
    sel = np.where(np.angle(vals) > 0)[0]
    if len(sel) != l:
        raise ValueError("degenerate element")
    order = np.argsort(-np.angle(vals[sel]))
    sel = sel[order]
    theta = np.angle(vals[sel])
    gaps = [abs(theta[a] - theta[b]) for a in range(l) for b in range(a + 1, l)]
    if n % 2 == 1:
        gaps.append(float(theta.min()))
    else:
        gaps.extend(np.pi - theta)  # a -1 eigenpair leaves the frame orientation free
    if gaps and min(gaps) < tol:
        raise ValueError("degenerate element")
    if n % 2 == 0:
        basis = np.empty((n, n))
        for p, idx in enumerate(sel):
            x = vecs[:, idx].real
            y = vecs[:, idx].imag
            x = x / np.linalg.norm(x)
            y = y - x * (x @ y)
            y = y / np.linalg.norm(y)
            basis[:, 2 * p] = x
            basis[:, 2 * p + 1] = y
        if np.linalg.det(basis) < 0:
            theta = theta.copy()
            theta[-1] = -theta[-1]
    return theta


def _rho(n):
    l = weight_length(n)
    if n % 2 == 1:
        return np.array([l - i - 0.5 for i in range(l)])
    return np.array([float(l - i - 1) for i in range(l)])


def _positive_roots(n):
    l = weight_length(n)
    roots = []
    for i in range(l):
        for j in range(i + 1, l):
            for s in (1, -1):
                r = [0] * l
                r[i] = 1
                r[j] = s
                roots.append(tuple(r))
    if n % 2 == 1:
        for i in range(l):
            r = [0] * l
            r[i] = 1
            roots.append(tuple(r))
    return roots


def _dominant_rep(v, odd):
    """Dominant Weyl-orbit representative of an arbitrary weight vector."""
    av = sorted((abs(x) for x in v), reverse=True)
    if odd:
        return tuple(av)
    negs = sum(1 for x in v if x < 0)
    if negs % 2 == 1 and av[-1] != 0:
        av[-1] = -av[-1]
    return tuple(av)


def _in_dominance_cone(delta, odd):
    """Whether delta is a nonnegative integer sum of simple roots."""
    s = 0
    l = len(delta)
    for i in range(l - 1):
        s += delta[i]
        if s < 0:
            return False
    last = delta[-1]
    if odd:
        return s + last >= 0
    return s >= abs(last) and (s + last) % 2 == 0


def _dominant_below(top, odd):
    """All dominant mu with top - mu in the positive root cone."""
    l = len(top)
    cap = top[0]
    out = []

    def rec(prefix):
        if len(prefix) == l:
            delta = [t - m for t, m in zip(top, prefix)]
            if _in_dominance_cone(delta, odd):
                out.append(tuple(prefix))
            return
        hi = prefix[-1] if prefix else cap
        last = len(prefix) == l - 1 and not odd
        lo = -hi if last else 0
        for m in range(hi, lo - 1, -1):
            rec(prefix + [m])

    rec([])
    return out


def _orbit(mu, odd):
    vectors = set()
    nonzero = [abs(x) for x in mu if x != 0]
    has_zero = len(nonzero) < len(mu)
    base_negs = sum(1 for x in mu if x < 0)
    for perm in set(permutations(tuple(abs(x) for x in mu))):
        idx = [i for i, x in enumerate(perm) if x != 0]
        for signs in product((1, -1), repeat=len(idx)):
            flips = sum(1 for s in signs if s < 0)
            if not odd and not has_zero and (flips - base_negs) % 2 != 0:
                continue
            v = list(perm)
            for pos, s in zip(idx, signs):
                v[pos] *= s
            vectors.add(tuple(v))
    return vectors


def weight_system(w):
    """Weight multiset of the module, as (vectors, multiplicities).

    Multiplicities are computed by the Freudenthal recursion over dominant
    weights and expanded along Weyl orbits; the total count is checked
    against the Weyl dimension.
    """
    key = (w.n, w.entries)
    if key in _SYSTEMS:
        return _SYSTEMS[key]
    n = w.n
    l = weight_length(n)
    odd = n % 2 == 1
    if n == 2:
        vecs = np.array([[float(w.entries[0])]])
        mults = np.array([1.0])
        _SYSTEMS[key] = (vecs, mults)
        return _SYSTEMS[key]
    rho = _rho(n)
    roots = _positive_roots(n)
    top = tuple(int(m) for m in w.entries)
    dominants = _dominant_below(top, odd)

    def shifted_norm(mu):
        return float(np.dot(np.array(mu) + rho, np.array(mu) + rho))

    dominants.sort(key=lambda mu: -shifted_norm(mu))
    mult = {}
    top_norm = shifted_norm(top)
    top_height = sum(abs(m) for m in top)
    for mu in dominants:
        if mu == top:
            mult[mu] = 1
            continue
        denom = top_norm - shifted_norm(mu)
        acc = 0.0
        for alpha in roots:
            k = 1
            while True:
                up = tuple(m + k * a for m, a in zip(mu, alpha))
                m_up = mult.get(_dominant_rep(up, odd), 0)
                if m_up == 0 and sum(abs(x) for x in up) > top_height:
                    break
                acc += 2.0 * m_up * sum(u * a for u, a in zip(up, alpha))
                k += 1
        mult[mu] = round(acc / denom) if denom != 0 else 0
    vec_list = []
    mult_list = []
    total = 0
    for mu, m in mult.items():
        if m <= 0:
            continue
        for v in _orbit(mu, odd):
            vec_list.append(v)
            mult_list.append(float(m))
            total += int(m)
    if total != weyl_dimension(w):
        raise RuntimeError("weight multiplicities do not sum to the dimension")
    _SYSTEMS[key] = (np.array(vec_list, dtype=float), np.array(mult_list))
    return _SYSTEMS[key]


def character_value(w, g, tol=DEGENERACY_TOL):
    """Character of the weight-w module at the rotation g.

    Real-valued on the supported weights; for n = 2 this is cos(m*theta),
    the shared real character of the +-m pair.  Exactly degenerate
    rotations raise ValueError("degenerate element").
    """
    matrix = g.matrix if hasattr(g, "matrix") else np.asarray(g, dtype=float)
    n = w.n
    if matrix.shape[0] != n:
        raise ValueError("rotation and weight belong to different SO(n)")
    l = weight_length(n)
    if n == 2:
        theta = rotation_angles(matrix, tol)[0]
        return float(np.cos(w.entries[0] * theta))
    if n % 2 == 0 and l % 2 == 1 and w.entries[-1] != 0:
        raise NotImplementedError("complex-type weight: character is not real")
    angles = rotation_angles(matrix, tol)
    vecs, mults = weight_system(w)
    return float(np.dot(mults, np.cos(vecs @ angles)))


def character_at_identity(w):
    """Continuity value at the identity: the Weyl dimension."""
    return float(weyl_dimension(w))
