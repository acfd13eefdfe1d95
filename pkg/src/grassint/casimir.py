"""Exact isotypic projection of projector polynomials.

The rotation group acts on polynomials in the entries of a symmetric matrix
variable; the infinitesimal action of each rotation plane is a sparse
first-order operator on the monomial basis.  Spectral projection with the
quadratic Casimir then extracts isotypic components of polynomial observables
exactly (up to roundoff), with no group quadrature.  Components whose weight
cannot occur on the Grassmannian evaluate to zero there, so eigenvalue
collisions with such weights are harmless.
"""
from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np
import scipy.sparse as sp

from .functions import PolynomialObservable, sym_pair_index, sym_pairs
from .weights import casimir_eigenvalue, weight_length

__all__ = [
    "PolynomialSpace",
    "polynomial_space",
    "reachable_casimir_values",
    "minimal_degree",
    "isotypic_component",
    "linear_projector_poly",
    "zonal_feature",
]

_SPACES = {}


def minimal_degree(w):
    """Smallest projector-polynomial degree that can contain the weight."""
    return max(1, (sum(abs(v) for v in w.entries) + 1) // 2)


def reachable_casimir_values(n, degree):
    """Casimir eigenvalues of every weight a degree-d polynomial can contain.

    Degree-d polynomials in the symmetric matrix variable only contain
    weights with |m|_1 <= 2d, and for even n only weights of even
    coordinate sum; enumerating dominant tuples under those bounds (the
    sign of the last entry does not change the eigenvalue) gives a safe
    superset of occurring eigenvalues.
    """
    l = weight_length(n)
    values = set()

    def rec(prefix, remaining):
        if len(prefix) == l:
            if n % 2 == 0 and sum(prefix) % 2 == 1:
                return
            values.add(sum(m * (m + n - 2 * (i + 1)) for i, m in enumerate(prefix)))
            return
        hi = min(prefix[-1] if prefix else 2 * degree, remaining)
        for m in range(hi + 1):
            rec(prefix + [m], remaining - m)

    rec([], 2 * degree)
    return sorted(values)


class PolynomialSpace:
    """Homogeneous degree-d polynomials in symmetric n x n matrix entries.

    Holds the monomial basis, the sparse rotation-plane generators, and the
    Casimir operator acting on coefficient vectors.
    """

    def __init__(self, n, degree):
        self.n = n
        self.degree = degree
        self.pairs = sym_pairs(n)
        self.pair_index = sym_pair_index(n)
        nvars = len(self.pairs)
        self.basis = list(combinations_with_replacement(range(nvars), degree))
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.generators = [self._generator(u, v)
                           for u in range(n) for v in range(u + 1, n)]
        omega = sp.csr_matrix((len(self.basis),) * 2)
        for gen in self.generators:
            omega = omega - gen @ gen
        self.casimir = omega.tocsr()

    def _variable_action(self, u, v):
        """L_{uv} p_ab as {var: coeff}, from the commutator [P, X_{uv}]."""
        act = {w: {} for w in range(len(self.pairs))}

        def add(d, a, b, c):
            if a > b:
                a, b = b, a
            w = self.pair_index[a, b]
            d[w] = d.get(w, 0.0) + c

        for wvar, (a, b) in enumerate(self.pairs):
            d = act[wvar]
            if b == v:
                add(d, a, u, 1.0)
            if b == u:
                add(d, a, v, -1.0)
            if a == u:
                add(d, v, b, -1.0)
            if a == v:
                add(d, u, b, 1.0)
        return act

    def _generator(self, u, v):
        var_act = self._variable_action(u, v)
        rows, cols, vals = [], [], []
        for col, mono in enumerate(self.basis):
            out = {}
            for t in range(self.degree):
                rest = mono[:t] + mono[t + 1:]
                for wvar, coeff in var_act[mono[t]].items():
                    key = tuple(sorted(rest + (wvar,)))
                    out[key] = out.get(key, 0.0) + coeff
            for key, coeff in out.items():
                if coeff != 0.0:
                    rows.append(self.index[key])
                    cols.append(col)
                    vals.append(coeff)
        b = len(self.basis)
        return sp.csr_matrix((vals, (rows, cols)), shape=(b, b))

    def coeff_vector(self, poly):
        """Coefficient vector of a homogeneous PolynomialObservable."""
        v = np.zeros(len(self.basis))
        for mono, coeff in poly.terms.items():
            if len(mono) != self.degree:
                raise ValueError("polynomial is not homogeneous of this degree")
            v[self.index[mono]] += coeff
        return v

    def to_poly(self, vec, k, tol=0.0):
        terms = {}
        for i, c in enumerate(vec):
            if abs(c) > tol:
                terms[self.basis[i]] = float(c)
        return PolynomialObservable(self.n, k, terms)

    def project(self, vec, c_target):
        """Spectral projection onto the Casimir eigenvalue c_target."""
        others = [c for c in reachable_casimir_values(self.n, self.degree)
                  if c != c_target]
        # eliminate far eigenvalues first to keep intermediates tame
        others.sort(key=lambda c: -abs(c - c_target))
        v = np.asarray(vec, dtype=float)
        for c in others:
            v = (self.casimir @ v - c * v) / (c_target - c)
        return v

    def evaluate_stack(self, coeff_matrix, frames, chunk=2048):
        """Values of stacked coefficient vectors at a stack of frames.

        coeff_matrix has shape (num_polys, basis) and frames (m, n, k);
        returns (m, num_polys).
        """
        frames = np.asarray(frames, dtype=float)
        m = frames.shape[0]
        idx = np.array(self.basis, dtype=int)      # (basis, degree)
        rows = np.array([p[0] for p in self.pairs])
        cols = np.array([p[1] for p in self.pairs])
        out = np.empty((m, coeff_matrix.shape[0]))
        for s in range(0, m, chunk):
            fr = frames[s:s + chunk]
            proj = np.einsum("mik,mjk->mij", fr, fr)
            flat = proj[:, rows, cols]
            v = flat[:, idx[:, 0]]
            for t in range(1, self.degree):
                v = v * flat[:, idx[:, t]]
            out[s:s + chunk] = v @ coeff_matrix.T
        return out


def polynomial_space(n, degree):
    """Cached PolynomialSpace factory."""
    key = (n, degree)
    if key not in _SPACES:
        _SPACES[key] = PolynomialSpace(n, degree)
    return _SPACES[key]


def isotypic_component(poly, w):
    """Exact weight-w isotypic component of a projector polynomial.

    The polynomial must be homogeneous.  For even n the two chirality
    classes share a Casimir eigenvalue, so the component of (m_1,..,m_l)
    with m_l != 0 is the joint +-pair component; every equivariant kernel in
    the library has equal scalars on the pair, so downstream verdicts are
    unaffected.
    """
    degrees = {len(m) for m in poly.terms} or {0}
    if len(degrees) != 1:
        raise ValueError("polynomial is not homogeneous")
    degree = degrees.pop()
    if degree == 0:
        if w.is_zero():
            return poly
        return PolynomialObservable(poly.n, poly.k, {})
    space = polynomial_space(poly.n, degree)
    vec = space.project(space.coeff_vector(poly), casimir_eigenvalue(w))
    return space.to_poly(vec, poly.k, tol=0.0)


def linear_projector_poly(n, k, a_matrix):
    """The linear observable F -> tr(A P_F) for symmetric A."""
    terms = {}
    for (r, c) in sym_pairs(n):
        coeff = a_matrix[r, c] if r == c else 2.0 * a_matrix[r, c]
        if coeff != 0.0:
            terms[(sym_pair_index(n)[r, c],)] = float(coeff)
    return PolynomialObservable(n, k, terms)


def _poly_multiply(p, q):
    terms = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            key = tuple(sorted(m1 + m2))
            terms[key] = terms.get(key, 0.0) + c1 * c2
    return PolynomialObservable(p.n, p.k, terms)


def zonal_feature(base_frame, k, w):
    """Weight-w zonal function centered at a subspace, as a polynomial.

    Projects tr(P_base P_F)^d, d = minimal_degree(w), onto the weight; the
    result spans the (unique) invariant direction of the weight's isotypic
    space at the base point and is exactly orthogonal to every other
    isotypic component.  Returns None when the component vanishes.
    """
    n = base_frame.shape[0]
    a = base_frame @ base_frame.T
    lin = linear_projector_poly(n, k, a)
    power = lin
    for _ in range(minimal_degree(w) - 1):
        power = _poly_multiply(power, lin)
    comp = isotypic_component(power, w)
    size = sum(c * c for c in comp.terms.values())
    if size < 1e-18:
        return None
    return comp
