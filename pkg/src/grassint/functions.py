"""Observables on Grassmannians and quadrature configuration.

A `GrassmannFunction` is any deterministic real-valued map on Gr(k, n).  The
workhorse constructor is `PolynomialObservable`: polynomials in the entries of
the orthogonal projector onto the subspace.  These are smooth, rotation-
covariant, and span every isotypic component up to a degree cutoff, which
makes them the natural test family for transform diagnostics.
"""
from __future__ import annotations

import numpy as np

from .subspaces import Subspace

__all__ = [
    "GrassmannFunction",
    "PolynomialObservable",
    "QuadratureSpec",
    "TransformOp",
    "sym_pairs",
    "sym_pair_index",
]


def sym_pairs(n):
    """Upper-triangle index pairs (a, b), a <= b, in row-major order."""
    return [(a, b) for a in range(n) for b in range(a, n)]


def sym_pair_index(n):
    """Map (a, b) -> flat variable index for symmetric n x n matrices."""
    idx = {}
    for v, (a, b) in enumerate(sym_pairs(n)):
        idx[a, b] = v
        idx[b, a] = v
    return idx


class GrassmannFunction:
    """Deterministic real-valued function on Gr(k, n).

    Parameters
    ----------
    n, k : int
        Ambient and subspace dimension of the domain.
    func : callable
        Map Subspace -> float.
    batch_func : callable, optional
        Vectorized evaluation on a stack of frames (m, n, k) -> (m,).
        Falls back to a Python loop over `func`.
    """

    def __init__(self, n, k, func, batch_func=None):
        self.n = int(n)
        self.k = int(k)
        self._func = func
        self._batch_func = batch_func

    def __call__(self, e: Subspace) -> float:
        if e.ambient_dim != self.n or e.dim != self.k:
            raise ValueError("subspace does not lie in the function's domain")
        return float(self._func(e))

    def eval_frames(self, frames) -> np.ndarray:
        """Values at a stack of orthonormal frames, shape (m, n, k) -> (m,)."""
        frames = np.asarray(frames, dtype=float)
        if self._batch_func is not None:
            return np.asarray(self._batch_func(frames), dtype=float)
        return np.array([self._func(Subspace(f)) for f in frames], dtype=float)


def _projector_variables(frames, pairs):
    """Flat upper-triangle projector entries for a stack of frames."""
    proj = np.einsum("mik,mjk->mij", frames, frames)
    rows = np.array([p[0] for p in pairs])
    cols = np.array([p[1] for p in pairs])
    return proj[:, rows, cols]


class PolynomialObservable(GrassmannFunction):
    """Polynomial in the entries of the subspace projector.

    Terms are stored as {monomial: coefficient} with each monomial a sorted
    tuple of flat upper-triangle variable indices; the empty tuple is the
    constant term.  f(E) = sum over terms of coeff * prod of P_ab(E).
    """

    def __init__(self, n, k, terms):
        self.pairs = sym_pairs(n)
        clean = {}
        nvars = len(self.pairs)
        for mono, coeff in terms.items():
            mono = tuple(sorted(int(v) for v in mono))
            if mono and (mono[0] < 0 or mono[-1] >= nvars):
                raise ValueError("monomial index out of range")
            if coeff != 0.0:
                clean[mono] = clean.get(mono, 0.0) + float(coeff)
        self.terms = clean
        self._constant = clean.get((), 0.0)
        self._plan = []
        by_degree = {}
        for mono, coeff in clean.items():
            if mono:
                by_degree.setdefault(len(mono), ([], []))
                by_degree[len(mono)][0].append(mono)
                by_degree[len(mono)][1].append(coeff)
        for d in sorted(by_degree):
            monos, coeffs = by_degree[d]
            self._plan.append((np.array(monos, dtype=int), np.array(coeffs)))
        super().__init__(n, k, self._eval_single, self._eval_batch)

    @property
    def degree(self):
        return max((len(m) for m in self.terms), default=0)

    def degree_blocks(self):
        """Split into homogeneous parts: {degree: PolynomialObservable}."""
        blocks = {}
        for mono, coeff in self.terms.items():
            blocks.setdefault(len(mono), {})[mono] = coeff
        return {d: PolynomialObservable(self.n, self.k, t) for d, t in blocks.items()}

    def _eval_single(self, e: Subspace) -> float:
        return float(self._eval_batch(e.frame[None])[0])

    def _eval_batch(self, frames):
        frames = np.asarray(frames, dtype=float)
        m = frames.shape[0]
        out = np.full(m, self._constant)
        if not self._plan:
            return out
        widest = max(idx.shape[0] for idx, _ in self._plan)
        step = max(256, (1 << 22) // widest)  # bound the (samples, terms) temporary
        for lo in range(0, m, step):
            flat = _projector_variables(frames[lo:lo + step], self.pairs)
            for idx, coeffs in self._plan:
                prod = flat[:, idx[:, 0]]
                for t in range(1, idx.shape[1]):
                    prod = prod * flat[:, idx[:, t]]
                out[lo:lo + step] += prod @ coeffs
        return out

    def scaled(self, c):
        return PolynomialObservable(self.n, self.k, {m: c * v for m, v in self.terms.items()})

    def plus(self, other):
        if (other.n, other.k) != (self.n, self.k):
            raise ValueError("domain mismatch")
        terms = dict(self.terms)
        for m, v in other.terms.items():
            terms[m] = terms.get(m, 0.0) + v
        return PolynomialObservable(self.n, self.k, terms)

    def coeff_bound(self):
        """Sum of |coefficients|: a crude sup bound since |P_ab| <= 1."""
        return float(sum(abs(c) for c in self.terms.values()))

    @classmethod
    def constant(cls, n, k, value=1.0):
        return cls(n, k, {(): float(value)})

    @classmethod
    def random_homogeneous(cls, n, k, degree, terms, rng):
        """Sparse random polynomial: `terms` monomials of the given degree."""
        nvars = n * (n + 1) // 2
        out = {}
        for _ in range(terms):
            mono = tuple(sorted(rng.integers(0, nvars, size=degree)))
            out[mono] = out.get(mono, 0.0) + float(rng.standard_normal())
        return cls(n, k, out)


class QuadratureSpec:
    """Monte Carlo quadrature configuration.

    estimator is "plain-mean" (stderr = sample std / sqrt(N)) or
    "median-of-means" over `blocks` blocks, for heavy-tailed integrands.
    """

    ESTIMATORS = ("plain-mean", "median-of-means")

    def __init__(self, sample_count, sampler, estimator="plain-mean", blocks=16):
        if sample_count < 1:
            raise ValueError("sample_count must be positive")
        if estimator not in self.ESTIMATORS:
            raise ValueError(f"unknown estimator {estimator!r}")
        if estimator == "median-of-means" and not 1 <= blocks <= sample_count:
            raise ValueError("blocks must lie in [1, sample_count]")
        self.sample_count = int(sample_count)
        self.sampler = sampler
        self.estimator = estimator
        self.blocks = int(blocks)


class TransformOp:
    """Description of an integral transform between Grassmannians.

    kind "cosine" or "sine": f on Gr(source_dim) -> Tf on Gr(target_dim),
    averaging f against |cos| resp. |sin| of the subspace pair.  kind
    "radon": average of f over source subspaces containing the target
    point, which requires target_dim < source_dim.
    """

    KINDS = ("cosine", "sine", "radon")

    def __init__(self, kind, n, source_dim, target_dim):
        if kind not in self.KINDS:
            raise ValueError(f"unknown transform kind {kind!r}")
        n, i, j = int(n), int(source_dim), int(target_dim)
        if not (1 <= i <= n - 1 and 1 <= j <= n - 1):
            raise ValueError("subspace dimensions must lie in [1, n-1]")
        if kind == "radon" and not j < i:
            raise ValueError("radon requires target_dim < source_dim")
        self.kind = kind
        self.n = n
        self.source_dim = i
        self.target_dim = j

    def __repr__(self):
        return (f"TransformOp({self.kind!r}, n={self.n}, "
                f"source_dim={self.source_dim}, target_dim={self.target_dim})")
