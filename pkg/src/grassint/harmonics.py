"""Isotypic analysis of functions on Grassmannians.

Group-average projections onto highest-weight components, Schur scalars of
the intertwining transforms, and the membership predicate for components
surviving the cosine transform.
"""
from __future__ import annotations

import numpy as np

from .casimir import isotypic_component, minimal_degree
from .characters import character_value, rotation_angles
from .functions import GrassmannFunction, PolynomialObservable
from .subspaces import Subspace, haar_frames, haar_rotations
from .transforms import CHUNK, apply_transform
from .weights import grassmannian_support, in_cosine_image, weyl_dimension

__all__ = [
    "range_predicate",
    "projection_kernel",
    "ProjectedFunction",
    "isotypic_project",
    "SchurScalar",
    "schur_scalar",
]

EVAL_BLOCK = 1 << 21


def range_predicate(n, i, j, w):
    """Whether the weight-w component survives the transform between
    Gr_{i,n} and Gr_{j,n}: the weight must occur in both function spaces
    and its second entry must not exceed 2 in absolute value."""
    return in_cosine_image(n, i, j, w)


def projection_kernel(w, matrix, tol=None):
    """Value at one rotation of the averaging kernel projecting onto w.

    For n >= 3 this is dim(w) times the character.  SO(2) is abelian with
    one-dimensional complex classes; the real pair kernel 2 cos(m theta)
    projects onto the span of the +-m pair, which is what a real function
    library can resolve.
    """
    if w.n == 2:
        m = w.entries[0]
        if m == 0:
            return 1.0
        theta = rotation_angles(matrix)[0]
        return 2.0 * np.cos(m * theta)
    kwargs = {} if tol is None else {"tol": tol}
    return weyl_dimension(w) * character_value(w, matrix, **kwargs)


class ProjectedFunction(GrassmannFunction):
    """Monte Carlo isotypic component, carrying its fixed group sample.

    Evaluation averages kernel(g) * f(g^{-1} x) over the stored rotations,
    so the object is a deterministic function once built and the projection
    is exactly linear in f under shared rotation sets.
    """

    def __init__(self, weight, source, rotations, kernel_values):
        self.weight = weight
        self.source = source
        self.rotations = rotations
        self.kernel_values = kernel_values
        self._inv = np.swapaxes(rotations, -1, -2)
        super().__init__(source.n, source.k,
                         lambda e: self._batch(e.frame[None])[0],
                         batch_func=self._batch)

    def sample_values(self, frames):
        """Per-rotation integrand values, shape (len(frames), samples)."""
        frames = np.asarray(frames, dtype=float)
        m = frames.shape[0]
        s = self._inv.shape[0]
        step = max(1, EVAL_BLOCK // max(s, 1))
        out = np.empty((m, s))
        for lo in range(0, m, step):
            part = frames[lo:lo + step]
            moved = np.einsum("sab,pbk->psak", self._inv, part)
            flat = moved.reshape(-1, self.n, self.k)
            out[lo:lo + step] = self.source.eval_frames(flat).reshape(len(part), s)
        return out * self.kernel_values[None, :]

    def _batch(self, frames):
        return self.sample_values(frames).mean(axis=1)

    def value_and_stderr(self, e):
        frame = e.frame if isinstance(e, Subspace) else np.asarray(e, dtype=float)
        vals = self.sample_values(frame[None])[0]
        s = len(vals)
        return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(s))


def isotypic_project(w, f, gq):
    """Weight-w component of f by averaging over sampled rotations.

    Returns x -> dim(w) * mean over g of character(g) f(g^{-1} x), with
    degenerate rotations (too close to an eigen-angle collision for stable
    character evaluation) dropped and replaced from later draws.  Components
    of weights absent from the Grassmannian come out as pure noise around
    zero, which is the correct limit.
    """
    if w.n != f.n:
        raise ValueError("weight and function have different ambient dims")
    rotations, kernels = _draw_projection_sample(f.n, w, gq)
    return ProjectedFunction(w, f, rotations, kernels)


def _draw_projection_sample(n, w, gq):
    """Haar rotations with their kernel values, degenerate draws skipped."""
    target = gq.sample_count
    sampler = gq.sampler
    rotations = []
    kernels = []
    while len(rotations) < target:
        base = sampler.take(1)
        count = min(CHUNK, target - len(rotations) + 64)
        batch = haar_rotations(n, count, sampler.rng_at(base))
        for g in batch:
            if len(rotations) == target:
                break
            try:
                kernels.append(projection_kernel(w, g))
            except ValueError:
                continue
            rotations.append(g)
    return np.stack(rotations), np.array(kernels)


class SchurScalar(tuple):
    """(scalar, collinearity) pair with diagnostic attributes.

    Unpacks as a 2-tuple; also carries stderr of the scalar and a flag that
    is False when the weight cannot occur on the target Grassmannian (the
    scalar is then 0 by fiat).
    """

    def __new__(cls, scalar, collinearity, stderr=0.0, target_admissible=True):
        self = super().__new__(cls, (scalar, collinearity))
        self.scalar = scalar
        self.collinearity = collinearity
        self.stderr = stderr
        self.target_admissible = target_admissible
        return self


def _component_of_random_poly(n, k, w, rng):
    """Exact weight-w part of a random polynomial of the minimal degree."""
    degree = minimal_degree(w)
    f = PolynomialObservable.random_homogeneous(n, k, degree, 6, rng)
    comp = isotypic_component(f, w)
    if w.is_zero():
        comp = comp.plus(PolynomialObservable.constant(n, k, 1.0))
    return comp, f


def schur_scalar(op, w, gq, q, probes=32):
    """Scalar by which the transform acts on the weight-w component.

    The weight-w input is the exact isotypic component of a random
    polynomial (Casimir filter), so the only noise in the fit is transform
    quadrature.  For matching source and target dimensions this fits
    T(P_w f) against P_w f over Haar probe points and reports the
    least-squares coefficient and the cosine of the angle between the two
    probe vectors.  When the dimensions differ a pointwise fit is not
    meaningful, so the scalar is the probe-norm ratio of the target-side
    weight-w component of T(P_w f) to the source norm, and collinearity is
    the fraction of the output norm lying in that component; the target-
    side projection averages over the gq group sample.
    """
    n, i, j = op.n, op.source_dim, op.target_dim
    if w.n != n:
        raise ValueError("weight ambient dim does not match the operator")
    if not grassmannian_support(w, i):
        raise ValueError("weight absent from source")
    if not grassmannian_support(w, j):
        return SchurScalar(0.0, 0.0, target_admissible=False)
    base = q.sampler.take(2)
    f_rng = q.sampler.rng_at(base)
    probe_rng = q.sampler.rng_at(base + 1)
    for _ in range(5):
        pf, f = _component_of_random_poly(n, i, w, f_rng)
        probe_frames = haar_frames(n, j, probes, probe_rng)
        src_frames = probe_frames if i == j else haar_frames(n, i, probes, f_rng)
        x = pf.eval_frames(src_frames)
        scale = np.sqrt(np.mean(f.eval_frames(src_frames) ** 2)) + 1.0
        if np.sqrt(np.mean(x ** 2)) <= 1e-6 * scale:
            continue
        if i == j:
            y = np.empty(probes)
            se_y = np.empty(probes)
            for p, fr in enumerate(probe_frames):
                y[p], se_y[p] = apply_transform(op, pf, Subspace(fr), q)
            sxx = float(x @ x)
            sxy = float(x @ y)
            c = sxy / sxx
            collinearity = abs(sxy) / np.sqrt(sxx * float(y @ y))
            var = np.sum((x * se_y) ** 2)
            return SchurScalar(c, float(collinearity), float(np.sqrt(var) / sxx))
        return _cross_dimension_scalar(op, w, pf, probe_frames, gq, q)
    raise ValueError("all projections negligible")


def _cross_dimension_scalar(op, w, pf, probe_frames, gq, q):
    """Norm-ratio Schur scalar for source/target of different dimensions."""
    from .transforms import cos_kernel_frames, sin_kernel_frames

    n, i, j = op.n, op.source_dim, op.target_dim
    probes = len(probe_frames)
    base = q.sampler.take(2)
    f_frames = haar_frames(n, i, q.sample_count, q.sampler.rng_at(base))
    pf_vals = pf.eval_frames(f_frames)

    kern = cos_kernel_frames if op.kind != "sine" else sin_kernel_frames
    if op.kind == "radon":
        raise ValueError("norm-ratio scalar is defined for angle kernels only")

    rotations, kernels = _draw_projection_sample(n, w, gq)
    inv = np.swapaxes(rotations, -1, -2)

    u = np.empty(probes)
    v = np.empty(probes)
    for p, fr in enumerate(probe_frames):
        ku = kern(fr, f_frames)
        u[p] = float(np.mean(ku * pf_vals))
        moved = np.einsum("sab,bk->sak", inv, fr)
        inner = np.empty(len(rotations))
        for s_idx in range(len(rotations)):
            ks = kern(moved[s_idx], f_frames)
            inner[s_idx] = float(np.mean(ks * pf_vals))
        v[p] = float(np.mean(kernels * inner))

    src_probe = haar_frames(n, i, probes, q.sampler.rng_at(base + 1))
    src_norm = float(np.sqrt(np.mean(pf.eval_frames(src_probe) ** 2)))
    v_norm = float(np.sqrt(np.mean(v ** 2)))
    u_norm = float(np.sqrt(np.mean(u ** 2)))
    scalar = v_norm / src_norm if src_norm > 0 else 0.0
    collinearity = v_norm / u_norm if u_norm > 0 else 0.0
    return SchurScalar(scalar, collinearity)
