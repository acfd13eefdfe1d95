"""Monte Carlo evaluation of cosine, sine, and Radon transforms.

All estimators draw their samples in fixed-size chunks whose streams are
derived by counter splitting, so results are reproducible and independent of
chunk execution order.  (Tf)(E) for kind "cosine" is the Haar average of
|cos(E, F)| f(F) over source subspaces F; "sine" replaces the kernel by
|sin(E, F)|; "radon" averages f over the fiber of source subspaces containing
the target subspace.
"""
from __future__ import annotations

import numpy as np

from .functions import GrassmannFunction, QuadratureSpec, TransformOp
from .subspaces import (Subspace, complement_frames, haar_frames,
                        haar_subspace)

__all__ = [
    "cos_kernel_frames",
    "sin_kernel_frames",
    "apply_transform",
    "cosine_transform",
    "sine_transform",
    "radon_transform",
    "sample_containing",
    "containing_frames",
    "rotate_function",
    "estimate_composition_constant",
    "equivariance_residual",
]

CHUNK = 4096


def _batch_det_psd(m):
    """Determinants of a stack of small PSD matrices, clipped to [0, 1]."""
    k = m.shape[-1]
    if k == 0:
        return np.ones(m.shape[0])
    if k == 1:
        d = m[:, 0, 0]
    elif k == 2:
        d = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    else:
        d = np.linalg.det(m)
    return np.clip(d, 0.0, 1.0)


def cos_kernel_frames(a_frame, b_frames):
    """|cos(A, B_s)| for one frame (n, a) against a stack (m, n, b).

    The product of principal-angle cosines equals sqrt det(G G^T) for the
    cross-Gram G = A^T B when a <= b; larger A falls back to complements.
    """
    a_frame = np.asarray(a_frame, dtype=float)
    b_frames = np.asarray(b_frames, dtype=float)
    a = a_frame.shape[1]
    b = b_frames.shape[2]
    if a > b:
        a_frame = complement_frames(a_frame[None])[0]
        b_frames = complement_frames(b_frames)
    if a_frame.shape[1] == 0:
        return np.ones(b_frames.shape[0])
    g = np.einsum("na,mnb->mab", a_frame, b_frames)
    return np.sqrt(_batch_det_psd(g @ np.swapaxes(g, 1, 2)))


def sin_kernel_frames(a_frame, b_frames):
    """|sin(A, B_s)| = |cos(A, complement(B_s))| for a stack of frames."""
    return cos_kernel_frames(a_frame, complement_frames(np.asarray(b_frames, dtype=float)))


def _chunk_sizes(total):
    sizes = [CHUNK] * (total // CHUNK)
    if total % CHUNK:
        sizes.append(total % CHUNK)
    return sizes


def _estimate(values, q):
    """(value, stderr) under the quadrature's estimator."""
    n = len(values)
    if q.estimator == "median-of-means":
        blocks = np.array_split(values, q.blocks)
        means = np.array([b.mean() for b in blocks])
        value = float(np.median(means))
        # asymptotic efficiency factor of the median of iid block means
        stderr = float(1.2533 * means.std(ddof=1) / np.sqrt(len(means))) if len(means) > 1 else 0.0
        return value, stderr
    value = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return value, stderr


def _transform_samples(op, f, e, q):
    """Per-sample kernel-weighted values of f for a cosine/sine transform."""
    base = q.sampler.take(len(_chunk_sizes(q.sample_count)))
    out = []
    for c, size in enumerate(_chunk_sizes(q.sample_count)):
        rng = q.sampler.rng_at(base + c)
        frames = haar_frames(op.n, op.source_dim, size, rng)
        if op.kind == "cosine":
            w = cos_kernel_frames(e.frame, frames)
        else:
            w = sin_kernel_frames(e.frame, frames)
        out.append(w * f.eval_frames(frames))
    return np.concatenate(out)


def containing_frames(h_frame, i, count, rng):
    """Frames of Haar-random i-dim subspaces containing span(h_frame)."""
    n, j = h_frame.shape
    if not j <= i <= n:
        raise ValueError("need dim(h) <= i <= n")
    comp = complement_frames(h_frame[None])[0]          # (n, n-j)
    u = haar_frames(n - j, i - j, count, rng)           # fiber directions
    tail = np.einsum("nc,mcd->mnd", comp, u)
    head = np.broadcast_to(h_frame, (count, n, j))
    return np.concatenate([head, tail], axis=2)


def sample_containing(h, i, sampler):
    """Haar-random i-dimensional subspace containing h."""
    return Subspace(containing_frames(h.frame, i, 1, sampler.next_rng())[0])


def _radon_samples(op, f, h, q):
    base = q.sampler.take(len(_chunk_sizes(q.sample_count)))
    out = []
    for c, size in enumerate(_chunk_sizes(q.sample_count)):
        rng = q.sampler.rng_at(base + c)
        frames = containing_frames(h.frame, op.source_dim, size, rng)
        out.append(f.eval_frames(frames))
    return np.concatenate(out)


def apply_transform(op, f, e, q):
    """Estimate (Tf)(e) for any transform kind.

    Parameters
    ----------
    op : TransformOp
    f : GrassmannFunction
        Must live on the op's source Grassmannian.
    e : Subspace
        Target evaluation point, dim = op.target_dim.
    q : QuadratureSpec

    Returns
    -------
    (value, stderr) : tuple of float
    """
    if (f.n, f.k) != (op.n, op.source_dim):
        raise ValueError("function domain does not match the transform source")
    if (e.ambient_dim, e.dim) != (op.n, op.target_dim):
        raise ValueError("evaluation point does not match the transform target")
    if op.kind == "radon":
        values = _radon_samples(op, f, e, q)
    else:
        values = _transform_samples(op, f, e, q)
    return _estimate(values, q)


def cosine_transform(op, f, e, q):
    if op.kind != "cosine":
        raise ValueError("op is not a cosine transform")
    return apply_transform(op, f, e, q)


def sine_transform(op, f, e, q):
    if op.kind != "sine":
        raise ValueError("op is not a sine transform")
    return apply_transform(op, f, e, q)


def radon_transform(op, f, e, q):
    if op.kind != "radon":
        raise ValueError("op is not a radon transform")
    return apply_transform(op, f, e, q)


def rotate_function(g, f):
    """The function x -> f(g^{-1} x)."""
    ginv = g.matrix.T

    def batch(frames):
        return f.eval_frames(np.einsum("ij,mjk->mik", ginv, frames))

    return GrassmannFunction(f.n, f.k, lambda e: batch(e.frame[None])[0], batch)


def estimate_composition_constant(n, i, j, q, trials=10, inner_samples=64,
                                  return_details=False):
    """Proportionality constant between T_{j,i} and T_{j,j} o R_{j,i}.

    For `trials` random positive observables f on Gr(i) and Haar probes E in
    Gr(j), estimates the ratio (T_{j,i} f)(E) / (T_{j,j} R_{j,i} f)(E) with
    both sides sharing outer sample streams.  Returns (constant, spread)
    where spread is the relative max-min range over trials; the identity
    predicts a constant independent of f.  With return_details, a third
    element lists per-trial dicts (lhs, rhs, lhs_se, rhs_se) so callers can
    check the pointwise residuals lhs - constant * rhs against the noise.
    """
    from .functions import PolynomialObservable

    if not j < i:
        raise ValueError("composition requires target_dim < source_dim")
    ratios = []
    details = []
    for _ in range(trials):
        rng = q.sampler.next_rng()
        p = PolynomialObservable.random_homogeneous(n, i, 2, 6, rng)
        bound = p.coeff_bound()
        if bound > 0:
            p = p.scaled(0.5 / bound)
        f = p.plus(PolynomialObservable.constant(n, i, 1.0))
        e = haar_subspace(n, j, q.sampler)

        lhs_op = TransformOp("cosine", n, i, j)
        lhs, lhs_se = apply_transform(lhs_op, f, e, q)

        # T_{j,j} of the fiber average, with the fiber mean estimated by a
        # small inner stream per outer sample; unbiased by linearity.
        sizes = _chunk_sizes(q.sample_count)
        base = q.sampler.take(len(sizes))
        vals = []
        for c, size in enumerate(sizes):
            rng_c = q.sampler.rng_at(base + c)
            h_frames = haar_frames(n, j, size, rng_c)
            w = cos_kernel_frames(e.frame, h_frames)
            comp = complement_frames(h_frames)                      # (size, n, n-j)
            u = haar_frames(n - j, i - j, size * inner_samples, rng_c)
            u = u.reshape(size, inner_samples, n - j, i - j)
            tail = np.einsum("snc,sicd->sind", comp, u)
            head = np.broadcast_to(h_frames[:, None], (size, inner_samples, n, j))
            fibers = np.concatenate([head, tail], axis=3).reshape(size * inner_samples, n, i)
            inner = f.eval_frames(fibers).reshape(size, inner_samples).mean(axis=1)
            vals.append(w * inner)
        rhs, rhs_se = _estimate(np.concatenate(vals), q)
        ratios.append(lhs / rhs)
        details.append({"lhs": lhs, "rhs": rhs,
                        "lhs_se": lhs_se, "rhs_se": rhs_se})
    ratios = np.array(ratios)
    constant = float(ratios.mean())
    spread = float((ratios.max() - ratios.min()) / abs(constant)) if constant != 0 else np.inf
    if return_details:
        return constant, spread, details
    return constant, spread


def equivariance_residual(op, f, g, q, probes=8):
    """Max probe residual |T(g.f)(E) - (Tf)(g^{-1} E)| with shared streams.

    Returns (residual, stderr) where stderr combines the two quadrature
    errors; for g = identity the residual is pure roundoff.
    """
    probe_sampler = q.sampler.fork()
    base = q.sampler.take(probes)
    ginv_t = g.matrix.T
    gf = rotate_function(g, f)
    worst = 0.0
    err = 0.0
    for p in range(probes):
        e = haar_subspace(op.n, op.target_dim, probe_sampler)
        e_back = Subspace(ginv_t @ e.frame)
        # identical (seed, counter) for both sides of the probe
        shared_seed = int(q.sampler.rng_at(base + p).integers(0, 2**63))
        qa = QuadratureSpec(q.sample_count, type(q.sampler)(shared_seed, 0), q.estimator, q.blocks)
        qb = QuadratureSpec(q.sample_count, type(q.sampler)(shared_seed, 0), q.estimator, q.blocks)
        va, sa = apply_transform(op, gf, e, qa)
        vb, sb = apply_transform(op, f, e_back, qb)
        if abs(va - vb) > worst:
            worst = abs(va - vb)
            err = float(np.hypot(sa, sb))
    return worst, err
