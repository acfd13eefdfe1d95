"""Linear subspaces of R^n, Haar sampling, and principal angles.

Subspaces are represented by orthonormal frames (columns).  The Grassmannian
Gr(k, n) carries its rotation-invariant probability measure; `haar_subspace`
and `haar_rotation` sample from it via sign-normalized QR of Gaussian
matrices.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "Subspace",
    "Rotation",
    "make_subspace",
    "haar_subspace",
    "haar_rotation",
    "complement",
    "act",
    "principal_angles",
    "cos_angle",
    "sin_angle",
    "haar_frames",
    "haar_rotations",
    "complement_frames",
    "FRAME_TOL",
    "SPAN_TOL",
]

# Orthonormality of stored frames; subspace equality via projector distance.
FRAME_TOL = 1e-10
SPAN_TOL = 1e-8


def _fix_qr_signs(q, r):
    """Make the QR factorization canonical: diag(R) >= 0."""
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    return q * d[..., None, :]


class Subspace:
    """A k-dimensional linear subspace of R^n.

    Attributes
    ----------
    frame : ndarray, shape (n, k)
        Orthonormal basis, columns spanning the subspace.
    """

    def __init__(self, frame):
        frame = np.asarray(frame, dtype=float)
        if frame.ndim != 2:
            raise ValueError("frame must be a 2-d array")
        n, k = frame.shape
        if k > n:
            raise ValueError("subspace dimension exceeds ambient dimension")
        if k > 0:
            gram = frame.T @ frame
            if np.max(np.abs(gram - np.eye(k))) > 1e-8:
                raise ValueError("frame columns are not orthonormal")
        self.frame = frame

    @property
    def ambient_dim(self):
        return self.frame.shape[0]

    @property
    def dim(self):
        return self.frame.shape[1]

    def projector(self):
        """Orthogonal projection matrix onto the subspace, shape (n, n)."""
        return self.frame @ self.frame.T

    def same_span(self, other, tol=SPAN_TOL):
        """Equality as subspaces: Frobenius distance of projectors < tol."""
        if self.ambient_dim != other.ambient_dim:
            return False
        return np.linalg.norm(self.projector() - other.projector()) < tol

    def __repr__(self):
        return f"Subspace(n={self.ambient_dim}, k={self.dim})"


class Rotation:
    """An element of SO(n)."""

    def __init__(self, matrix):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("rotation matrix must be square")
        n = matrix.shape[0]
        if np.max(np.abs(matrix.T @ matrix - np.eye(n))) > 1e-8:
            raise ValueError("matrix is not orthogonal")
        if np.linalg.det(matrix) < 0:
            raise ValueError("matrix has determinant -1, not a rotation")
        self.matrix = matrix

    @property
    def ambient_dim(self):
        return self.matrix.shape[0]

    def inverse(self):
        return Rotation(self.matrix.T)

    def __repr__(self):
        return f"Rotation(n={self.ambient_dim})"


def make_subspace(vectors):
    """Subspace spanned by the given vectors.

    Parameters
    ----------
    vectors : array_like, shape (n, k)
        Spanning vectors as columns.  Must have full column rank.

    Returns
    -------
    Subspace

    Raises
    ------
    ValueError
        If the vectors are linearly dependent ("degenerate span").
    """
    a = np.asarray(vectors, dtype=float)
    if a.ndim != 2:
        raise ValueError("vectors must form a 2-d array")
    n, k = a.shape
    if k == 0:
        return Subspace(np.zeros((n, 0)))
    if np.linalg.matrix_rank(a) < k:
        raise ValueError("degenerate span")
    q, r = np.linalg.qr(a)
    return Subspace(_fix_qr_signs(q, r))


def haar_frames(n, k, count, rng):
    """Stack of `count` Haar-random orthonormal (n, k) frames."""
    if k == 0:
        return np.zeros((count, n, 0))
    g = rng.standard_normal((count, n, k))
    q, r = np.linalg.qr(g)
    return _fix_qr_signs(q, r)


def haar_rotations(n, count, rng):
    """Stack of `count` Haar-random SO(n) matrices."""
    g = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(g)
    q = _fix_qr_signs(q, r)
    # QR of a Gaussian matrix is Haar on O(n); flip one column where det < 0.
    neg = np.linalg.det(q) < 0
    q[neg, :, -1] *= -1.0
    return q


def haar_subspace(n, k, sampler):
    """Haar-random element of Gr(k, n).

    Parameters
    ----------
    n, k : int
        Ambient dimension and subspace dimension, 0 <= k <= n.
    sampler : SeededSampler
        Stream source; one counter is consumed.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    return Subspace(haar_frames(n, k, 1, sampler.next_rng())[0])


def haar_rotation(n, sampler):
    """Haar-random element of SO(n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    return Rotation(haar_rotations(n, 1, sampler.next_rng())[0])


def complement_frames(frames):
    """Orthogonal-complement frames for a stack of (n, k) frames."""
    count, n, k = frames.shape
    if k == 0:
        return np.broadcast_to(np.eye(n), (count, n, n)).copy()
    if k == n:
        return np.zeros((count, n, 0))
    q, _ = np.linalg.qr(frames, mode="complete")
    return q[:, :, k:]


def complement(e):
    """Orthogonal complement subspace."""
    return Subspace(complement_frames(e.frame[None])[0])


def act(g, e):
    """Image of the subspace under the rotation."""
    if g.ambient_dim != e.ambient_dim:
        raise ValueError("ambient dimensions differ")
    return Subspace(g.matrix @ e.frame)


def principal_angles(e, f):
    """Principal angles between two subspaces.

    Parameters
    ----------
    e, f : Subspace
        Subspaces of the same R^n.

    Returns
    -------
    ndarray, shape (min(dim e, dim f),)
        Angles in [0, pi/2], non-decreasing.

    Notes
    -----
    Computed as arccos of the singular values of frame(e)^T frame(f),
    clamped to [0, 1] to absorb roundoff.
    """
    if e.ambient_dim != f.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if min(e.dim, f.dim) == 0:
        return np.zeros(0)
    s = np.linalg.svd(e.frame.T @ f.frame, compute_uv=False)
    s = np.clip(s, 0.0, 1.0)
    return np.sort(np.arccos(s))


def cos_angle(e, f):
    """|cos(e, f)|: the volume-contraction factor of projecting e onto f.

    Equals the product of cosines of the principal angles when
    dim e <= dim f, and |cos(complement(e), complement(f))| otherwise.
    For a random parallelotope A inside e, vol(pr_f A) = |cos(e, f)| vol(A).
    Conventions: any subspace of dimension 0 gives 1.
    """
    if e.ambient_dim != f.ambient_dim:
        raise ValueError("ambient dimensions differ")
    if e.dim > f.dim:
        e, f = complement(e), complement(f)
    if e.dim == 0:
        return 1.0
    s = np.linalg.svd(e.frame.T @ f.frame, compute_uv=False)
    s = np.clip(s, 0.0, 1.0)
    return float(np.prod(s))


def sin_angle(e, f):
    """|sin(e, f)| = |cos(e, complement(f))|."""
    return cos_angle(e, complement(f))
