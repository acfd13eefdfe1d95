"""Even translation-invariant valuations from projected polytope volumes.

A weight function f on Gr(n-i, n) induces the i-homogeneous valuation
phi(K) = Haar mean over F of f(F) * vol_i of the shadow of K in the
quotient along F, with the quotient modeled isometrically by the orthogonal
complement.  Restricting phi to bodies inside a fixed i-dimensional
subspace and dividing by their volume gives a function on Gr(i, n) again
(the section of the restriction line bundle), and that function is exactly
the cosine transform of f.  `theorem13_residual` witnesses the identity
numerically.

Shadow volumes are exact convex-hull computations for target dimension up
to three and hit-or-miss Monte Carlo above; every Valuation freezes its
quadrature stream at construction, so comparisons between evaluations use
common random subspaces and identities that hold per sample survive with
only roundoff error.
"""
from __future__ import annotations

import json

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, QhullError

from .functions import QuadratureSpec
from .sampling import SeededSampler
from .subspaces import Subspace, complement_frames, cos_angle, haar_frames

__all__ = [
    "Polytope",
    "Valuation",
    "box",
    "cube_in_subspace",
    "hull_volume",
    "projected_volume",
    "projected_volume_mc",
    "projection_valuation",
    "make_projection_valuation",
    "klain_section",
    "check_axioms",
    "theorem13_residual",
]

HULL_EXACT_DIM = 3
MC_VOLUME_SAMPLES = 200000


class Polytope:
    """Convex polytope given by its vertex list (duplicates dropped)."""

    def __init__(self, vertices):
        pts = np.atleast_2d(np.asarray(vertices, dtype=float))
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("need a nonempty list of vertices")
        seen = {}
        for row in pts:
            seen.setdefault(row.tobytes(), row)
        self.vertices = np.array(list(seen.values()))
        self.ambient_dim = self.vertices.shape[1]

    def translate(self, x):
        return Polytope(self.vertices + np.asarray(x, dtype=float))

    def scale(self, t):
        return Polytope(self.vertices * float(t))

    def negate(self):
        return Polytope(-self.vertices)

    def to_json(self):
        return json.dumps({"vertices": self.vertices.tolist()})

    @classmethod
    def from_json(cls, text):
        return cls(json.loads(text)["vertices"])

    def __repr__(self):
        return f"Polytope({self.vertices.shape[0]} vertices in R^{self.ambient_dim})"


def box(lo, hi):
    """Axis-aligned box as a Polytope."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = lo.shape[0]
    corners = np.array(np.meshgrid(*[[lo[a], hi[a]] for a in range(n)],
                                   indexing="ij")).reshape(n, -1).T
    return Polytope(corners)


def cube_in_subspace(e, side=1.0):
    """A cube of the given side spanning the subspace, as an ambient polytope."""
    k = e.dim
    corners = np.array(np.meshgrid(*[[0.0, side]] * k,
                                   indexing="ij")).reshape(k, -1).T
    return Polytope(corners @ e.frame.T)


def hull_volume(points):
    """Volume of the convex hull of a point cloud in its own dimension.

    Degenerate clouds (rank below the ambient dimension) have volume zero.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    d = pts.shape[1]
    if d == 0:
        return 0.0
    if d == 1:
        return float(pts.max() - pts.min())
    if pts.shape[0] <= d:
        return 0.0
    try:
        return float(ConvexHull(pts).volume)
    except QhullError:
        return 0.0


def _quotient_basis(f):
    return complement_frames(f.frame[None])[0]


def projected_volume(k_body, f, mc_samples=MC_VOLUME_SAMPLES, rng=None):
    """Volume of the shadow of the body in the quotient along f.

    Exact for quotient dimension up to three; hit-or-miss Monte Carlo above
    (`projected_volume_mc` exposes the error estimate).
    """
    i = k_body.ambient_dim - f.dim
    if i < 0:
        raise ValueError("subspace dimension exceeds the ambient dimension")
    if i == 0:
        return 0.0 if k_body.vertices.shape[0] == 0 else 1.0
    coords = k_body.vertices @ _quotient_basis(f)
    if i <= HULL_EXACT_DIM:
        return hull_volume(coords)
    return _hit_or_miss(coords, mc_samples, rng)[0]


def projected_volume_mc(k_body, f, mc_samples=MC_VOLUME_SAMPLES, rng=None):
    """Monte Carlo shadow volume with its standard error."""
    coords = k_body.vertices @ _quotient_basis(f)
    return _hit_or_miss(coords, mc_samples, rng)


def _hit_or_miss(coords, samples, rng):
    if rng is None:
        rng = np.random.default_rng(0)
    d = coords.shape[1]
    try:
        tri = Delaunay(coords)
    except QhullError:
        return 0.0, 0.0
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    boxvol = float(np.prod(hi - lo))
    if boxvol == 0.0:
        return 0.0, 0.0
    pts = rng.uniform(lo, hi, size=(samples, d))
    inside = tri.find_simplex(pts) >= 0
    p = inside.mean()
    vol = boxvol * p
    stderr = boxvol * np.sqrt(p * (1.0 - p) / samples)
    return float(vol), float(stderr)


class Valuation:
    """Finitely additive functional on polytopes with a declared degree.

    `evaluate` returns (value, stderr); calling the object returns just the
    value.  Implementations based on quadrature must freeze their streams
    so that repeated evaluations share samples.
    """

    def __init__(self, evaluate, degree, ambient_dim=None, label="valuation"):
        self._evaluate = evaluate
        self.degree = degree
        self.ambient_dim = ambient_dim
        self.label = label

    def evaluate(self, k_body):
        out = self._evaluate(k_body)
        if isinstance(out, tuple):
            return float(out[0]), float(out[1])
        return float(out), 0.0

    def __call__(self, k_body):
        return self.evaluate(k_body)[0]

    def __repr__(self):
        return f"Valuation({self.label}, degree {self.degree})"


def make_projection_valuation(f, q):
    """The valuation K -> Haar mean of f(F) * shadow volume of K along F.

    f lives on Gr(n-i, n); the result is i-homogeneous.  The subspace batch
    is drawn once from the quadrature seed and reused for every body, so
    identities that hold shadow-by-shadow are exact up to roundoff.
    """
    n = f.n
    i = n - f.k
    count = q.sample_count
    frames = haar_frames(n, f.k, count, q.sampler.clone().next_rng())
    fvals = f.eval_frames(frames)
    bases = complement_frames(frames)

    def evaluate(k_body):
        if k_body.ambient_dim != n:
            raise ValueError("polytope ambient dimension mismatch")
        vols = np.empty(count)
        for m in range(count):
            coords = k_body.vertices @ bases[m]
            if i <= HULL_EXACT_DIM:
                vols[m] = hull_volume(coords)
            else:
                vols[m] = _hit_or_miss(coords, MC_VOLUME_SAMPLES // 100,
                                       np.random.default_rng(m))[0]
        g = fvals * vols
        return g.mean(), g.std() / np.sqrt(count)

    return Valuation(evaluate, i, ambient_dim=n,
                     label=f"projection[{f.k}->{i}]")


def projection_valuation(f, k_body, q):
    """Value and stderr of the projection valuation of f on one body."""
    return make_projection_valuation(f, q).evaluate(k_body)


def klain_section(phi, e, probe_body=None):
    """Restriction density of an i-homogeneous valuation on one subspace.

    Evaluates phi on a probe body inside `e` and divides by the probe's own
    volume; the result is independent of the probe for genuine valuations
    of matching degree.
    """
    if e.dim != phi.degree:
        raise ValueError("subspace dimension must equal the valuation degree")
    if probe_body is None:
        probe_body = cube_in_subspace(e)
    coords = probe_body.vertices @ e.frame
    back = coords @ e.frame.T
    if not np.allclose(back, probe_body.vertices, atol=1e-9):
        raise ValueError("probe body does not lie in the subspace")
    vol = hull_volume(coords) if e.dim <= HULL_EXACT_DIM \
        else _hit_or_miss(coords, MC_VOLUME_SAMPLES, None)[0]
    if vol <= 0.0:
        raise ValueError("zero-volume probe")
    return phi(probe_body) / vol


def _random_box_pair(n, rng):
    """Two boxes sharing a slab, with a box union and box intersection."""
    lo = rng.uniform(-1.0, 0.0, size=n)
    hi = lo + rng.uniform(0.5, 1.5, size=n)
    axis = int(rng.integers(0, n))
    c1 = rng.uniform(0.3, 0.45)
    c2 = rng.uniform(0.55, 0.7)
    cut1 = lo[axis] + c2 * (hi[axis] - lo[axis])
    cut2 = lo[axis] + c1 * (hi[axis] - lo[axis])
    hi1 = hi.copy()
    hi1[axis] = cut1
    lo2 = lo.copy()
    lo2[axis] = cut2
    k1 = box(lo, hi1)
    k2 = box(lo2, hi)
    union = box(lo, hi)
    cap = box(lo2, hi1)
    return k1, k2, union, cap


def check_axioms(phi, degree=None, sampler=None, trials=20, tol_exact=1e-9):
    """Additivity, evenness, translation invariance, and homogeneity.

    Returns a report dict; each entry carries the worst observed residual
    and a pass flag (residuals compared against 5x the combined stderr,
    floored at `tol_exact` for exact evaluations).
    """
    if degree is None:
        degree = phi.degree
    if sampler is None:
        sampler = SeededSampler(0)
    report = {}

    def margin(*errs):
        return max(5.0 * float(np.sqrt(sum(e * e for e in errs))), tol_exact)

    worst = 0.0
    ok = True
    for _ in range(trials):
        rng = sampler.next_rng()
        n = phi_ambient(phi, rng)
        k1, k2, union, cap = _random_box_pair(n, rng)
        v1, e1 = phi.evaluate(k1)
        v2, e2 = phi.evaluate(k2)
        vu, eu = phi.evaluate(union)
        vc, ec = phi.evaluate(cap)
        resid = abs(vu + vc - v1 - v2)
        worst = max(worst, resid)
        ok = ok and resid <= margin(e1, e2, eu, ec)
    report["additivity"] = {"worst": worst, "ok": ok}

    worst = 0.0
    ok = True
    for _ in range(trials):
        rng = sampler.next_rng()
        n = phi_ambient(phi, rng)
        k1 = _random_box_pair(n, rng)[0]
        v, e = phi.evaluate(k1)
        vn, en = phi.evaluate(k1.negate())
        resid = abs(v - vn)
        worst = max(worst, resid)
        ok = ok and resid <= margin(e, en)
    report["evenness"] = {"worst": worst, "ok": ok}

    worst = 0.0
    ok = True
    for _ in range(trials):
        rng = sampler.next_rng()
        n = phi_ambient(phi, rng)
        k1 = _random_box_pair(n, rng)[0]
        shift = rng.uniform(-2.0, 2.0, size=n)
        v, e = phi.evaluate(k1)
        vt, et = phi.evaluate(k1.translate(shift))
        resid = abs(v - vt)
        worst = max(worst, resid)
        ok = ok and resid <= margin(e, et)
    report["translation"] = {"worst": worst, "ok": ok}

    slopes = []
    ok = True
    for _ in range(max(trials // 4, 1)):
        rng = sampler.next_rng()
        n = phi_ambient(phi, rng)
        k1 = _random_box_pair(n, rng)[0]
        ts = np.array([0.5, 0.8, 1.0, 1.25, 2.0])
        vals = np.array([phi(k1.scale(t)) for t in ts])
        if np.any(vals <= 0):
            ok = False
            continue
        slope = np.polyfit(np.log(ts), np.log(vals), 1)[0]
        slopes.append(slope)
        ok = ok and abs(slope - degree) <= 0.01
    report["homogeneity"] = {"slopes": slopes, "ok": ok}
    report["ok"] = all(entry["ok"] for entry in report.values()
                       if isinstance(entry, dict))
    return report


def phi_ambient(phi, rng):
    """Ambient dimension a valuation acts on."""
    if getattr(phi, "ambient_dim", None) is not None:
        return phi.ambient_dim
    raise ValueError("valuation does not declare an ambient dimension")


def theorem13_residual(f, q, probes=10):
    """Worst probe gap between the restriction density and the transform.

    For each Haar probe subspace E of dimension i = n - f.k, compares the
    valuation density of a unit cube in E against the mean of
    f(F) |cos(E, complement of F)| over the same frozen subspace batch.
    Returns (max residual, max stderr of the transform side).
    """
    n = f.n
    i = n - f.k
    count = q.sample_count
    sampler = q.sampler.clone()
    frames = haar_frames(n, f.k, count, sampler.next_rng())
    fvals = f.eval_frames(frames)
    bases = complement_frames(frames)
    probe_rng = sampler.next_rng()
    worst = 0.0
    err = 0.0
    for _ in range(probes):
        e = Subspace(haar_frames(n, i, 1, probe_rng)[0])
        cube = cube_in_subspace(e)
        vols = np.empty(count)
        coss = np.empty(count)
        for m in range(count):
            coords = cube.vertices @ bases[m]
            vols[m] = hull_volume(coords) if i <= HULL_EXACT_DIM else \
                _hit_or_miss(coords, MC_VOLUME_SAMPLES // 100,
                             np.random.default_rng(m))[0]
            coss[m] = cos_angle(e, Subspace(bases[m]))
        lhs = (fvals * vols).mean()
        rhs_samples = fvals * coss
        rhs = rhs_samples.mean()
        worst = max(worst, abs(lhs - rhs))
        err = max(err, rhs_samples.std() / np.sqrt(count))
    return worst, err
