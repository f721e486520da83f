"""Exact Euclidean primitives for finite point sets.

Point sets are ``(m, n)`` float arrays: ``m`` points in ``n`` dimensions.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.spatial.distance import pdist
from sklearn.base import BaseEstimator, OutlierMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from .exceptions import DomainError, UnsupportedDimensionError

MAX_MEB_DIM = 10
GEOM_TOL = 1e-9
ALG_TOL = 1e-12


def check_points(X):
    """Validate a point set and return it as a 2-D float64 array."""
    X = check_array(X, dtype=np.float64, ensure_2d=True, ensure_all_finite=True)
    return X


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(center)):
            raise DomainError("ball center must be finite")
        if not self.radius >= 0:
            raise DomainError(f"ball radius must be nonnegative, got {self.radius}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self):
        return self.center.shape[0]

    def contains(self, X, tol=GEOM_TOL):
        X = np.atleast_2d(X)
        return np.linalg.norm(X - self.center, axis=1) <= self.radius + tol


def diameter(X):
    """Largest pairwise Euclidean distance; 0 for a single point."""
    X = check_points(X)
    if X.shape[0] < 2:
        return 0.0
    return float(pdist(X).max())


def _circumball(S):
    # Smallest sphere through all rows of S with center in their affine hull.
    p0 = S[0]
    if S.shape[0] == 1:
        return p0.copy(), 0.0
    A = S[1:] - p0
    rhs = 0.5 * np.einsum("ij,ij->i", A, A)
    lam = np.linalg.lstsq(A @ A.T, rhs, rcond=ALG_TOL)[0]
    c = p0 + lam @ A
    return c, float(np.linalg.norm(S - c, axis=1).max())


def _outside(p, c, r):
    return c is None or np.linalg.norm(p - c) > r * (1.0 + ALG_TOL) + ALG_TOL


def _mtf(pts, end, support, dim):
    # Move-to-front Welzl: smallest ball of pts[:end] with `support` on its boundary.
    if support:
        c, r = _circumball(np.array(support))
    else:
        c, r = None, -1.0
    best = list(support)
    if len(support) == dim + 1:
        return c, r, best
    for i in range(end):
        p = pts[i]
        if _outside(p, c, r):
            c, r, best = _mtf(pts, i, support + [p], dim)
            pts.insert(0, pts.pop(i))
    return c, r, best


def _meb_with_support(X, max_iter=10_000):
    m, dim = X.shape
    c, r = X[0].copy(), 0.0
    support = [X[0]]
    for _ in range(max_iter):
        dist = np.linalg.norm(X - c, axis=1)
        j = int(np.argmax(dist))
        if dist[j] <= r * (1.0 + ALG_TOL) + ALG_TOL:
            break
        pts = [X[j]] + support
        c_new, r_new, sup = _mtf(pts, len(pts), [], dim)
        if r_new <= r:
            # rounding stalled the pivot; the current ball is already minimal to working precision
            break
        c, r, support = c_new, r_new, sup
    r = float(np.linalg.norm(X - c, axis=1).max())
    return Ball(c, r), np.array(support)


def min_enclosing_ball(X):
    """Exact smallest enclosing ball of a finite point set.

    Uses pivoting on top of move-to-front Welzl recursion: the ball of the
    current support set is grown by the farthest outside point until every
    point is contained. Supported for dimension up to 10.
    """
    return _meb_with_support(_check_meb_input(X))[0]


def _check_meb_input(X):
    X = check_points(X)
    if X.shape[1] > MAX_MEB_DIM:
        raise UnsupportedDimensionError(
            f"exact enclosing ball supports dimension <= {MAX_MEB_DIM}, got {X.shape[1]}")
    return X


def jung_radius(n):
    """Jung's constant sqrt(n / (2n + 2)): the enclosing radius of a diameter-1 set."""
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")
    return math.sqrt(n / (2.0 * n + 2.0))


@dataclass(frozen=True)
class JungReport:
    meb_radius: float
    jung_bound: float
    diameter: float
    ok: bool

    def to_dict(self):
        return {"meb_radius": self.meb_radius, "jung_bound": self.jung_bound,
                "diameter": self.diameter, "ok": self.ok}


def jung_check(X, tol=GEOM_TOL):
    X = _check_meb_input(X)
    diam = diameter(X)
    ball = min_enclosing_ball(X)
    bound = diam * jung_radius(X.shape[1])
    return JungReport(ball.radius, bound, diam, bool(ball.radius <= bound + tol))


def load_points(path):
    """Read a point-set file: one comma-separated point per line, ``#`` comments."""
    rows = []
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                row = [float(tok) for tok in line.split(",")]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            if dim is None:
                dim = len(row)
            elif len(row) != dim:
                raise ValueError(
                    f"{path}:{lineno}: expected {dim} coordinates, got {len(row)}")
            rows.append(row)
    if not rows:
        raise ValueError(f"{path}: no points")
    return check_points(np.array(rows))


def save_points(path, X, header=None):
    X = check_points(X)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            fh.write(f"# {header}\n")
        for row in X:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


class MinimalEnclosingBall(OutlierMixin, BaseEstimator):
    """Smallest enclosing ball as an estimator.

    ``predict`` follows the outlier-detector convention: +1 for points inside
    the fitted ball, -1 outside.

    Attributes
    ----------
    center_ : ndarray of shape (n_features,)
    radius_ : float
    support_ : ndarray of shape (k, n_features)
        Boundary points that determine the ball, ``k <= n_features + 1``.
    """

    def __init__(self, tol=GEOM_TOL):
        self.tol = tol

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=np.float64)
        X = _check_meb_input(X)
        ball, support = _meb_with_support(X)
        self.center_ = ball.center
        self.radius_ = ball.radius
        self.support_ = support
        return self

    def decision_function(self, X):
        check_is_fitted(self)
        X = validate_data(self, X, dtype=np.float64, reset=False)
        return self.radius_ + self.tol - np.linalg.norm(X - self.center_, axis=1)

    def predict(self, X):
        return np.where(self.decision_function(X) >= 0, 1, -1)

    @property
    def ball_(self):
        check_is_fitted(self)
        return Ball(self.center_, self.radius_)


def sample_point_set(seed, m, n, kind="gaussian", diam=1.0):
    """Random ``m``-point set in R^n rescaled to the given diameter.

    ``kind`` is ``"gaussian"`` (normal cloud), ``"ball"`` (uniform in a ball)
    or ``"sphere"`` (uniform on a sphere).
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    X = rng.standard_normal((m, n))
    if kind in ("ball", "sphere"):
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        if kind == "ball":
            X *= rng.uniform(0.0, 1.0, (m, 1)) ** (1.0 / n)
    elif kind != "gaussian":
        raise ValueError(f"unknown kind {kind!r}")
    d = diameter(X)
    return X * (diam / d) if d > 0 else X
