"""Cap geometry behind the bound on the distance between cap centres.

Two caps of chordal radius ``rho`` on a sphere of radius ``r`` whose centres
are ``2d`` apart satisfy ``d / rho <= sqrt(D^2 + 1/2)`` under the hypotheses of
the covering argument. The quantitative skeleton verified here:

* the angles ``sin(phi) = alpha / sqrt(r^2 - 1/4)`` and
  ``sin(psi) = sqrt(rho^2 - 1/4) / sqrt(r^2 - 1/4)``;
* ``d = r sin(phi + psi)``, which equals ``rho * f(r, rho, alpha)``;
* the chain ``d/rho <= f <= sqrt(4 alpha^2 + 1) <= sqrt(D^2 + 1/2)``;
* the circumsphere identity for two weighted point clouds and the diameter
  inequality ``D^2 >= |u - v|^2 + t1^2 + t2^2`` that follows from it.

Caps here are sized by chord: a cap of chordal radius 1/2 has chordal
diameter 1, the same as a ball of radius 1/2. Whether the two caps are read
as caps or as such balls, the formulas checked below are the same.
"""
from dataclasses import dataclass, asdict, field
import math

import numpy as np
from scipy.optimize import nnls

from .bounds import alpha_tilde
from .exceptions import DomainError, RejectedInputError, SamplingError
from .lemma2 import f_value

CONFIG_TOL = 1e-12
CIRCUM_TOL = 1e-10


@dataclass(frozen=True)
class SphericalCap:
    """Cap on the sphere of radius ``sphere_radius`` about the origin.

    ``rho`` is the chordal radius: half the longest chord of the cap, so the
    angular radius is ``arcsin(rho / sphere_radius)``.
    """

    sphere_radius: float
    center_direction: np.ndarray
    rho: float

    def __post_init__(self):
        u = np.asarray(self.center_direction, dtype=np.float64).reshape(-1)
        if abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise DomainError("cap center_direction must be a unit vector")
        if not self.sphere_radius > 0:
            raise DomainError("sphere radius must be positive")
        if not 0 < self.rho <= self.sphere_radius:
            raise DomainError(f"chordal radius must lie in (0, r], got {self.rho}")
        object.__setattr__(self, "center_direction", u)

    @property
    def angular_radius(self):
        return math.asin(min(1.0, self.rho / self.sphere_radius))

    @property
    def center(self):
        return self.sphere_radius * self.center_direction

    def contains_directions(self, U, slack=0.0):
        """Membership test for unit vectors ``U`` (rows), with optional angular slack."""
        return np.asarray(U) @ self.center_direction >= math.cos(
            min(math.pi, self.angular_radius + slack))

    def to_dict(self):
        return {"dir": self.center_direction.tolist(), "rho": self.rho}


def _check_angles(r, rho, alpha):
    if not r > 0.5:
        raise DomainError(f"need r > 1/2, got {r}")
    if not 0.5 - CONFIG_TOL <= rho <= r + CONFIG_TOL:
        raise DomainError(f"need 1/2 <= rho <= r, got rho={rho}, r={r}")
    if not -CONFIG_TOL <= alpha <= math.sqrt(r * r - 0.25) + CONFIG_TOL:
        raise DomainError(f"need 0 <= alpha <= sqrt(r^2 - 1/4), got alpha={alpha}")


def _angles(r, rho, alpha):
    # arcsin of the two sines, taken via atan2 with the cosines built from their own
    # radicands so that angles near pi/2 keep full accuracy
    rad = lambda x: np.sqrt(np.maximum(x, 0.0))
    phi = np.arctan2(np.maximum(alpha, 0.0), rad(r * r - 0.25 - alpha * alpha))
    psi = np.arctan2(rad(rho * rho - 0.25), rad(r * r - rho * rho))
    return phi, psi


def cap_angles(r, rho, alpha):
    """Return ``(phi, psi)`` in radians."""
    r, rho, alpha = float(r), float(rho), float(alpha)
    _check_angles(r, rho, alpha)
    phi, psi = _angles(np.float64(r), np.float64(rho), np.float64(alpha))
    return float(phi), float(psi)


def center_distance(r, rho, alpha):
    """Half the distance between the two cap centres, ``r sin(phi + psi)``."""
    phi, psi = cap_angles(r, rho, alpha)
    return float(r) * math.sin(phi + psi)


def _center_distance_array(r, rho, alpha):
    phi, psi = _angles(r, rho, alpha)
    return r * np.sin(phi + psi)


def config_violations(r, rho, alpha, D, strict=True):
    """Violated hypotheses of a cap configuration.

    ``strict=False`` keeps only what the ratio chain itself needs: the radius
    window shrinks to ``sqrt(alpha^2 + 1/4) <= r`` with no upper limit.
    """
    out = []
    if not D >= 1:
        return [f"D = {D} < 1"]
    at = alpha_tilde(D)
    if strict:
        r_lo, r_hi = math.sqrt(at * at + 0.25), D / math.sqrt(2.0)
    else:
        r_lo, r_hi = math.sqrt(alpha * alpha + 0.25), math.inf
    if not r_lo - CONFIG_TOL <= r <= r_hi + CONFIG_TOL:
        out.append(f"r = {r} outside [{r_lo}, {r_hi}]")
    if not 0.5 - CONFIG_TOL <= rho <= r + CONFIG_TOL:
        out.append(f"rho = {rho} outside [1/2, r]")
    # the argument yields alpha < alpha_tilde; the closed bound is accepted
    if not -CONFIG_TOL <= alpha <= at + CONFIG_TOL:
        out.append(f"alpha = {alpha} outside [0, alpha_tilde(D) = {at}]")
    return out


@dataclass(frozen=True)
class ChainReport:
    ratio: float
    cap1: float
    cap2: float
    cap3: float
    ok: bool
    margin: float
    branch: str

    def to_dict(self):
        return asdict(self)


def chain_check(r, rho, alpha, D, strict=True):
    """Evaluate ``d/rho <= f(r, rho, alpha) <= sqrt(4 alpha^2 + 1) <= sqrt(D^2 + 1/2)``.

    ``branch`` is ``"intersecting"`` when ``d <= rho`` (the caps meet, and the
    ratio is at most 1 < sqrt(3/2)) and ``"disjoint"`` otherwise; the full
    chain is evaluated in both cases. ``strict`` is passed to
    :func:`config_violations`.
    """
    bad = config_violations(r, rho, alpha, D, strict)
    if bad:
        raise DomainError("invalid configuration: " + "; ".join(bad))
    d = center_distance(r, rho, alpha)
    ratio = d / rho
    cap1 = f_value(r, rho, alpha)
    cap2 = math.sqrt(4.0 * alpha * alpha + 1.0)
    cap3 = math.sqrt(D * D + 0.5)
    eps = 1e-12
    ok = ratio <= cap1 + eps and cap1 <= cap2 + eps and cap2 <= cap3 + eps
    branch = "intersecting" if d <= rho else "disjoint"
    if branch == "intersecting":
        ok = ok and ratio <= 1.0 + eps < math.sqrt(1.5) <= cap3 + eps
    return ChainReport(ratio, cap1, cap2, cap3, bool(ok), cap3 - ratio, branch)


def sample_configs(rng, size):
    """Admissible ``(r, rho, alpha, D)`` drawn uniformly over nested ranges.

    D ~ U[1, 10], r ~ U[sqrt(alpha_tilde^2 + 1/4), D/sqrt(2)], rho ~ U[1/2, r],
    alpha ~ U[0, alpha_tilde(D)).
    """
    D = rng.uniform(1.0, 10.0, size)
    at = np.sqrt(D * D / 4.0 - 0.125)
    r_lo = np.sqrt(at * at + 0.25)
    r = r_lo + rng.uniform(0.0, 1.0, size) * (D / math.sqrt(2.0) - r_lo)
    rho = 0.5 + rng.uniform(0.0, 1.0, size) * (r - 0.5)
    alpha = rng.uniform(0.0, 1.0, size) * at
    return r, rho, alpha, D


@dataclass
class Lemma3Summary:
    samples: int
    seed: int
    violations: int
    min_margin: float
    max_identity_error: float
    worst_config: dict
    ok: bool

    def to_dict(self):
        return asdict(self)


def verify_lemma3(samples=100_000, seed=0xB0B5):
    """Monte Carlo check of the ratio chain and the ``d = rho f`` bridge."""
    rng = np.random.default_rng(seed)
    r, rho, alpha, D = sample_configs(rng, samples)
    d = _center_distance_array(r, rho, alpha)
    ratio = d / rho
    cap1 = np.asarray(f_value(r, rho, alpha))
    cap2 = np.sqrt(4.0 * alpha * alpha + 1.0)
    cap3 = np.sqrt(D * D + 0.5)
    eps = 1e-12
    ok = (ratio <= cap1 + eps) & (cap1 <= cap2 + eps) & (cap2 <= cap3 + eps) & (ratio <= cap3 + eps)
    margin = cap3 - ratio
    ident = np.abs(d - rho * cap1)
    worst = int(np.argmin(margin))
    n_bad = int((~ok).sum())
    return Lemma3Summary(
        samples=int(samples), seed=int(seed), violations=n_bad,
        min_margin=float(margin.min()), max_identity_error=float(ident.max()),
        worst_config={"r": float(r[worst]), "rho": float(rho[worst]),
                      "alpha": float(alpha[worst]), "D": float(D[worst])},
        ok=bool(n_bad == 0 and ident.max() <= 1e-10),
    )


@dataclass(frozen=True)
class CircumscribedSet:
    """Points on the sphere of radius ``t`` about ``center``, whose weighted mean is ``center``."""

    points: np.ndarray
    weights: np.ndarray
    center: np.ndarray
    t: float
    _checked: bool = field(default=True, repr=False)

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        u = np.asarray(self.center, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "center", u)
        object.__setattr__(self, "t", float(self.t))
        if len(w) != len(P) or P.shape[1] != len(u):
            raise DomainError("points, weights and center have inconsistent shapes")
        if not self.t > 0:
            raise DomainError("t must be positive")
        if np.any(w < 0) or abs(w.sum() - 1.0) > CIRCUM_TOL:
            raise DomainError("weights must be nonnegative and sum to 1")
        if np.max(np.abs(np.linalg.norm(P - u, axis=1) - self.t)) > CIRCUM_TOL:
            raise DomainError("points are not at distance t from the center")
        if np.linalg.norm(w @ P - u) > CIRCUM_TOL:
            raise DomainError("weighted mean of the points differs from the center")

    @property
    def dim(self):
        return self.points.shape[1]


def circumsphere_identity(xs, ys):
    """Residual of ``sum mu_i lambda_j |x_j - y_i|^2 = |u - v|^2 + t1^2 + t2^2``."""
    if xs.dim != ys.dim:
        raise DomainError(f"dimension mismatch: {xs.dim} vs {ys.dim}")
    sq = ((xs.points[:, None, :] - ys.points[None, :, :]) ** 2).sum(axis=2)
    lhs = xs.weights @ sq @ ys.weights
    rhs = float(np.sum((xs.center - ys.center) ** 2)) + xs.t ** 2 + ys.t ** 2
    return abs(float(lhs) - rhs)


@dataclass(frozen=True)
class ConsequenceReport:
    lhs: float
    rhs: float
    alpha: float
    alpha_bound: float
    ok: bool

    def to_dict(self):
        return asdict(self)


def diameter_consequence(xs, ys, D):
    """Check ``D^2 >= |u - v|^2 + t1^2 + t2^2`` for two clouds whose cross distances are at most ``D``.

    With ``alpha = |u - v| / 2`` this gives ``alpha <= sqrt(D^2/4 - (t1^2 + t2^2)/4)``,
    which is below ``alpha_tilde(D)`` once both radii exceed 1/2.
    """
    if xs.dim != ys.dim:
        raise DomainError(f"dimension mismatch: {xs.dim} vs {ys.dim}")
    if xs.t < 0.5 - CONFIG_TOL or ys.t < 0.5 - CONFIG_TOL:
        raise RejectedInputError("circumradii must be at least 1/2")
    cross = np.sqrt(((xs.points[:, None, :] - ys.points[None, :, :]) ** 2).sum(axis=2))
    if cross.max() > D + CONFIG_TOL:
        raise RejectedInputError(
            f"a cross distance {cross.max()} exceeds D = {D}; the inequality does not apply")
    sep2 = float(np.sum((xs.center - ys.center) ** 2))
    lhs = sep2 + xs.t ** 2 + ys.t ** 2
    rhs = D * D
    bound2 = D * D / 4.0 - (xs.t ** 2 + ys.t ** 2) / 4.0
    return ConsequenceReport(lhs, rhs, math.sqrt(sep2) / 2.0,
                             math.sqrt(max(bound2, 0.0)), bool(lhs <= rhs + CONFIG_TOL))


def simplex_directions(dim):
    """Unit vertices of a regular simplex centred at the origin, shape ``(dim + 1, dim)``."""
    if dim < 1:
        raise DomainError("dim must be >= 1")
    E = np.eye(dim + 1) - 1.0 / (dim + 1)
    # orthonormal basis of the sum-zero hyperplane
    Q = np.linalg.svd(E)[2][:dim]
    V = E @ Q.T
    return V / np.linalg.norm(V, axis=1, keepdims=True)


def random_rotation(rng, dim):
    Q, R = np.linalg.qr(rng.standard_normal((dim, dim)))
    return Q * np.sign(np.diag(R))


def sample_circumscribed(seed, dim, t, count, center=None, max_retries=100):
    """Random points on a sphere of radius ``t`` with explicit convex weights for the centre.

    ``count - k`` uniform random directions are joined by ``k`` directions that
    enclose the origin (an antipodal pair when ``count <= dim``, otherwise a
    randomly rotated regular simplex); nonnegative weights reproducing the
    centre are then found by nonnegative least squares.
    """
    if dim < 1 or count < 2 or not t > 0:
        raise DomainError("need dim >= 1, count >= 2 and t > 0")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    u = rng.standard_normal(dim) if center is None else np.asarray(center, dtype=np.float64)
    for _ in range(max_retries):
        k = dim + 1 if count >= dim + 1 else 2
        if k == 2:
            e = rng.standard_normal(dim)
            anchor = np.stack([e, -e])
        else:
            anchor = simplex_directions(dim) @ random_rotation(rng, dim).T
        free = rng.standard_normal((count - k, dim))
        dirs = np.vstack([free, anchor])
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        dirs = dirs[rng.permutation(count)]
        # min |dirs^T w|^2 subject to w >= 0, sum(w) = 1 (enforced by a heavy row)
        big = 1e3
        A = np.vstack([dirs.T, big * np.ones(count)])
        rhs = np.concatenate([np.zeros(dim), [big]])
        w = nnls(A, rhs)[0]
        if w.sum() <= 0:
            continue
        w /= w.sum()
        if np.linalg.norm(w @ dirs) * t > 1e-12 * max(1.0, t):
            continue
        # put the tiny residual into the centre so the weights reproduce it exactly
        pts = u + t * dirs
        center_exact = w @ pts
        pts = center_exact + t * dirs
        return CircumscribedSet(pts, w, w @ pts, t)
    raise SamplingError(f"no convex weights found after {max_retries} attempts")


@dataclass
class IdentitySummary:
    samples: int
    seed: int
    max_residual: float
    consequence_violations: int
    min_consequence_slack: float
    ok: bool

    def to_dict(self):
        return asdict(self)


def verify_identity(samples=1000, seed=0xB0B5, dim=None, m=None, s=None, max_dim=6, max_count=8):
    """Circumsphere identity and diameter consequence over sampled cloud pairs.

    ``dim``, ``m`` and ``s`` are drawn per sample (dim in 1..max_dim, sizes in
    2..max_count) unless fixed. ``D`` is taken as the largest cross distance,
    so the consequence's precondition holds by construction. Radii are drawn
    from (1/2, 1].
    """
    rng = np.random.default_rng(seed)
    max_res = 0.0
    bad = 0
    min_slack = math.inf
    for _ in range(samples):
        n = dim or int(rng.integers(1, max_dim + 1))
        mm = m or int(rng.integers(2, max_count + 1))
        ss = s or int(rng.integers(2, max_count + 1))
        t1, t2 = rng.uniform(0.5, 1.0, 2)
        t1, t2 = max(t1, 0.5 + 1e-9), max(t2, 0.5 + 1e-9)
        xs = sample_circumscribed(rng, n, t1, mm)
        ys = sample_circumscribed(rng, n, t2, ss)
        max_res = max(max_res, circumsphere_identity(xs, ys))
        cross = np.sqrt(((xs.points[:, None, :] - ys.points[None, :, :]) ** 2).sum(axis=2))
        rep = diameter_consequence(xs, ys, float(cross.max()))
        bad += not rep.ok
        min_slack = min(min_slack, rep.rhs - rep.lhs)
    return IdentitySummary(int(samples), int(seed), float(max_res), bad, float(min_slack),
                           bool(max_res <= CIRCUM_TOL and bad == 0))
