"""Constructive partitions of finite sets into parts of diameter below ``b``.

Pipeline: enclose the set in its smallest ball, cover that ball by small
balls placed on a cubic lattice, and (optionally) split every small ball into
``n + 1`` simplicial cones. Three strategies:

``shrunk``
    cover balls of radius ``b(1 - epsilon)/2``; each part has diameter at most
    ``b(1 - epsilon)``.
``split``
    cover balls of radius ``b/2`` cut into ``n + 1`` nearest-vertex cells of
    an inscribed regular simplex; each part has diameter below ``b`` (see
    :meth:`SimplexSplit.region_diameter`).
``orthant``
    only for ``b = 1``: cut the enclosing ball by the coordinate hyperplanes
    through its centre, giving at most ``2**n`` parts.
"""
from dataclasses import dataclass, field
import enum
import itertools
import math

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .exceptions import CoverageError, DomainError, UnsupportedDimensionError
from .geometry import GEOM_TOL, Ball, check_points, diameter, min_enclosing_ball
from .lemma3 import simplex_directions

ASSIGN_TOL = 1e-12
MAX_SPLIT_DIM = 6


class Strategy(str, enum.Enum):
    SHRUNK_COVER = "shrunk"
    COVER_PLUS_SPLIT = "split"
    ORTHANT = "orthant"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).strip()
        for member in cls:
            if text.lower() == member.value or text.upper() == member.name:
                return member
        raise DomainError(f"unknown strategy {value!r}; choose shrunk, split or orthant")


@dataclass
class Partition:
    labels: np.ndarray
    part_count: int
    max_part_diameter: float


@dataclass
class CoverPlan:
    strategy: Strategy
    epsilon: float
    balls: list = field(default_factory=list)
    regions_per_ball: int = 1


def _relabel(raw):
    # contiguous labels 0..k-1 in increasing order of the raw codes
    _, inv = np.unique(raw, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def part_diameters(X, labels):
    """Diameter of each part, indexed by label."""
    labels = np.asarray(labels)
    return {int(k): diameter(X[labels == k]) for k in np.unique(labels)}


def _make_partition(X, labels):
    diams = part_diameters(X, labels)
    return Partition(labels, len(diams), max(diams.values()))


def orthant_partition(X, ball):
    """Split the points by the sign pattern of ``x - ball.center``.

    A zero coordinate counts as nonnegative. At most ``2**n`` nonempty parts.
    """
    X = check_points(X)
    if not np.all(ball.contains(X, GEOM_TOL)):
        raise DomainError("orthant_partition: some points lie outside the ball")
    negative = (X - ball.center) < 0
    raw = negative.astype(np.int64) @ (1 << np.arange(X.shape[1], dtype=np.int64))
    part = _make_partition(X, _relabel(raw))
    diam = diameter(X)
    if diam > 0 and part.max_part_diameter >= diam + GEOM_TOL:
        raise CoverageError(
            f"orthant part of diameter {part.max_part_diameter} does not beat the set's {diam}")
    return part


def cover_ball_lattice(ball, rho_small):
    """Balls of radius ``rho_small`` on a cubic lattice that together cover ``ball``.

    The lattice has spacing ``2 rho_small / sqrt(n)``, so every cell (a cube)
    has circumradius ``rho_small``. It is anchored at the corner of the ball's
    bounding box and only cells meeting the ball are kept, in lexicographic
    order of their lattice index.
    """
    if not rho_small > 0:
        raise DomainError(f"rho_small must be positive, got {rho_small}")
    n, R, c = ball.dim, ball.radius, ball.center
    if rho_small >= R:
        return [Ball(c, rho_small)]
    h = 2.0 * rho_small / math.sqrt(n)
    k = int(math.ceil(2.0 * R / h - 1e-12))
    ticks = c[None, :] - R + h * (np.arange(k)[:, None] + 0.5)  # (k, n): per-axis centres
    out = []
    for idx in itertools.product(range(k), repeat=n):
        centre = ticks[idx, np.arange(n)]
        # distance from the ball centre to the cell (a cube of half-side h/2)
        gap = np.maximum(np.abs(centre - c) - h / 2.0, 0.0)
        if np.linalg.norm(gap) <= R:
            out.append(Ball(centre, rho_small))
    return out


class SimplexSplit:
    """Cut a ball into ``n + 1`` cones around the vertices of an inscribed regular simplex.

    Calling the instance on points returns each point's region label, the
    index of the nearest vertex (lowest index on ties).
    """

    def __init__(self, ball):
        if ball.dim > MAX_SPLIT_DIM:
            raise UnsupportedDimensionError(
                f"simplex split supports dimension <= {MAX_SPLIT_DIM}, got {ball.dim}")
        self.ball = ball
        self.vertices = simplex_directions(ball.dim)

    @property
    def n_regions(self):
        return self.ball.dim + 1

    def __call__(self, X):
        X = np.atleast_2d(X)
        return np.argmax((X - self.ball.center) @ self.vertices.T, axis=1)

    def region_diameter(self):
        """Diameter of one region: ``R`` for ``n = 1``, else the chord
        ``R sqrt(2 + 2 sqrt(pq / ((p + 1)(q + 1))))`` with ``p = n // 2``, ``q = n - p``.

        A region is the ball cut by the cone spanned by the ``n`` rays ``-v_j``
        (``j != i``). The chord joins the directions of the sums over two
        complementary sets of ``p`` and ``q`` rays, the most balanced split
        being the longest. That this pair is the global maximum is checked
        numerically, not proved; it stays strictly below ``2R``.
        """
        n, R = self.ball.dim, self.ball.radius
        if n == 1:
            return R
        p, q = n // 2, n - n // 2
        return R * math.sqrt(2.0 + 2.0 * math.sqrt(p * q / ((p + 1.0) * (q + 1.0))))


def simplex_split(ball):
    return SimplexSplit(ball)


def plan_cover(X, b, strategy, epsilon=0.01, ball=None):
    """Build the :class:`CoverPlan` for a point set (its enclosing ball is computed if not given)."""
    strategy = Strategy.parse(strategy)
    X = check_points(X)
    if ball is None:
        ball = min_enclosing_ball(X)
    n = X.shape[1]
    if strategy is Strategy.ORTHANT:
        return CoverPlan(strategy, epsilon, [ball], 2 ** n)
    if not 0 < epsilon < 0.5:
        raise DomainError(f"epsilon must lie in (0, 0.5), got {epsilon}")
    if strategy is Strategy.SHRUNK_COVER:
        return CoverPlan(strategy, epsilon, cover_ball_lattice(ball, b * (1.0 - epsilon) / 2.0), 1)
    if n > MAX_SPLIT_DIM:
        raise UnsupportedDimensionError(f"split strategy supports dimension <= {MAX_SPLIT_DIM}")
    return CoverPlan(strategy, epsilon, cover_ball_lattice(ball, b / 2.0), n + 1)


def _assign(X, plan):
    m = X.shape[0]
    raw = np.full(m, -1, dtype=np.int64)
    todo = np.ones(m, dtype=bool)
    for i, cover in enumerate(plan.balls):
        if not todo.any():
            break
        hit = todo & (np.linalg.norm(X - cover.center, axis=1) <= cover.radius + ASSIGN_TOL)
        if not hit.any():
            continue
        region = 0
        if plan.strategy is Strategy.COVER_PLUS_SPLIT:
            region = SimplexSplit(cover)(X[hit])
        raw[hit] = i * plan.regions_per_ball + region
        todo &= ~hit
    if todo.any():
        raise CoverageError(f"{int(todo.sum())} points fall outside every cover ball")
    return raw


def _check_b(b, strategy):
    if not 0 < b <= 1:
        raise DomainError(f"b must lie in (0, 1], got {b}")
    if strategy is Strategy.ORTHANT and b != 1:
        raise DomainError("the orthant strategy only guarantees parts below diameter 1; use b = 1")


def partition_set(X, b, strategy=Strategy.SHRUNK_COVER, epsilon=0.01):
    """Partition a point set of diameter at most 1 into parts of diameter strictly below ``b``.

    Each point goes to the first cover ball containing it (lattice order) and,
    for the split strategy, to the first simplex region within that ball.
    """
    strategy = Strategy.parse(strategy)
    X = check_points(X)
    _check_b(b, strategy)
    if diameter(X) > 1.0 + GEOM_TOL:
        raise DomainError("the point set must have diameter at most 1")
    ball = min_enclosing_ball(X)
    if strategy is Strategy.ORTHANT:
        part = orthant_partition(X, ball)
    else:
        plan = plan_cover(X, b, strategy, epsilon, ball)
        part = _make_partition(X, _relabel(_assign(X, plan)))
    if not part.max_part_diameter < b:
        raise CoverageError(f"part of diameter {part.max_part_diameter} does not beat b = {b}")
    return part


@dataclass(frozen=True)
class PartitionCheck:
    ok: bool
    part_count: int
    max_part_diameter: float


def verify_partition(X, labels, b):
    """Recompute part diameters from scratch; ``ok`` iff every part is below ``b - 1e-12``."""
    X = check_points(X)
    labels = np.asarray(labels)
    if labels.shape != (X.shape[0],):
        raise DomainError(f"expected {X.shape[0]} labels, got shape {labels.shape}")
    if labels.dtype.kind not in "iu":
        if labels.dtype.kind == "f" and np.all(np.isfinite(labels)) and np.all(labels == np.round(labels)):
            labels = labels.astype(np.int64)
        else:
            raise DomainError("labels must be integers")
    if np.any(labels < 0):
        raise DomainError("every point needs a nonnegative label")
    diams = part_diameters(X, labels)
    worst = max(diams.values())
    return PartitionCheck(bool(worst < b - 1e-12), len(diams), worst)


def partition_to_dict(part, b, strategy, epsilon, n):
    return {
        "b": float(b),
        "strategy": Strategy.parse(strategy).value,
        "epsilon": float(epsilon),
        "n": int(n),
        "part_count": int(part.part_count),
        "max_part_diameter": float(part.max_part_diameter),
        "labels": [int(v) for v in part.labels],
    }


class BallCoverPartitioner(ClusterMixin, BaseEstimator):
    """Partition a diameter-<=1 point set into parts of diameter strictly below ``b``.

    Parameters
    ----------
    b : float, default=0.5
        Strict upper bound on part diameters, in (0, 1].
    strategy : {"shrunk", "split", "orthant"}, default="shrunk"
    epsilon : float, default=0.01
        Shrink factor for the ``shrunk`` strategy.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    part_count_ : int
    max_part_diameter_ : float
    ball_ : Ball
        Smallest enclosing ball of the training set.
    """

    def __init__(self, b=0.5, strategy="shrunk", epsilon=0.01):
        self.b = b
        self.strategy = strategy
        self.epsilon = epsilon

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=np.float64)
        part = partition_set(X, self.b, self.strategy, self.epsilon)
        self.labels_ = part.labels
        self.part_count_ = part.part_count
        self.max_part_diameter_ = part.max_part_diameter
        self.ball_ = min_enclosing_ball(X)
        return self

    def to_dict(self):
        check_is_fitted(self)
        part = Partition(self.labels_, self.part_count_, self.max_part_diameter_)
        return partition_to_dict(part, self.b, self.strategy, self.epsilon, self.n_features_in_)
