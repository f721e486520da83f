"""Coverings of circles and 2-spheres by spherical caps.

Caps are parametrised by chordal radius ``rho`` on a sphere of radius ``r``;
the angular radius is ``arcsin(rho / r)``.

Coverings are built on a finite mesh of the sphere whose covering radius
``h`` (the largest angular distance from a sphere point to the mesh) is known
exactly. A mesh point counts as covered only when it lies within
``theta - h`` of a cap centre; then every point of the sphere is within
``theta`` of that centre, so a covered mesh certifies the whole sphere.
An independent denser mesh re-checks each covering.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.spatial import ConvexHull

from .exceptions import CoverageError, DomainError, UnsupportedDimensionError
from .lemma3 import SphericalCap, random_rotation

DEFAULT_MESH = {2: 2000, 3: 10_000}
MIN_MESH = {2: 1000, 3: 10_000}
MAX_ITER = 10 ** 6
DOT_TOL = 1e-12
_BLOCK = 512


def rogers_reference(n, r, rho):
    """(r / rho)**n: the o(1)-free cap count for covering a sphere of radius r."""
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    if not 0 < rho <= r:
        raise DomainError(f"need 0 < rho <= r, got rho={rho}, r={r}")
    return (r / rho) ** n


def circle_cover_count(r, rho):
    """Least number of closed arcs of chordal radius ``rho`` covering a circle of radius ``r``."""
    if not 0 < rho <= r:
        raise DomainError(f"need 0 < rho <= r, got rho={rho}, r={r}")
    q = math.pi / math.asin(min(1.0, rho / r))
    return int(math.ceil(q - 1e-9))


@dataclass
class SphereMesh:
    points: np.ndarray  # unit vectors, shape (N, n)
    covering_radius: float

    @property
    def size(self):
        return len(self.points)


def sphere_mesh(n, size, seed):
    """Near-uniform mesh of the unit sphere in R^n (n = 2 or 3) with its exact covering radius."""
    if n not in (2, 3):
        raise UnsupportedDimensionError(f"cap coverings are implemented for n in (2, 3), got {n}")
    rng = np.random.default_rng(seed)
    if n == 2:
        offset = rng.uniform(0.0, 2.0 * math.pi / size)
        ang = offset + 2.0 * math.pi * np.arange(size) / size
        return SphereMesh(np.c_[np.cos(ang), np.sin(ang)], math.pi / size)
    # Fibonacci lattice, randomly rotated
    i = np.arange(size) + 0.5
    z = 1.0 - 2.0 * i / size
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    s = np.sqrt(1.0 - z * z)
    P = np.c_[s * np.cos(phi), s * np.sin(phi), z] @ random_rotation(rng, 3).T
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    return SphereMesh(P, _covering_radius_s2(P))


def _covering_radius_s2(P):
    # Voronoi vertices on the sphere are the outward normals of the hull facets;
    # the covering radius is the largest angle from one to its facet's vertices.
    hull = ConvexHull(P)
    normals = hull.equations[:, :3]
    cos = np.einsum("ij,ij->i", normals, P[hull.simplices[:, 0]])
    return float(np.arccos(np.clip(cos.min(), -1.0, 1.0)))


@dataclass
class CapCover:
    caps: list
    certified: bool
    uncovered: int
    mesh_size: int
    check_size: int
    mesh_radius: float

    def __len__(self):
        return len(self.caps)

    def __iter__(self):
        return iter(self.caps)


def _directions(caps):
    return np.array([c.center_direction for c in caps])


def covered_by(U, caps, slack=DOT_TOL):
    """Boolean mask of the unit vectors ``U`` lying in at least one cap."""
    if not caps:
        return np.zeros(len(U), dtype=bool)
    cos_t = np.array([math.cos(c.angular_radius) for c in caps])
    return np.any(U @ _directions(caps).T >= cos_t[None, :] - slack, axis=1)


def _greedy(mesh, theta):
    """Centres (mesh indices) of a cap cover of the mesh with effective radius ``theta``."""
    U = mesh.points
    cos_t = math.cos(theta)
    uncovered = np.ones(len(U), dtype=bool)
    closest = np.full(len(U), -np.inf)  # best dot product with any chosen centre
    centres = []
    for _ in range(MAX_ITER):
        if not uncovered.any():
            return centres
        unc = np.flatnonzero(uncovered)
        # anchor: the uncovered point nearest the covered region
        p = unc[np.argmax(closest[unc])]
        cand = unc[U[unc] @ U[p] >= cos_t]
        # among centres whose cap still reaches the anchor, take the largest gain
        best_gain, best_q = -1, p
        for s in range(0, len(cand), _BLOCK):
            block = cand[s:s + _BLOCK]
            gain = (U[block] @ U[unc].T >= cos_t).sum(axis=1)
            j = int(np.argmax(gain))
            if gain[j] > best_gain:
                best_gain, best_q = int(gain[j]), int(block[j])
        centres.append(best_q)
        dots = U @ U[best_q]
        uncovered &= ~(dots >= cos_t)
        np.maximum(closest, dots, out=closest)
    raise CoverageError(f"greedy cover exceeded {MAX_ITER} iterations")


def certify(caps, n, mesh_density, seed):
    """Count points of an independent mesh (twice as dense) left outside every cap."""
    check = sphere_mesh(n, 2 * mesh_density, _check_seed(seed))
    return int((~covered_by(check.points, caps)).sum()), check.size


def _check_seed(seed):
    return np.random.SeedSequence([int(seed), 1])


def greedy_cap_cover(n, r, rho, mesh_density=None, seed=0xB0B5):
    """Greedy covering of the sphere of radius ``r`` in R^n (n = 2, 3) by caps of chordal radius ``rho``.

    Each step anchors on the uncovered mesh point closest to the already
    covered region and centres the new cap at the uncovered mesh point that
    still reaches the anchor and covers the most uncovered points. Coverage
    uses the radius reduced by the mesh covering radius, which makes the
    result a genuine covering of the sphere.
    """
    if n not in (2, 3):
        raise UnsupportedDimensionError(f"greedy cap cover supports n in (2, 3), got {n}")
    if not 0 < rho <= r:
        raise DomainError(f"need 0 < rho <= r, got rho={rho}, r={r}")
    mesh_density = int(mesh_density or DEFAULT_MESH[n])
    if mesh_density < MIN_MESH[n]:
        raise DomainError(f"mesh_density for n={n} must be at least {MIN_MESH[n]}")
    mesh = sphere_mesh(n, mesh_density, seed)
    theta = math.asin(min(1.0, rho / r))
    if theta <= mesh.covering_radius:
        raise DomainError("mesh too coarse for caps this small; raise mesh_density")
    idx = _greedy(mesh, theta - mesh.covering_radius)
    caps = [SphericalCap(r, mesh.points[i] / np.linalg.norm(mesh.points[i]), rho) for i in idx]
    holes, check_size = certify(caps, n, mesh_density, seed)
    return CapCover(caps, holes == 0, holes, mesh.size, check_size, mesh.covering_radius)


@dataclass
class Level:
    rho: float
    caps: list

    @property
    def M(self):
        return len(self.caps)


@dataclass
class CapHierarchy:
    """Nested cap coverings at chordal diameters ``(1 + delta)**k``, ``k = 0..k0``.

    ``nesting[k - 1][m]`` lists the level ``k - 1`` caps whose union contains
    cap ``m`` of level ``k``.
    """

    n: int
    r: float
    lam: float
    delta: float
    epsilon: float
    k0: int
    levels: list
    nesting: list
    mesh_density: int
    seed: int
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "n": self.n, "r": self.r, "lambda": self.lam, "delta": self.delta,
            "epsilon": self.epsilon, "k0": self.k0, "mesh_density": self.mesh_density,
            "seed": self.seed, "notes": list(self.notes),
            "levels": [{"rho": lv.rho, "M": lv.M, "caps": [c.to_dict() for c in lv.caps]}
                       for lv in self.levels],
            "nesting": [[list(map(int, b)) for b in level] for level in self.nesting],
        }

    @classmethod
    def from_dict(cls, d):
        levels = [Level(lv["rho"], [SphericalCap(d["r"], np.array(c["dir"]), c["rho"])
                                    for c in lv["caps"]]) for lv in d["levels"]]
        return cls(d["n"], d["r"], d["lambda"], d["delta"], d["epsilon"], d["k0"], levels,
                   [[list(b) for b in level] for level in d["nesting"]],
                   d["mesh_density"], d["seed"], list(d.get("notes", [])))


def hierarchy_depth(r, lam, delta):
    """Smallest k0 >= 0 with (1 + delta)**k0 >= r / lam."""
    k = max(0, math.ceil(math.log(r / lam) / math.log1p(delta) - 1e-12))
    while (1.0 + delta) ** k < r / lam:
        k += 1
    return k


def level_rho(k, delta, r):
    return min((1.0 + delta) ** k / 2.0, r)


def _subcover(targets, prev_dirs, cos_prev):
    # greedy set cover of the target directions by caps of the previous level
    hit = targets @ prev_dirs.T >= cos_prev
    remaining = np.ones(len(targets), dtype=bool)
    chosen = []
    while remaining.any():
        gain = hit[remaining].sum(axis=0)
        j = int(np.argmax(gain))
        if gain[j] == 0:
            raise CoverageError("previous level does not cover a cap of the next level")
        chosen.append(j)
        remaining &= ~hit[:, j]
    return sorted(chosen)


def build_hierarchy(n, r, lam, epsilon, delta, mesh_density=None, seed=0xB0B5):
    """Build nested greedy cap coverings of the sphere of radius ``r``.

    Level ``k`` uses chordal radius ``(1 + delta)**k / 2`` (clamped to ``r``),
    and ``k0`` is the first level with ``(1 + delta)**k0 >= r / lam``.
    """
    if n not in (2, 3):
        raise UnsupportedDimensionError(f"hierarchies are implemented for n in (2, 3), got {n}")
    if not 0.5 < lam <= 5.0 / 9.0:
        raise DomainError(f"lambda must lie in (1/2, 5/9], got {lam}")
    if not delta > 0 or not epsilon > 0:
        raise DomainError("delta and epsilon must be positive")
    if not r >= 0.5:
        raise DomainError(f"the base level has chordal radius 1/2, so r must be >= 1/2; got {r}")
    mesh_density = int(mesh_density or DEFAULT_MESH[n])
    k0 = hierarchy_depth(r, lam, delta)
    notes = []
    mesh = sphere_mesh(n, mesh_density, seed)
    h = mesh.covering_radius
    levels, nesting = [], []
    for k in range(k0 + 1):
        rho = level_rho(k, delta, r)
        if rho < (1.0 + delta) ** k / 2.0:
            notes.append(f"level {k}: chordal radius {(1.0 + delta) ** k / 2.0} clamped to r = {r}")
        theta = math.asin(min(1.0, rho / r))
        if theta <= h:
            raise DomainError("mesh too coarse for the base level; raise mesh_density")
        idx = _greedy(mesh, theta - h)
        levels.append(Level(rho, [SphericalCap(r, mesh.points[i], rho) for i in idx]))
        if k == 0:
            continue
        prev = levels[k - 1]
        prev_dirs = _directions(prev.caps)
        cos_prev = math.cos(prev.caps[0].angular_radius - h)
        cos_here = math.cos(min(math.pi, theta + h))
        level_nest = []
        for cap in levels[k].caps:
            inside = mesh.points[mesh.points @ cap.center_direction >= cos_here]
            level_nest.append(_subcover(inside, prev_dirs, cos_prev))
        nesting.append(level_nest)
    return CapHierarchy(n, float(r), float(lam), float(delta), float(epsilon), k0, levels,
                        nesting, mesh_density, int(seed), notes)


@dataclass
class HierarchyReport:
    structural_ok: bool
    checks: dict
    table: list
    notes: list

    def to_dict(self):
        return {"structural_ok": self.structural_ok, "checks": dict(self.checks),
                "table": list(self.table), "notes": list(self.notes)}


def verify_hierarchy(h, check_density=None, seed=None):
    """Structural checks (pass/fail) plus the informational count table.

    Pass/fail: base chordal radius 1/2, the diameter schedule, the ``k0``
    condition and its minimality, every level covering the sphere, and every
    cap contained in the union of its listed predecessors. Coverage is tested
    on an independent mesh, twice as dense as the construction mesh by default.

    The counts ``M_k`` against ``((r + epsilon)/rho_k)**n`` and the largest
    nesting list against ``(1 + epsilon)**n`` are reported only: those bounds
    are asymptotic in the dimension.
    """
    check_density = int(check_density or 2 * h.mesh_density)
    seed = _check_seed(h.seed) if seed is None else seed
    U = sphere_mesh(h.n, check_density, seed).points
    checks = {}
    notes = []
    checks["base_rho_half"] = bool(h.levels and abs(h.levels[0].rho - min(0.5, h.r)) <= 1e-12)
    schedule = len(h.levels) == h.k0 + 1
    for k, lv in enumerate(h.levels):
        want = level_rho(k, h.delta, h.r)
        schedule &= abs(lv.rho - want) <= 1e-12 and all(abs(c.rho - want) <= 1e-12 for c in lv.caps)
    checks["diameter_schedule"] = bool(schedule)
    ratio = h.r / h.lam
    checks["k0_condition"] = bool((1.0 + h.delta) ** h.k0 >= ratio)
    checks["k0_minimal"] = bool(h.k0 == 0 or (1.0 + h.delta) ** (h.k0 - 1) < ratio)

    level_ok = True
    for k, lv in enumerate(h.levels):
        holes = int((~covered_by(U, lv.caps)).sum())
        if holes:
            notes.append(f"level {k}: {holes} of {len(U)} check points uncovered")
            level_ok = False
    checks["level_coverage"] = level_ok

    nest_ok = len(h.nesting) == max(len(h.levels) - 1, 0)
    for k in range(1, len(h.levels)):
        if not nest_ok:
            break
        prev, lv = h.levels[k - 1], h.levels[k]
        lists = h.nesting[k - 1]
        if len(lists) != lv.M:
            notes.append(f"level {k}: {len(lists)} nesting lists for {lv.M} caps")
            nest_ok = False
            break
        for m, (cap, members) in enumerate(zip(lv.caps, lists)):
            if not members or min(members) < 0 or max(members) >= prev.M:
                notes.append(f"cap ({k}, {m}): nesting list refers to missing caps")
                nest_ok = False
                continue
            inside = U[cap.contains_directions(U)]
            holes = int((~covered_by(inside, [prev.caps[j] for j in members])).sum())
            if holes:
                notes.append(f"cap ({k}, {m}): {holes} check points not covered by its predecessors")
                nest_ok = False
    checks["nesting_coverage"] = bool(nest_ok)

    table = []
    for k, lv in enumerate(h.levels):
        table.append({
            "k": k,
            "rho": lv.rho,
            "M": lv.M,
            "count_bound": ((h.r + h.epsilon) / lv.rho) ** h.n,
            "max_nesting": max((len(b) for b in h.nesting[k - 1]), default=0) if k else None,
            "nesting_bound": (1.0 + h.epsilon) ** h.n if k else None,
        })
    return HierarchyReport(all(checks.values()), checks, table, notes)
