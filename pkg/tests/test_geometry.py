import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from borsuk_bounds.exceptions import DomainError, UnsupportedDimensionError
from borsuk_bounds.geometry import (Ball, MinimalEnclosingBall, diameter, jung_check, jung_radius,
                                    load_points, min_enclosing_ball, sample_point_set, save_points)


def brute_force_meb(X):
    """Smallest ball among circumballs of all subsets of size <= n+1 that contain X."""
    m, n = X.shape
    best = math.inf
    for k in range(1, min(m, n + 1) + 1):
        for idx in itertools.combinations(range(m), k):
            S = X[list(idx)]
            # centre in the affine hull equidistant from S: c = p0 + V y, solve (V^T V) y = |V|^2 / 2
            V = (S[1:] - S[0]).T
            if k == 1:
                c = S[0]
            else:
                G = V.T @ V
                if abs(np.linalg.det(G)) < 1e-12:
                    continue
                y = np.linalg.solve(G, 0.5 * np.sum(V * V, axis=0))
                c = S[0] + V @ y
            rad = np.linalg.norm(S[0] - c)
            if np.all(np.linalg.norm(X - c, axis=1) <= rad + 1e-10):
                best = min(best, rad)
    return best


def test_diameter_examples(triangle):
    assert diameter([[0.0], [1.0]]) == 1.0
    assert diameter([[0, 0], [1, 0], [0, 1], [1, 1]]) == pytest.approx(1.4142135624, abs=1e-10)
    assert diameter(triangle) == pytest.approx(1.0, abs=1e-15)
    assert diameter([[3.0, 4.0]]) == 0.0


def test_diameter_rejects_nonfinite():
    with pytest.raises(ValueError):
        diameter([[0.0, np.nan]])


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 12), st.integers(1, 4)),
              elements=st.floats(-10, 10)),
       st.floats(0.1, 10), st.integers(0, 2 ** 32 - 1))
def test_diameter_symmetries(X, c, seed):
    rng = np.random.default_rng(seed)
    d = diameter(X)
    assert diameter(X[rng.permutation(len(X))]) == pytest.approx(d, rel=1e-12, abs=1e-12)
    shift = rng.uniform(-5, 5, X.shape[1])
    assert diameter(X + shift) == pytest.approx(d, rel=1e-9, abs=1e-9)
    assert diameter(c * X) == pytest.approx(c * d, rel=1e-12, abs=1e-12)


def test_meb_examples(triangle):
    b = min_enclosing_ball([[1.0, 2.0, 3.0]])
    assert b.radius == 0.0 and np.allclose(b.center, [1, 2, 3])
    b = min_enclosing_ball([[0.0, 0.0], [1.0, 0.0]])
    assert b.radius == pytest.approx(0.5) and np.allclose(b.center, [0.5, 0])
    assert min_enclosing_ball(triangle).radius == pytest.approx(0.5773502692, abs=1e-10)


def test_triangle_radius_against_grid_search(triangle):
    g = np.linspace(0.3, 0.7, 801)
    cx, cy = np.meshgrid(g, g - 0.1)
    C = np.stack([cx.ravel(), cy.ravel()], axis=1)
    far = np.max(np.linalg.norm(C[:, None, :] - triangle[None], axis=2), axis=1)
    grid_best = far.min()
    r = min_enclosing_ball(triangle).radius
    assert r <= grid_best + 1e-12
    assert grid_best - r < 1e-3


@pytest.mark.parametrize("seed", range(40))
def test_meb_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    m = int(rng.integers(1, 9))
    X = rng.normal(size=(m, n))
    assert min_enclosing_ball(X).radius == pytest.approx(brute_force_meb(X), abs=1e-9)


def test_meb_degenerate_inputs():
    # collinear points in 3-D and duplicates
    X = np.array([[0, 0, 0], [1, 1, 1], [2, 2, 2], [2, 2, 2], [0.5, 0.5, 0.5]], float)
    b = min_enclosing_ball(X)
    assert b.radius == pytest.approx(math.sqrt(3.0), abs=1e-12)
    cocircular = np.c_[np.cos(np.arange(12) * np.pi / 6), np.sin(np.arange(12) * np.pi / 6)]
    assert min_enclosing_ball(cocircular).radius == pytest.approx(1.0, abs=1e-12)


def test_meb_dimension_limit():
    with pytest.raises(UnsupportedDimensionError):
        min_enclosing_ball(np.zeros((3, 11)))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.integers(1, 40))
def test_meb_properties(seed, n, m):
    X = np.random.default_rng(seed).normal(size=(m, n))
    est = MinimalEnclosingBall().fit(X)
    b = est.ball_
    d = diameter(X)
    assert np.all(b.contains(X, 1e-12))
    assert d / 2 - 1e-12 <= b.radius <= d + 1e-12
    assert b.radius <= d * jung_radius(n) + 1e-9
    assert len(est.support_) <= n + 1
    sub = min_enclosing_ball(est.support_)
    assert sub.radius == pytest.approx(b.radius, abs=1e-9)
    assert np.allclose(sub.center, b.center, atol=1e-6)


def test_jung_radius_values():
    assert jung_radius(1) == pytest.approx(0.5)
    assert jung_radius(2) == pytest.approx(1 / math.sqrt(3))
    assert jung_radius(3) == pytest.approx(math.sqrt(3 / 8))
    with pytest.raises(DomainError):
        jung_radius(0)
    with pytest.raises(DomainError):
        jung_radius(1.5)


def test_jung_check_regular_simplex_is_tight():
    # regular simplex in R^n with unit edge attains Jung's bound
    for n in range(1, 7):
        E = np.eye(n + 1) / math.sqrt(2.0)
        Q, _ = np.linalg.qr(E[1:].T - E[0][:, None] @ np.ones((1, n)))
        X = (E - E[0]) @ Q[:, :n]
        rep = jung_check(X)
        assert rep.diameter == pytest.approx(1.0, abs=1e-12)
        assert rep.meb_radius == pytest.approx(jung_radius(n), abs=1e-9)
        assert rep.ok


def test_sample_point_set_diameter():
    for kind in ("gaussian", "ball", "sphere"):
        X = sample_point_set(3, 30, 4, kind)
        assert diameter(X) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        sample_point_set(0, 5, 2, "cube")


def test_point_file_roundtrip(tmp_path):
    X = sample_point_set(1, 10, 3)
    path = tmp_path / "pts.csv"
    save_points(path, X, header="ten points")
    assert np.array_equal(load_points(path), X)


@pytest.mark.parametrize("text", ["", "# only a comment\n", "1,2\n3\n", "1,x\n", "1,inf\n"])
def test_point_file_rejects(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(ValueError):
        load_points(path)


def test_ball_validation():
    with pytest.raises(DomainError):
        Ball([0.0], -1.0)
    with pytest.raises(DomainError):
        Ball([np.inf], 1.0)


def test_estimator_predict():
    X = np.array([[0.0, 0.0], [2.0, 0.0]])
    est = MinimalEnclosingBall().fit(X)
    assert est.n_features_in_ == 2
    assert list(est.predict([[1.0, 0.5], [1.0, 1.5]])) == [1, -1]
    with pytest.raises(ValueError):
        est.predict([[1.0, 0.0, 0.0]])
