import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from borsuk_bounds import lemma2, lemma3
from borsuk_bounds.bounds import alpha_tilde
from borsuk_bounds.exceptions import DomainError, RejectedInputError
from borsuk_bounds.lemma3 import CircumscribedSet, SphericalCap


@st.composite
def configs(draw):
    D = draw(st.floats(1.0, 10.0))
    at = alpha_tilde(D)
    r_lo, r_hi = math.sqrt(at * at + 0.25), D / math.sqrt(2.0)
    r = r_lo + draw(st.floats(0.0, 1.0)) * (r_hi - r_lo)
    rho = min(0.5 + draw(st.floats(0.0, 1.0)) * (r - 0.5), r)
    alpha = draw(st.floats(0.0, 1.0)) * at
    return r, rho, alpha, D


def test_cap_angles_examples():
    assert lemma3.cap_angles(1, 0.5, 0) == (0.0, 0.0)
    phi, psi = lemma3.cap_angles(1, 0.8660254038, 0.3535533906)
    assert phi == pytest.approx(0.4205343, abs=1e-7)
    assert psi == pytest.approx(0.9553166, abs=1e-7)
    assert lemma3.cap_angles(1, 1, 0) == (0.0, pytest.approx(math.pi / 2))


def test_cap_angles_errors():
    with pytest.raises(DomainError):
        lemma3.cap_angles(0.5, 0.5, 0)
    with pytest.raises(DomainError):
        lemma3.cap_angles(1, 0.5, 0.9)
    with pytest.raises(DomainError):
        lemma3.cap_angles(1, 0.4, 0.1)


def test_center_distance_high_precision():
    # oracle: sin(phi + psi) through mpmath arcsines
    mp.mp.dps = 30
    rng = np.random.default_rng(2)
    for r, rho, alpha, _ in zip(*lemma3.sample_configs(rng, 50)):
        s = mp.sqrt(mp.mpf(r) ** 2 - mp.mpf(1) / 4)
        phi = mp.asin(mp.mpf(alpha) / s)
        psi = mp.asin(mp.sqrt(mp.mpf(rho) ** 2 - mp.mpf(1) / 4) / s)
        assert lemma3.center_distance(r, rho, alpha) == pytest.approx(
            float(mp.mpf(r) * mp.sin(phi + psi)), abs=1e-13)


def test_chain_check_example():
    # exact alpha_tilde(1); the 7-digit rounding 0.3535534 lies just above it
    rep = lemma3.chain_check(1, math.sqrt(0.75), alpha_tilde(1.0), 1, strict=False)
    assert rep.ratio == pytest.approx(1.1328287, abs=1e-6)
    assert rep.cap3 == pytest.approx(1.2247449, abs=1e-7)
    assert rep.ok
    assert rep.margin == pytest.approx(0.0919, abs=1e-4)
    # r = 1 lies above D/sqrt(2) for D = 1, so the strict hypotheses reject it
    with pytest.raises(DomainError):
        lemma3.chain_check(1, math.sqrt(0.75), alpha_tilde(1.0), 1)
    with pytest.raises(DomainError):
        lemma3.chain_check(1, math.sqrt(0.75), 0.3535534, 1, strict=False)


def test_chain_check_intersecting_branch():
    rep = lemma3.chain_check(0.7, 0.6, 0.05, 1.0)
    assert rep.branch == "intersecting"
    assert rep.ratio <= 1 < math.sqrt(1.5) <= rep.cap3
    assert rep.ok


def test_chain_check_disjoint_branch():
    D = 3.0
    r = D / math.sqrt(2)
    rep = lemma3.chain_check(r, 0.55, 0.9 * alpha_tilde(D), D)
    assert rep.branch == "disjoint" and rep.ok


@settings(max_examples=400, deadline=None)
@given(configs())
def test_chain_properties(c):
    r, rho, alpha, D = c
    assume(r > 0.5)
    rep = lemma3.chain_check(r, rho, alpha, D)
    assert rep.ok
    assert rep.ratio <= math.sqrt(D * D + 0.5) + 1e-12
    d = lemma3.center_distance(r, rho, alpha)
    assert d == pytest.approx(rho * lemma2.f_value(r, rho, alpha), abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(configs())
def test_margin_nonincreasing_in_alpha(c):
    # holds where phi + psi <= pi/2, i.e. alpha^2 + rho^2 <= r^2; see the ledger
    r, rho, _, D = c
    assume(r > 0.5)
    top = min(alpha_tilde(D), math.sqrt(max(r * r - rho * rho, 0.0)))
    alphas = np.linspace(0.0, top, 200)
    margins = [lemma3.chain_check(r, rho, a, D).margin for a in alphas]
    assert np.all(np.diff(margins) <= 1e-12)


def test_margin_can_increase_past_quarter_turn():
    r, rho, D = 2.5, 2.4, 4.0
    lo = math.sqrt(r * r - rho * rho)
    m1 = lemma3.chain_check(r, rho, lo + 0.05, D).margin
    m2 = lemma3.chain_check(r, rho, lo + 0.5, D).margin
    assert m2 > m1


def test_verify_lemma3():
    s = lemma3.verify_lemma3(20_000, seed=3)
    assert s.ok and s.violations == 0
    assert s.max_identity_error <= 1e-10
    assert set(s.to_dict()) >= {"samples", "seed", "violations", "min_margin", "worst_config"}
    assert lemma3.verify_lemma3(20_000, seed=3) == s


def test_sample_configs_valid():
    for c in zip(*lemma3.sample_configs(np.random.default_rng(1), 2000)):
        assert lemma3.config_violations(*c) == []


def test_spherical_cap():
    cap = SphericalCap(2.0, [0.0, 0.0, 1.0], 2.0)
    assert cap.angular_radius == pytest.approx(math.pi / 2)
    U = np.array([[0, 0, 1.0], [1.0, 0, 0], [0, 0, -1.0]])
    assert list(cap.contains_directions(U, slack=1e-12)) == [True, True, False]
    assert np.allclose(cap.center, [0, 0, 2])
    assert cap.to_dict() == {"dir": [0.0, 0.0, 1.0], "rho": 2.0}
    with pytest.raises(DomainError):
        SphericalCap(1.0, [1.0, 1.0], 0.5)
    with pytest.raises(DomainError):
        SphericalCap(1.0, [1.0, 0.0], 1.5)


def test_identity_antipodal_pairs():
    e, f = np.array([1.0, 0, 0]), np.array([0, 0.6, 0.8])
    u, v = np.array([0.3, -1.0, 2.0]), np.array([1.0, 1.0, 1.0])
    xs = CircumscribedSet(np.stack([u + 0.7 * e, u - 0.7 * e]), [0.5, 0.5], u, 0.7)
    ys = CircumscribedSet(np.stack([v + 0.9 * f, v - 0.9 * f]), [0.5, 0.5], v, 0.9)
    assert lemma3.circumsphere_identity(xs, ys) < 1e-14


def test_identity_regular_simplex():
    S = lemma3.simplex_directions(3)
    assert np.allclose(S.sum(axis=0), 0)
    assert np.allclose(np.linalg.norm(S, axis=1), 1)
    w = np.full(4, 0.25)
    xs = CircumscribedSet(S * 0.8, w, np.zeros(3), 0.8)
    ys = CircumscribedSet(S[:, ::-1] * 0.6 + 1.0, w, np.ones(3), 0.6)
    assert lemma3.circumsphere_identity(xs, ys) <= 1e-10


def test_circumscribed_validation():
    with pytest.raises(DomainError):
        CircumscribedSet([[1.0, 0], [-1.0, 0]], [0.7, 0.7], [0, 0], 1.0)
    with pytest.raises(DomainError):
        CircumscribedSet([[1.0, 0], [-1.0, 0]], [0.5, 0.5], [0, 0], 0.9)
    with pytest.raises(DomainError):
        CircumscribedSet([[1.0, 0], [0, 1.0]], [0.5, 0.5], [0, 0], 1.0)
    with pytest.raises(DomainError):
        lemma3.circumsphere_identity(lemma3.sample_circumscribed(0, 2, 1, 3),
                                     lemma3.sample_circumscribed(0, 3, 1, 3))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.integers(2, 8), st.floats(0.5, 3.0))
def test_sampler_outputs_are_valid(seed, dim, count, t):
    xs = lemma3.sample_circumscribed(seed, dim, t, count)
    assert xs.points.shape == (count, dim)
    assert np.all(xs.weights >= 0) and xs.weights.sum() == pytest.approx(1)
    assert np.allclose(np.linalg.norm(xs.points - xs.center, axis=1), t, atol=1e-10)
    ys = lemma3.sample_circumscribed(seed + 1, dim, t / 2 + 0.5, count)
    assert lemma3.circumsphere_identity(xs, ys) <= 1e-10


def test_sampler_special_cases():
    xs = lemma3.sample_circumscribed(0, 3, 1.0, 2)
    assert np.allclose(xs.weights, 0.5)
    xs = lemma3.sample_circumscribed(0, 3, 1.0, 4)
    assert np.allclose(xs.weights, 0.25)


def test_diameter_consequence():
    xs = lemma3.sample_circumscribed(4, 3, 0.6, 5)
    ys = lemma3.sample_circumscribed(5, 3, 0.7, 6)
    cross = np.sqrt(((xs.points[:, None] - ys.points[None]) ** 2).sum(-1)).max()
    rep = lemma3.diameter_consequence(xs, ys, cross)
    assert rep.ok and rep.lhs <= rep.rhs + 1e-10
    assert rep.alpha <= rep.alpha_bound + 1e-10
    assert rep.alpha_bound < alpha_tilde(cross) + 1e-12
    with pytest.raises(RejectedInputError):
        lemma3.diameter_consequence(xs, ys, 0.5 * cross)
    small = lemma3.sample_circumscribed(6, 3, 0.4, 5)
    with pytest.raises(RejectedInputError):
        lemma3.diameter_consequence(small, ys, 10.0)


def test_verify_identity_fixed_shape():
    s = lemma3.verify_identity(100, seed=9, dim=4, m=3, s=7)
    assert s.ok and s.max_residual <= 1e-10 and s.consequence_violations == 0
