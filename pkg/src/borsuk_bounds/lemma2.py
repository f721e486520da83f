"""The cap-distance ratio f(r, rho, a) and its maximum over rho.

For fixed sphere radius ``r`` and half-separation ``a``, the ratio

    f(r, rho, a) = (r / rho) * (a*sqrt(r^2 - rho^2)
                   + sqrt(r^2 - 1/4 - a^2) * sqrt(rho^2 - 1/4)) / (r^2 - 1/4)

is maximised over ``rho in [1/2, r]`` at ``1/rho*^2 = 1/r^2 + 16a^2/(4a^2 + 1)``
where it equals ``sqrt(4a^2 + 1)``. Parameters are admissible when

    D >= 1,  0 <= a <= alpha_tilde(D),  sqrt(a^2 + 1/4) <= r <= D/sqrt(2),  1/2 <= rho <= r.

The closed forms here are checked against :func:`f_max_numeric`, a
golden-section search that never looks at them.
"""
from dataclasses import dataclass, asdict
import math

import numpy as np

from .bounds import alpha_tilde
from .exceptions import DomainError, NonUnimodalError

RADICAND_SLACK = 1e-12
PARAM_TOL = 1e-12
INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

__all__ = [
    "alpha_tilde", "validate_params", "f_value", "f_partial_rho", "rho_star",
    "f_max_closed", "f_max_numeric", "golden_max", "sample_params", "verify_lemma2",
]


def _sqrt_clamped(x, what):
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < -RADICAND_SLACK):
        raise DomainError(f"negative radicand in {what}: {np.min(x)}")
    return np.sqrt(np.maximum(x, 0.0))


def validate_params(D, a, r, rho):
    """Return the list of violated admissibility clauses (empty when valid)."""
    out = []
    if not D >= 1:
        out.append(f"D = {D} < 1")
        return out
    at = alpha_tilde(D)
    if a < -PARAM_TOL:
        out.append(f"a = {a} < 0")
    if a > at + PARAM_TOL:
        out.append(f"a = {a} > alpha_tilde(D) = {at}")
    r_lo = math.sqrt(max(a, 0.0) ** 2 + 0.25)
    if r < r_lo - PARAM_TOL:
        out.append(f"r = {r} < sqrt(a^2 + 1/4) = {r_lo}")
    r_hi = D / math.sqrt(2.0)
    if r > r_hi + PARAM_TOL:
        out.append(f"r = {r} > D/sqrt(2) = {r_hi}")
    if rho < 0.5 - PARAM_TOL:
        out.append(f"rho = {rho} < 1/2")
    if rho > r + PARAM_TOL:
        out.append(f"rho = {rho} > r = {r}")
    return out


def _f(r, rho, a):
    denom = r * r - 0.25
    if np.any(denom <= 0):
        raise DomainError("f needs r > 1/2")
    num = (a * _sqrt_clamped(r * r - rho * rho, "r^2 - rho^2")
           + _sqrt_clamped(r * r - 0.25 - a * a, "r^2 - 1/4 - a^2")
           * _sqrt_clamped(rho * rho - 0.25, "rho^2 - 1/4"))
    return (r / rho) * num / denom


def f_value(r, rho, a):
    """Evaluate f(r, rho, a). Radicands within -1e-12 of zero are clamped."""
    out = _f(np.asarray(r, dtype=np.float64), np.asarray(rho, dtype=np.float64),
             np.asarray(a, dtype=np.float64))
    return float(out) if out.ndim == 0 else out


def f_partial_rho(r, rho, a):
    """Closed-form derivative of f in rho, valid on the open interval 1/2 < rho < r."""
    r, rho, a = float(r), float(rho), float(a)
    if not 0.5 < rho < r:
        raise DomainError(f"derivative needs 1/2 < rho < r, got rho={rho}, r={r}")
    s1 = math.sqrt(r * r - rho * rho)
    s2 = math.sqrt(rho * rho - 0.25)
    s3 = float(_sqrt_clamped(r * r - 0.25 - a * a, "r^2 - 1/4 - a^2"))
    lead = r / (r * r - 0.25) / (rho * rho * s1 * s2)
    return lead * (0.25 * s3 * s1 - a * r * r * s2)


def rho_star(r, a):
    """Maximiser of f over rho: (1/r^2 + 16a^2/(4a^2+1))**-1/2."""
    r, a = float(r), float(a)
    if a < 0 or r * r < a * a + 0.25 - PARAM_TOL:
        raise DomainError(f"rho_star needs a >= 0 and r >= sqrt(a^2 + 1/4); got r={r}, a={a}")
    inv = 1.0 / (r * r) + 16.0 * a * a / (4.0 * a * a + 1.0)
    return 1.0 / math.sqrt(inv)


def f_max_closed(a):
    return math.sqrt(4.0 * a * a + 1.0)


def golden_max(fun, lo, hi, n_scan=65, xtol=1e-13, plateau_eps=64 * np.finfo(float).eps):
    """Vectorised golden-section maximisation of ``fun`` over ``[lo, hi]``.

    ``lo`` and ``hi`` are arrays (one interval per problem) and ``fun`` maps
    an array of abscissae to values elementwise. A coarse scan first confirms
    the values rise then fall (raising :class:`NonUnimodalError` otherwise) and
    narrows the bracket to the two cells around the best scan point.
    Returns ``(x_hat, f_hat)`` arrays.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=np.float64))
    hi = np.atleast_1d(np.asarray(hi, dtype=np.float64))
    t = np.linspace(0.0, 1.0, n_scan)
    xs = lo[:, None] + (hi - lo)[:, None] * t[None, :]
    fs = fun(xs)
    best = np.argmax(fs, axis=1)

    # unimodality: nondecreasing before the peak, nonincreasing after it
    step = np.diff(fs, axis=1)
    slack = 1e-12 * np.maximum(1.0, np.abs(fs).max(axis=1))[:, None]
    idx = np.arange(n_scan - 1)[None, :]
    before = idx < best[:, None]
    bad = (before & (step < -slack)) | (~before & (step > slack))
    if np.any(bad):
        i = int(np.flatnonzero(bad.any(axis=1))[0])
        raise NonUnimodalError(
            f"function is not unimodal on [{lo[i]}, {hi[i]}]; scan = {fs[i].tolist()}")

    rows = np.arange(len(lo))
    a = xs[rows, np.maximum(best - 1, 0)]
    b = xs[rows, np.minimum(best + 1, n_scan - 1)]
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    while np.any(b - a > xtol):
        left = fc >= fd
        # left: the max lies in [a, d], old c becomes the new d
        # right: the max lies in [c, b], old d becomes the new c
        a_new = np.where(left, a, c)
        b_new = np.where(left, d, b)
        c_new = np.where(left, b_new - INVPHI * (b_new - a_new), d)
        d_new = np.where(left, c, a_new + INVPHI * (b_new - a_new))
        fnew = fun(np.where(left, c_new, d_new))
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
        a, b, c, d = a_new, b_new, c_new, d_new
    x_hat = 0.5 * (a + b)
    cand = np.stack([a, x_hat, b, xs[rows, best]])
    fvals = np.stack([fun(a), fun(x_hat), fun(b), fs[rows, best]])
    pick = np.argmax(fvals, axis=0)
    x_hat, f_hat = cand[pick, rows], fvals[pick, rows]

    # Near a smooth maximum f is flat to rounding over a width ~ sqrt(eps);
    # the midpoint of that plateau locates the argmax far better than any
    # single comparison can. Skipped when the plateau runs into an endpoint.
    lo_br = xs[rows, np.maximum(best - 1, 0)]
    hi_br = xs[rows, np.minimum(best + 1, n_scan - 1)]
    thr = f_hat - plateau_eps * np.maximum(np.abs(f_hat), 1.0)
    left = _edge(fun, lo_br, x_hat, thr, xtol)
    right = _edge(fun, hi_br, x_hat, thr, xtol)
    interior = (fun(lo_br) < thr) & (fun(hi_br) < thr)
    x_hat = np.where(interior, 0.5 * (left + right), x_hat)
    return x_hat, np.maximum(fun(x_hat), f_hat)


def _edge(fun, outside, inside, thr, xtol):
    # bisection for the crossing of fun == thr between `outside` (below) and `inside` (above)
    out, ins = outside.copy(), inside.copy()
    for _ in range(200):
        if not np.any(np.abs(ins - out) > xtol * 1e-3):
            break
        mid = 0.5 * (out + ins)
        above = fun(mid) >= thr
        ins = np.where(above, mid, ins)
        out = np.where(above, out, mid)
    return 0.5 * (out + ins)


def f_max_numeric(r, a, tol=1e-10):
    """Maximise f(r, ., a) over [1/2, r] by golden-section search.

    Independent of :func:`rho_star` and :func:`f_max_closed`. Returns
    ``(rho_hat, f_hat)``.
    """
    if not 1e-12 <= tol <= 1e-3:
        raise DomainError(f"tol must lie in [1e-12, 1e-3], got {tol}")
    r, a = float(r), float(a)
    if r * r < a * a + 0.25 - PARAM_TOL or a < 0:
        raise DomainError(f"need a >= 0 and r >= sqrt(a^2 + 1/4); got r={r}, a={a}")
    x, fx = golden_max(lambda rho: _f(r, rho, a), [0.5], [r], xtol=min(tol, 1e-13))
    return float(x[0]), float(fx[0])


def sample_params(rng, size):
    """Draw admissible ``(D, a, r, rho)`` uniformly over each nested range.

    D ~ U[1, 10], a ~ U[0, alpha_tilde(D)], r ~ U[sqrt(a^2+1/4), D/sqrt(2)],
    rho ~ U[1/2, r].
    """
    D = rng.uniform(1.0, 10.0, size)
    a = rng.uniform(0.0, 1.0, size) * np.sqrt(D * D / 4.0 - 0.125)
    r_lo = np.sqrt(a * a + 0.25)
    r = r_lo + rng.uniform(0.0, 1.0, size) * (D / math.sqrt(2.0) - r_lo)
    rho = 0.5 + rng.uniform(0.0, 1.0, size) * (r - 0.5)
    return D, a, r, rho


@dataclass
class Lemma2Summary:
    samples: int
    seed: int
    max_abs_error: float
    max_rho_error: float
    max_f_excess: float
    worst_case_params: dict
    tol: float
    ok: bool

    def to_dict(self):
        return asdict(self)


def verify_lemma2(samples=10_000, seed=0xB0B5, tol=1e-6, chunk=2048):
    """Monte Carlo comparison of the closed-form maximum with the numeric oracle.

    For each sampled admissible ``(D, a, r, rho)``: the golden-section maximum
    must match ``sqrt(4a^2+1)`` and its argmax must match ``rho_star``, and the
    sampled ``f(r, rho, a)`` must not exceed the maximum.
    """
    rng = np.random.default_rng(seed)
    D, a, r, rho = sample_params(rng, samples)
    f_err = np.empty(samples)
    rho_err = np.empty(samples)
    for s in range(0, samples, chunk):
        sl = slice(s, s + chunk)
        rr, aa = r[sl], a[sl]
        x_hat, f_hat = golden_max(lambda x: _f(rr[:, None] if x.ndim == 2 else rr,
                                                 x, aa[:, None] if x.ndim == 2 else aa),
                                  np.full(len(rr), 0.5), rr)
        closed = np.sqrt(4.0 * aa * aa + 1.0)
        star = 1.0 / np.sqrt(1.0 / (rr * rr) + 16.0 * aa * aa / (4.0 * aa * aa + 1.0))
        f_err[sl] = np.abs(f_hat - closed)
        rho_err[sl] = np.abs(x_hat - star)
    excess = _f(r, rho, a) - np.sqrt(4.0 * a * a + 1.0)
    worst = int(np.argmax(np.maximum(f_err, rho_err)))
    max_f, max_rho = float(f_err.max()), float(rho_err.max())
    return Lemma2Summary(
        samples=int(samples), seed=int(seed), max_abs_error=max_f, max_rho_error=max_rho,
        max_f_excess=float(excess.max()),
        worst_case_params={"D": float(D[worst]), "a": float(a[worst]), "r": float(r[worst]),
                           "rho": float(rho[worst])},
        tol=float(tol),
        ok=bool(max_f <= tol and max_rho <= 1e-6 and excess.max() <= 1e-9),
    )
