"""Exponential bases of the known upper bounds on chi(n, b).

chi(n, b) is the least number of parts of diameter strictly less than ``b``
into which every diameter-1 set in R^n can be partitioned. Each estimate has
the form ``(c + o(1))**n``; this module works with the o(1)-free base ``c``.
"""
from dataclasses import dataclass
import enum
import math
import warnings

import numpy as np

from .exceptions import DomainError, InapplicableBoundError

SQRT_3_2 = math.sqrt(1.5)
PERMUTOHEDRON_FACTOR = math.sqrt(math.pi * math.e / 6.0)
ALG_SLACK = 1e-12


class BoundId(enum.IntEnum):
    """Known estimates, valued by their equation number."""

    ORTHANT_2 = 2
    COVER_SQRT2 = 4
    BL_SUB = 5
    ROGERS_ZONG = 6
    PERMUTOHEDRON = 7
    LATTICE = 8
    THEOREM1 = 9

    @classmethod
    def parse(cls, value):
        """Accept an equation number, a member name, or a member."""
        if isinstance(value, cls):
            return value
        text = str(value).strip()
        if text.lstrip("-").isdigit():
            try:
                return cls(int(text))
            except ValueError:
                raise DomainError(f"no bound with equation number {text}") from None
        try:
            return cls[text.upper()]
        except KeyError:
            raise DomainError(f"unknown bound id {value!r}") from None


# candidates for b < 1; ORTHANT_2 only applies at b = 1
COMPARABLE = (BoundId.COVER_SQRT2, BoundId.BL_SUB, BoundId.ROGERS_ZONG,
              BoundId.PERMUTOHEDRON, BoundId.LATTICE, BoundId.THEOREM1)

_BASES = {
    BoundId.COVER_SQRT2: lambda b: math.sqrt(2.0) / b,
    BoundId.BL_SUB: lambda b: SQRT_3_2 / b,
    BoundId.ROGERS_ZONG: lambda b: 1.0 / b + 1.0,
    BoundId.PERMUTOHEDRON: lambda b: PERMUTOHEDRON_FACTOR * (2.0 + 1.0 / b),
    BoundId.LATTICE: lambda b: 2.0 / b + 4.0,
    BoundId.THEOREM1: lambda b: math.sqrt(1.0 / (b * b) + 0.5),
}


@dataclass(frozen=True)
class BoundValue:
    id: BoundId
    b: float
    base: float


def _check_b(b, upper_open=False):
    if not (0.0 < b < 1.0 if upper_open else 0.0 < b <= 1.0):
        interval = "(0, 1)" if upper_open else "(0, 1]"
        raise DomainError(f"b must lie in {interval}, got {b}")


def bound_base(id, b):
    """Base ``c`` of the estimate ``chi(n, b) <= (c + o(1))**n``."""
    id = BoundId.parse(id)
    b = float(b)
    _check_b(b)
    if id is BoundId.ORTHANT_2:
        if b != 1.0:
            raise InapplicableBoundError(
                "the orthant split only guarantees parts of diameter < 1; it needs b = 1")
        return 2.0
    return _BASES[id](b)


def bound_value(id, b):
    id = BoundId.parse(id)
    return BoundValue(id, float(b), bound_base(id, b))


def _bases_array(id, b):
    # vectorised twin of _BASES used by grid scans
    b = np.asarray(b, dtype=np.float64)
    if id is BoundId.COVER_SQRT2:
        return math.sqrt(2.0) / b
    if id is BoundId.BL_SUB:
        return SQRT_3_2 / b
    if id is BoundId.ROGERS_ZONG:
        return 1.0 / b + 1.0
    if id is BoundId.PERMUTOHEDRON:
        return PERMUTOHEDRON_FACTOR * (2.0 + 1.0 / b)
    if id is BoundId.LATTICE:
        return 2.0 / b + 4.0
    if id is BoundId.THEOREM1:
        return np.sqrt(1.0 / (b * b) + 0.5)
    if id is BoundId.ORTHANT_2:
        if np.any(b != 1.0):
            raise InapplicableBoundError("ORTHANT_2 needs b = 1")
        return np.full_like(b, 2.0)
    raise DomainError(f"unknown bound {id}")


@dataclass(frozen=True)
class LowerBoundInfo:
    base_b1: float
    exponent: str
    exponent_note: str


def lower_bound_info():
    """The b = 1 lower bound (2/sqrt(3))**sqrt(2); its exponent is sqrt(n), not n."""
    return LowerBoundInfo(
        base_b1=(2.0 / math.sqrt(3.0)) ** math.sqrt(2.0),
        exponent="sqrt(n)",
        exponent_note="lower bound grows as base**sqrt(n); upper bounds grow as base**n",
    )


def best_bound(b):
    """Smallest base among the estimates valid for ``b``; ties go to the lowest equation number.

    At ``b = 1`` the sqrt(3/2)/b estimate and the sqrt(1/b^2 + 1/2) estimate
    coincide, and the tie rule picks the former.
    """
    b = float(b)
    _check_b(b)
    best = None
    for id in COMPARABLE:
        value = _BASES[id](b)
        if best is None or value < best[1]:
            best = (id, value)
    return best


def crossover(id1, id2, lo=0.01, hi=0.99, grid=10_000, xtol=1e-13):
    """First ``b`` in ``[lo, hi]`` where the two bases are equal, or ``None``.

    The difference is pre-scanned on ``grid`` points; a constant sign means no
    crossing. Multiple sign changes emit a warning and the first root is
    refined by bisection.
    """
    id1, id2 = BoundId.parse(id1), BoundId.parse(id2)
    if not 0.0 < lo < hi <= 1.0:
        raise DomainError(f"need 0 < lo < hi <= 1, got lo={lo}, hi={hi}")
    for id in (id1, id2):
        if id is BoundId.ORTHANT_2:
            raise InapplicableBoundError("ORTHANT_2 is only defined at b = 1")

    def diff(b):
        return _BASES[id1](b) - _BASES[id2](b)

    bs = np.linspace(lo, hi, grid)
    d = _bases_array(id1, bs) - _bases_array(id2, bs)
    s = np.sign(d)
    exact = np.flatnonzero(s == 0)
    changes = np.flatnonzero(s[:-1] * s[1:] < 0)
    n_cross = len(changes) + len(exact)
    if n_cross == 0:
        return None
    if n_cross > 1:
        warnings.warn(f"{id1.name} - {id2.name} changes sign {n_cross} times on "
                      f"[{lo}, {hi}]; reporting the first crossing", RuntimeWarning)
    first_change = changes[0] if len(changes) else grid
    if len(exact) and exact[0] <= first_change:
        return float(bs[exact[0]])
    a, c = bs[first_change], bs[first_change + 1]
    fa = diff(a)
    while c - a > xtol:
        mid = 0.5 * (a + c)
        fm = diff(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            c = mid
    return 0.5 * (a + c)


@dataclass(frozen=True)
class Violation:
    b: float
    claim: str
    lhs: float
    rhs: float


# (smaller, larger): the claim is base[smaller] < base[larger]
DOMINANCE_CLAIMS = (
    (BoundId.THEOREM1, BoundId.BL_SUB),
    (BoundId.THEOREM1, BoundId.ROGERS_ZONG),
    (BoundId.ROGERS_ZONG, BoundId.PERMUTOHEDRON),
    (BoundId.COVER_SQRT2, BoundId.LATTICE),
    (BoundId.BL_SUB, BoundId.LATTICE),
    (BoundId.ROGERS_ZONG, BoundId.LATTICE),
    (BoundId.PERMUTOHEDRON, BoundId.LATTICE),
)


def dominance_check(grid_size=10_000, lo=0.001, hi=0.999):
    """Check the pairwise ordering claims between the estimates on a grid of ``b``.

    Returns the list of violations; empty when every claim holds everywhere.
    """
    if grid_size < 2:
        raise DomainError("grid_size must be at least 2")
    bs = np.linspace(lo, hi, int(grid_size))
    values = {id: _bases_array(id, bs) for id in COMPARABLE}
    out = []
    for small, large in DOMINANCE_CLAIMS:
        bad = np.flatnonzero(~(values[small] < values[large]))
        claim = f"base{small.value} < base{large.value}"
        out.extend(Violation(float(bs[i]), claim, float(values[small][i]),
                             float(values[large][i])) for i in bad)
    return out


def asymptotic_gap(id, b):
    """``base(id, b) - 1/b`` for small ``b``.

    Constant 1 for ROGERS_ZONG, about ``b/4`` for THEOREM1, and
    ``(sqrt(3/2) - 1)/b`` (divergent) for BL_SUB.
    """
    id = BoundId.parse(id)
    b = float(b)
    if not 0.0 < b <= 0.2:
        raise DomainError(f"asymptotic gap is tabulated for b in (0, 0.2], got {b}")
    if id is BoundId.THEOREM1:
        # cancellation-free form of sqrt(1/b^2 + 1/2) - 1/b
        inv = 1.0 / b
        return 0.5 / (math.sqrt(inv * inv + 0.5) + inv)
    if id is BoundId.ROGERS_ZONG:
        return 1.0
    if id is BoundId.BL_SUB:
        return (SQRT_3_2 - 1.0) / b
    raise DomainError(f"asymptotic gap is defined for ROGERS_ZONG, THEOREM1, BL_SUB; got {id.name}")


@dataclass(frozen=True)
class PartsEstimate:
    """``base**n`` with the o(1) term dropped; a heuristic, not a proven count."""

    value: float
    log10: float
    overflow: bool


def parts_estimate(id, b, n):
    base = bound_base(id, b)
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    log10 = n * math.log10(base)
    try:
        value = math.pow(base, n)
    except OverflowError:
        return PartsEstimate(math.inf, log10, True)
    return PartsEstimate(value, log10, False)


def invert_base(id, target):
    """Solve ``bound_base(id, b) == target`` for ``b``."""
    id = BoundId.parse(id)
    if id is BoundId.ORTHANT_2:
        raise InapplicableBoundError("ORTHANT_2 is constant; it cannot be inverted")
    target = float(target)
    at_one = _BASES[id](1.0)
    if not target >= at_one - ALG_SLACK * at_one:
        raise DomainError(f"{id.name} base never reaches {target} for b in (0, 1]; "
                          f"its minimum is {at_one}")
    if not math.isfinite(target):
        raise DomainError("target must be finite")
    if id is BoundId.COVER_SQRT2:
        b = math.sqrt(2.0) / target
    elif id is BoundId.BL_SUB:
        b = SQRT_3_2 / target
    elif id is BoundId.ROGERS_ZONG:
        b = 1.0 / (target - 1.0)
    elif id is BoundId.PERMUTOHEDRON:
        b = 1.0 / (target / PERMUTOHEDRON_FACTOR - 2.0)
    elif id is BoundId.LATTICE:
        b = 2.0 / (target - 4.0)
    else:
        b = 1.0 / math.sqrt(target * target - 0.5)
    return min(b, 1.0)



def alpha_tilde(D):
    """sqrt(D^2/4 - 1/8), the half-separation threshold in the cap-distance argument."""
    D = float(D)
    arg = D * D / 4.0 - 0.125
    if arg < 0:
        raise DomainError(f"alpha_tilde needs D >= 1/sqrt(2), got {D}")
    return math.sqrt(arg)


def theorem1_lambda(D):
    """min(5/9, sqrt(D^2/4 + 1/8) / D), always in (1/2, 5/9]."""
    D = float(D)
    if not D >= 1.0:
        raise DomainError(f"D = 1/b must be >= 1, got {D}")
    return min(5.0 / 9.0, math.sqrt(0.25 + 0.125 / (D * D)))


class Case(enum.Enum):
    CASE_11 = 11
    CASE_12 = 12


def case_threshold(D):
    """Radius separating the two cases: sqrt(alpha_tilde^2 + 1/4) = sqrt(D^2/4 + 1/8)."""
    return math.sqrt(D * D / 4.0 + 0.125)


def theorem1_case(r, D):
    """Which regime a Jung radius ``r`` falls into for ``D = 1/b``.

    CASE_11 (small radius, plain cap covering suffices) when
    ``r <= sqrt(alpha_tilde^2 + 1/4)``, inclusive; CASE_12 otherwise.
    """
    D, r = float(D), float(r)
    if not D >= 1.0:
        raise DomainError(f"D must be >= 1, got {D}")
    if not 0.0 < r <= D / math.sqrt(2.0) + ALG_SLACK:
        raise DomainError(f"r must lie in (0, D/sqrt(2)] = (0, {D / math.sqrt(2.0)}], got {r}")
    return Case.CASE_11 if r <= case_threshold(D) else Case.CASE_12


@dataclass(frozen=True)
class Theorem1Params:
    D: float
    lambda_: float
    alpha_tilde: float
    case: Case
    r: float


def theorem1_params(r, D):
    return Theorem1Params(float(D), theorem1_lambda(D), alpha_tilde(D), theorem1_case(r, D), float(r))


SWEEP_COLUMNS = ("b", "base4", "base5", "base6", "base7", "base8", "base9", "best_id")


def sweep(start, stop, step):
    """Rows of every comparable base on ``b = start, start+step, ..., <= stop``."""
    if step <= 0:
        raise DomainError("step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise DomainError("empty sweep range")
    rows = []
    for i in range(count):
        b = start + i * step
        if abs(b - 1.0) < 1e-12:
            b = 1.0
        _check_b(b)
        best_id, _ = best_bound(b)
        rows.append([b] + [_BASES[id](b) for id in COMPARABLE] + [best_id.name])
    return rows
