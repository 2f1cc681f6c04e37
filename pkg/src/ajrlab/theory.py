"""Closed-form analytics for random approval profiles.

Under independent approval with probability p, the least-satisfied cohesive
group towards a disjoint ell-set has a predictable shape: bucket the group's
approvers by how many of the k winners they also approve (the bucket masses
are truncated binomial terms), fill the quota from the lowest bucket up, and
truncate the last bucket.  This module computes that expected minimum average
satisfaction, the equivalent stopped-average family and its derivatives, the
two phase-transition probabilities bracketing the regime where no committee
can satisfy every group, regime classifiers, and the numeric scans backing
the analytic inequalities.

All quantities are dimensionless (the voter count cancels) and evaluated in
double precision with direct products, which is safe for committee sizes up
to 64; larger k is rejected.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

MAX_COMMITTEE = 64
# Slack protecting exact-equality thresholds (for example p = 1/k) from
# float rounding in cumulative sums.
EQ_SLACK = 1e-15


class Regime(enum.Enum):
    """Existence trichotomy for a committee satisfying every cohesive group."""

    EXISTS_WHP = "ExistsWHP"
    NOT_EXISTS_WHP = "NotExistsWHP"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class TheoryPoint:
    """Analytic quantities at one (k, ell, p): truncation level t_ell, group
    mass n_ell/n, and expected minimum average satisfaction u_ell."""

    k: int
    ell: int
    p: float
    t_ell: int | None
    n_ratio: float | None
    u_ell: float | None

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "ell": self.ell,
            "p": self.p,
            "t_ell": self.t_ell,
            "n_ratio": self.n_ratio,
            "u_ell": self.u_ell,
        }


@dataclass(frozen=True)
class PhaseReport:
    """The two transition probabilities for committee size k, plus the
    stopped-average dip point used to bracket the upper root."""

    k: int
    p1: float
    p2: float
    u2_minimizer: float
    tolerance: float

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "p1_star": self.p1,
            "p2_star": self.p2,
            "p0": self.u2_minimizer,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class RegimeReport:
    """Classification plus, for the group-average classifier, the certifying
    level and its expected minimum average."""

    regime: Regime
    ell: int | None = None
    u_ell: float | None = None


@dataclass(frozen=True)
class ScanResult:
    """Outcome of an inequality scan; falsy when some grid point failed."""

    ok: bool
    checked: int
    first_failure: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _check_kp(k: int, p: float) -> None:
    if not 2 <= k <= MAX_COMMITTEE:
        raise ValueError(f"need 2 <= k <= {MAX_COMMITTEE}, got k={k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"need 0 <= p <= 1, got p={p}")


def utility_mass(k: int, t: int, ell: int, p: float) -> float:
    """Probability that a ballot approves a fixed disjoint ell-set entirely
    and exactly t members of the k-committee: C(k,t) p^(ell+t) (1-p)^(k-t)."""
    if not 0 <= t <= k:
        raise ValueError(f"need 0 <= t <= k={k}, got t={t}")
    return math.comb(k, t) * p ** (ell + t) * (1.0 - p) ** (k - t)


def truncation_point(k: int, ell: int, p: float) -> tuple[int, float] | None:
    """(t_ell, n_ell/n): smallest bucket level whose cumulative approver mass
    reaches ell/k, with that cumulative mass.  None when even the full sum
    p^ell stays below ell/k, i.e. no cohesive group forms in expectation."""
    _check_kp(k, p)
    if not 1 <= ell <= k:
        raise ValueError(f"need 1 <= ell <= k={k}, got ell={ell}")
    threshold = ell / k
    if p**ell < threshold - EQ_SLACK:
        return None
    cum = 0.0
    for t in range(k + 1):
        cum += utility_mass(k, t, ell, p)
        if cum >= threshold - EQ_SLACK:
            return t, cum
    # Rounding pushed the full sum below p^ell; the threshold test above
    # already certified t = k.
    return k, cum


def worst_group_average(k: int, ell: int, p: float) -> float | None:
    """Expected minimum average satisfaction u_ell of a quota-sized cohesive
    group towards a disjoint ell-set; None when no group forms."""
    point = truncation_point(k, ell, p)
    if point is None:
        return None
    t_ell, n_ratio = point
    weighted = sum(t * utility_mass(k, t, ell, p) for t in range(t_ell + 1))
    return (k / ell) * (weighted - t_ell * (n_ratio - ell / k))


def stopped_average(k: int, ell: int, p: float, stop: int) -> float:
    """The stopped-average relaxation: fill as if every bucket up to `stop`
    were used, crediting the shortfall or surplus at utility `stop`."""
    _check_kp(k, p)
    if not 1 <= stop <= k:
        raise ValueError(f"need 1 <= stop <= k={k}, got stop={stop}")
    shortfall = sum(
        (stop - t) * utility_mass(k, t, ell, p) for t in range(stop + 1)
    )
    return stop - (k / ell) * shortfall


def worst_group_average_by_max(k: int, ell: int, p: float) -> float | None:
    """u_ell recovered as the maximum of the stopped averages over all stop
    levels; agrees with :func:`worst_group_average` to 1e-12."""
    if truncation_point(k, ell, p) is None:
        return None
    return max(stopped_average(k, ell, p, stop) for stop in range(1, k + 1))


def stopped_average_deriv(k: int, stop: int, p: float) -> float:
    """Closed-form d/dp of the cohesion-level-1 stopped average at any stop
    level (the level the greedy fill is cut at, not the cohesion level)."""
    _check_kp(k, p)
    if not 2 <= stop <= k:
        raise ValueError(f"need 2 <= stop <= k={k}, got stop={stop}")
    total = 0.0
    for t in range(stop):
        term = math.comb(k, t) * p**t * (1.0 - p) ** (k - t - 1)
        total += term * ((stop - t) * (1.0 - p) - (k - t) * p)
    return -k * total


def stopped_average2_deriv(k: int, p: float) -> float:
    """Specialization of :func:`stopped_average_deriv` at stop level 2:
    k (1-p)^(k-2) (k(k-1)p^2 - 2(1-p)^2)."""
    _check_kp(k, p)
    return k * (1.0 - p) ** (k - 2) * (k * (k - 1) * p * p - 2.0 * (1.0 - p) ** 2)


def dip_point(k: int) -> float:
    """The unique stationary point of the level-2 stopped average in (0,1):
    1 / (1 + sqrt(k(k-1)/2)).  The curve decreases before it and increases
    after it."""
    if not 2 <= k <= MAX_COMMITTEE:
        raise ValueError(f"need 2 <= k <= {MAX_COMMITTEE}, got k={k}")
    return 1.0 / (1.0 + math.sqrt(k * (k - 1) / 2.0))


def phase_curve(k: int, x: float) -> float:
    """k(2x(1-x)^k + k x^2 (1-x)^(k-1)), the expression whose largest root
    of curve = 1 in [0,1] is the upper transition; identically 2 minus the
    level-2 stopped average."""
    _check_kp(k, x)
    return k * (2.0 * x * (1.0 - x) ** k + k * x * x * (1.0 - x) ** (k - 1))


def lower_transition(k: int) -> float:
    """Below 1/k no cohesive group forms, so every committee is safe."""
    if not 2 <= k <= MAX_COMMITTEE:
        raise ValueError(f"need 2 <= k <= {MAX_COMMITTEE}, got k={k}")
    return 1.0 / k


def upper_transition(k: int, tol: float = 1e-12) -> float:
    """Largest root of phase_curve(k, x) = 1 in [0,1], by bisection on
    [dip point, 1] where the level-2 stopped average increases from below 1
    to 2.  For k = 2 the two transitions coincide at 1/2."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if k == 2:
        return 0.5
    lo = dip_point(k)
    hi = 1.0
    # stopped_average(k,1,lo,2) < 1 < stopped_average(k,1,hi,2): bisect the
    # increasing branch.
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if stopped_average(k, 1, mid, 2) < 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def transition_report(k: int, tol: float = 1e-12) -> PhaseReport:
    return PhaseReport(
        k=k,
        p1=lower_transition(k),
        p2=upper_transition(k, tol),
        u2_minimizer=dip_point(k),
        tolerance=tol,
    )


def classify_by_transition(k: int, p: float, tol: float = 1e-9) -> RegimeReport:
    """Trichotomy via the two transition probabilities.  Boundary within tol
    of either; k = 1 is handled by callers (a committee always exists)."""
    _check_kp(k, p)
    p1 = lower_transition(k)
    p2 = upper_transition(k)
    if abs(p - p1) <= tol or abs(p - p2) <= tol:
        return RegimeReport(Regime.BOUNDARY)
    if p < p1 or p > p2:
        return RegimeReport(Regime.EXISTS_WHP)
    return RegimeReport(Regime.NOT_EXISTS_WHP)


def feasible_levels(k: int, m: int, p: float) -> list[int]:
    """Levels ell <= min(k, m-k) whose cohesive groups form in expectation."""
    return [
        ell
        for ell in range(1, min(k, m - k) + 1)
        if p**ell >= ell / k - EQ_SLACK
    ]


def classify_by_group_averages(
    k: int, m: int, p: float, tol: float = 1e-9
) -> RegimeReport:
    """Trichotomy via the expected minimum group averages, level by level.

    Exists when no level is feasible, p = 1, or every feasible level clears
    its target by more than tol; fails when some level falls short by more
    than tol; boundary otherwise.  Reports the certifying level.
    """
    _check_kp(k, p)
    if m <= k:
        raise ValueError(f"need m > k, got m={m}, k={k}")
    levels = feasible_levels(k, m, p)
    if not levels or p == 1.0:
        return RegimeReport(Regime.EXISTS_WHP)
    boundary: tuple[int, float] | None = None
    for ell in levels:
        u = worst_group_average(k, ell, p)
        if u < ell - tol:
            return RegimeReport(Regime.NOT_EXISTS_WHP, ell, u)
        if u <= ell + tol and boundary is None:
            boundary = (ell, u)
    if boundary is not None:
        return RegimeReport(Regime.BOUNDARY, boundary[0], boundary[1])
    return RegimeReport(Regime.EXISTS_WHP)


def theory_point(k: int, ell: int, p: float) -> TheoryPoint:
    point = truncation_point(k, ell, p)
    if point is None:
        return TheoryPoint(k, ell, p, None, None, None)
    t_ell, n_ratio = point
    return TheoryPoint(k, ell, p, t_ell, n_ratio, worst_group_average(k, ell, p))


def overlap_group_average(k: int, ell: int, h: int, p: float) -> float:
    """Expected minimum average satisfaction of an ell-cohesive group whose
    target shares h candidates with the committee.

    Bucket masses become C(k-h, t-h) p^(ell+t-h) (1-p)^(k-t) for utilities
    t = h..k; exceeds the disjoint (ell-h)-level average plus h everywhere
    on the feasible grid.
    """
    _check_kp(k, p)
    if not 1 <= h < ell <= k:
        raise ValueError(f"need 1 <= h < ell <= k={k}, got ell={ell}, h={h}")
    if p**ell < ell / k - EQ_SLACK:
        raise ValueError("no cohesive group forms at this p")
    threshold = ell / k

    def mass(t: int) -> float:
        return math.comb(k - h, t - h) * p ** (ell + t - h) * (1.0 - p) ** (k - t)

    cum = 0.0
    t_star = k
    for t in range(h, k + 1):
        cum += mass(t)
        if cum >= threshold - EQ_SLACK:
            t_star = t
            break
    weighted = sum(t * mass(t) for t in range(h, t_star + 1))
    return (k / ell) * (weighted - t_star * (cum - threshold))


def dip_product(k: int, p: float) -> float:
    """k^2 p^2 (1-p)^(k-2) (1 + (k-2)p); exceeding 1 at the dip point
    certifies that the level-3 stopped average sits below level 2 there."""
    return k * k * p * p * (1.0 - p) ** (k - 2) * (1.0 + (k - 2) * p)


def verify_dip_product(k_max: int = 1000) -> ScanResult:
    """Check dip_product(k, dip_point(k)) > 1 for k = 3..k_max."""
    if k_max < 3:
        raise ValueError("need k_max >= 3")
    for k in range(3, k_max + 1):
        p = 1.0 / (1.0 + math.sqrt(k * (k - 1) / 2.0))
        value = dip_product(k, p)
        if not value > 1.0:
            return ScanResult(False, k - 2, (k, value))
    return ScanResult(True, k_max - 2)


def verify_product_bound(ell_max: int = 200) -> ScanResult:
    """Check C(k,ell) (1 - (ell/k)^(1/ell))^(k-ell) < 1 on the scan grid
    2 <= ell <= ell_max, ceil(1.5 ell) <= k <= 29 ell.

    The product is accumulated one binomial factor and one power factor at a
    time, which keeps every intermediate below about e^100 and avoids
    overflow.  The default grid finishes in seconds; the full grid up to
    ell = 3947 is a long run (hours).
    """
    if ell_max < 2:
        raise ValueError("need ell_max >= 2")
    checked = 0
    for ell in range(2, ell_max + 1):
        for k in range(-(-3 * ell // 2), 29 * ell + 1):
            shrink = 1.0 - (ell / k) ** (1.0 / ell)
            i = np.arange(k - ell, dtype=np.float64)
            factors = (k - i) / (i + 1.0) * shrink
            value = float(np.multiply.reduce(factors))
            checked += 1
            if not value < 1.0:
                return ScanResult(False, checked, (ell, k, value))
    return ScanResult(True, checked)


def verify_transition_bracket(k: int) -> bool:
    """The facts bracketing the upper transition inside (1/k, min(1, 5/k)):
    the phase curve exceeds 1 at 1/k and drops below 1 at min(1, 5/k)."""
    if k < 3:
        raise ValueError("need k >= 3")
    upper = min(1.0, 5.0 / k)
    return phase_curve(k, 1.0 / k) > 1.0 and phase_curve(k, upper) < 1.0


def stopped_average_curve(
    k: int, ell: int, p_values
) -> list[tuple[int, int, float, int, float]]:
    """Rows (k, ell, p, stop, value) for every stop level at every p, the
    tabular form behind the stopped-average family plots."""
    rows = []
    for p in p_values:
        for stop in range(1, k + 1):
            rows.append((k, ell, float(p), stop, stopped_average(k, ell, p, stop)))
    return rows
