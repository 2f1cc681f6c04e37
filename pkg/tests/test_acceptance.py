"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Criterion 8's middle band is expected to fail: at n = 3000 the true
existence frequency near p = 0.39 is about 0.12, an order of magnitude above
the calibrated 0.05 band (the band does hold from n = 10000 up; see
test_montecarlo.py).  The criterion is asserted as calibrated anyway rather
than silently rebased.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from ajrlab import axioms, montecarlo as mc, polyhedron as ph, theory as th
from ajrlab.core import (
    ElectionSpec,
    enumerate_committees,
    histogram,
    mask_of,
)
from conftest import grid_profile


def report(criterion: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL: " + "; ".join(failures)
    print(f"[acceptance] {criterion}: {status}")
    assert not failures, f"{criterion}: {failures}"


def make_fig1():
    ballots = []
    for side in range(4):
        ballots += [1 << side, 1 << side]
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 0)]:
        ballots.append((1 << a) | (1 << b))
    from ajrlab.core import ApprovalProfile

    return ApprovalProfile(ElectionSpec(12, 4, 3), tuple(ballots))


def make_core_example():
    from ajrlab.core import ApprovalProfile

    ballots = (
        [mask_of([0, 4])] * 3 + [mask_of([0, 5])] * 3 + [mask_of([1, 2, 3])] * 2
    )
    return ApprovalProfile(ElectionSpec(8, 6, 4), tuple(ballots))


def test_criterion_1_fixture_exactness():
    failures = []
    timings = {}

    start = time.perf_counter()
    square = make_fig1()
    if axioms.ajr_committee_count(square) != (0, None):
        failures.append("square fixture should admit no clean committee")
    for committee in enumerate_committees(square.spec):
        if not axioms.satisfies_core(square, committee):
            failures.append(f"square committee {committee:04b} not core stable")
        witness = axioms.find_ajr_witness(square, committee)
        if witness is None or witness.average != Fraction(1, 2):
            failures.append(f"square witness average != 1/2 for {committee:04b}")
    timings["square"] = time.perf_counter() - start

    start = time.perf_counter()
    grid = grid_profile(3)
    count, first = axioms.ajr_committee_count(grid)
    rows, cols = mask_of([0, 1, 2]), mask_of([3, 4, 5])
    if (count, first) != (2, rows):
        failures.append(f"grid fixture count/first = {(count, first)}")
    clean = [
        c for c in enumerate_committees(grid.spec) if axioms.satisfies_ajr(grid, c)
    ]
    if clean != [rows, cols]:
        failures.append("grid fixture clean committees differ from rows/columns")
    for committee in enumerate_committees(grid.spec):
        if not (
            axioms.satisfies_ejr(grid, committee)
            and axioms.satisfies_pjr(grid, committee)
            and axioms.satisfies_jr(grid, committee)
        ):
            failures.append(f"grid committee {committee:06b} fails a weak axiom")
    timings["grid"] = time.perf_counter() - start

    start = time.perf_counter()
    deviation = make_core_example()
    committee = mask_of([0, 1, 2, 3])
    if not axioms.satisfies_ajr(deviation, committee):
        failures.append("deviation fixture committee should average cleanly")
    if axioms.satisfies_core(deviation, committee):
        failures.append("deviation fixture committee should be blocked")
    alt = mask_of([0, 4, 5])
    improvers = sum(
        1
        for b in deviation.ballots
        if int(b & alt).bit_count() > int(b & committee).bit_count()
    )
    if not (improvers == 6 and deviation.spec.k * improvers >= 3 * deviation.spec.n):
        failures.append("known three-seat blocker no longer blocks")
    timings["deviation"] = time.perf_counter() - start

    for name, elapsed in timings.items():
        if elapsed >= 1.0:
            failures.append(f"{name} fixture took {elapsed:.2f}s >= 1s")
    report("criterion 1 (fixture exactness)", failures)


def test_criterion_2_phase_values():
    failures = []
    start = time.perf_counter()
    table = {
        2: 0.5, 3: 0.451333, 4: 0.38, 5: 0.327, 6: 0.286667,
        7: 0.254857, 8: 0.23, 9: 0.209111, 10: 0.192,
    }
    for k, expected in table.items():
        got = th.upper_transition(k)
        if abs(got - expected) > 1e-3:
            failures.append(f"upper transition k={k}: {got:.6f} vs {expected}")
    for k in range(3, 65):
        p2 = th.upper_transition(k)
        if not (1.0 / k < p2 < min(1.0, 5.0 / k)):
            failures.append(f"bracket violated at k={k}")
    elapsed = time.perf_counter() - start
    if elapsed >= 1.0:
        failures.append(f"phase table took {elapsed:.2f}s >= 1s")
    report("criterion 2 (phase values)", failures)


def test_criterion_3_analytic_identities():
    failures = []
    start = time.perf_counter()
    rng = np.random.default_rng(120)
    for _ in range(200):
        k = int(rng.integers(2, 33))
        x = float(rng.random())
        if abs(th.phase_curve(k, x) - (2.0 - th.stopped_average(k, 1, x, 2))) > 1e-13:
            failures.append(f"curve identity fails at k={k}, x={x}")
            break
    for k in range(2, 17):
        for ell in range(1, k + 1):
            for i in range(1, 100):
                p = i / 100
                if p**ell < ell / k - th.EQ_SLACK:
                    continue
                u = th.worst_group_average(k, ell, p)
                if abs(u - th.worst_group_average_by_max(k, ell, p)) > 1e-12:
                    failures.append(f"max characterization fails at {(k, ell, p)}")
                if ell >= 2 and not u > ell:
                    failures.append(f"level {ell} fails to clear target at {(k, p)}")
        for ell in range(1, k):
            p = (ell / k) ** (1.0 / ell)
            closed = (ell * k ** (ell - 1)) ** (1.0 / ell)
            if abs(th.worst_group_average(k, ell, p) - closed) > 1e-9:
                failures.append(f"threshold closed form fails at {(k, ell)}")
    elapsed = time.perf_counter() - start
    if elapsed >= 10.0:
        failures.append(f"grid took {elapsed:.2f}s >= 10s")
    report("criterion 3 (analytic identities)", failures)


def test_criterion_4_derivatives():
    failures = []
    rng = np.random.default_rng(99)
    h = 1e-6
    for _ in range(500):
        k = int(rng.integers(2, 33))
        stop = int(rng.integers(2, k + 1))
        p = float(rng.uniform(0.02, 0.98))
        numeric = (
            th.stopped_average(k, 1, p + h, stop)
            - th.stopped_average(k, 1, p - h, stop)
        ) / (2 * h)
        analytic = th.stopped_average_deriv(k, stop, p)
        if abs(numeric - analytic) > 1e-5 * max(1.0, abs(analytic)):
            failures.append(f"finite difference mismatch at {(k, stop, p)}")
            break
    for k in range(2, 33):
        if abs(th.stopped_average2_deriv(k, th.dip_point(k))) > 1e-10:
            failures.append(f"dip-point derivative not zero at k={k}")
    report("criterion 4 (derivatives)", failures)


def test_criterion_5_inequality_scans():
    failures = []
    start = time.perf_counter()
    product = th.verify_product_bound(200)
    product_elapsed = time.perf_counter() - start
    if not product.ok:
        failures.append(f"product bound failed at {product.first_failure}")
    if product_elapsed >= 60.0:
        failures.append(f"product bound scan took {product_elapsed:.1f}s >= 60s")
    start = time.perf_counter()
    dip = th.verify_dip_product(1000)
    dip_elapsed = time.perf_counter() - start
    if not dip.ok:
        failures.append(f"dip product failed at {dip.first_failure}")
    if dip_elapsed >= 1.0:
        failures.append(f"dip product scan took {dip_elapsed:.2f}s >= 1s")
    constant = 10 * math.exp(-5) + 25 * math.exp(-10 / 3)
    if abs(constant - 0.959) > 1e-3 or not constant < 1:
        failures.append(f"bracketing constant evaluates to {constant}")
    report("criterion 5 (inequality scans)", failures)


def test_criterion_6_classifier_agreement():
    failures = []
    for k in range(2, 11):
        m = k + 3
        for i in range(201):
            p = i * 0.005
            a = th.classify_by_transition(k, p)
            if a.regime is th.Regime.BOUNDARY:
                continue  # tolerance band around a transition point
            b = th.classify_by_group_averages(k, m, p)
            if a.regime is not b.regime:
                failures.append(f"classifiers disagree at k={k}, p={p}")
    report("criterion 6 (classifier agreement)", failures)


def test_criterion_7_polyhedra():
    failures = []
    m, k, ell, p = 5, 4, 1, 0.25
    neg = ph.build_polyhedron(m, k, p, ph.PolyhedronCase.NEGATIVE, ell)
    pos = ph.build_polyhedron(m, k, p, ph.PolyhedronCase.POSITIVE)
    point = ph.expectation_vector(m, p)
    if not ph.membership(point, neg, mode="cone"):
        failures.append("expectation outside the negative-case cone")
    if not ph.membership(point, pos, mode="cone"):
        failures.append("expectation outside the positive-case cone")
    for n in (10**5, 10**6):
        for case, poly in ((ph.PolyhedronCase.NEGATIVE, neg), (ph.PolyhedronCase.POSITIVE, pos)):
            x = ph.inner_point(m, k, ell, p, n, case)
            if int(x.sum()) != n:
                failures.append(f"{case.value} inner point L1 norm {int(x.sum())} != {n}")
            if not ph.membership(x, poly, mode="full", strict=True):
                failures.append(f"{case.value} inner point not strict at n={n}")
    report("criterion 7 (polyhedra)", failures)


def test_criterion_8_monte_carlo_trichotomy():
    failures = []
    start = time.perf_counter()
    spec = ElectionSpec(3000, 6, 3)
    seed = 20260810

    def frequency(p: float, trials: int) -> float:
        config = mc.SampleConfig(spec=spec, p=p, trials=trials, seed=seed)
        return mc.estimate_existence(config).frequency

    for p in (0.20, 0.25):
        f = frequency(p, 500)
        if f < 0.95:
            failures.append(f"frequency {f:.3f} < 0.95 at p={p}")
    f = frequency(0.39, 500)
    if f > 0.05:
        failures.append(
            f"frequency {f:.3f} > 0.05 at p=0.39 "
            "(known miscalibration: the true value at n=3000 is ~0.12; "
            "the band holds from n=10000 up)"
        )
    f = frequency(0.55, 500)
    if f < 0.95:
        failures.append(f"frequency {f:.3f} < 0.95 at p=0.55")
    f = frequency(1 / 3, 400)
    if not 0.01 < f < 0.99:
        failures.append(f"boundary frequency {f:.3f} outside (0.01, 0.99)")
    elapsed = time.perf_counter() - start
    if elapsed > 300:
        failures.append(f"runtime {elapsed:.0f}s exceeds five minutes")
    report("criterion 8 (Monte Carlo trichotomy)", failures)


def test_criterion_9_oracle_equivalence():
    from conftest import brute_force_violation, random_profile

    failures = []
    rng = np.random.default_rng(314)
    for i in range(200):
        m = int(rng.integers(2, 6))
        k = int(rng.integers(1, m + 1))
        profile = random_profile(rng, int(rng.integers(2, 13)), m, k)
        for committee in enumerate_committees(profile.spec):
            fast = axioms.find_ajr_witness(profile, committee) is not None
            slow = brute_force_violation(profile, committee)
            if fast != slow:
                failures.append(f"instance {i}: witness search disagrees with literal search")
                break
    for i in range(200):
        m = int(rng.integers(2, 7))
        k = int(rng.integers(1, m + 1))
        profile = random_profile(rng, int(rng.integers(1, 41)), m, k)
        winner = axioms.pav_committee(profile)
        if not axioms.satisfies_ejr(profile, winner):
            failures.append(f"instance {i}: harmonic-rule winner fails EJR")
    report("criterion 9 (oracle equivalence)", failures)
