"""Shared fixtures: the three reference elections used throughout, plus a
literal all-subsets search that re-derives violations straight from the
axiom definition (independent of the library's quota-group shortcut)."""

from __future__ import annotations

import numpy as np
import pytest

from ajrlab.core import ApprovalProfile, ElectionSpec, mask_of

# Four candidates on the sides of a square (0=left, 1=top, 2=right,
# 3=bottom); every side has two lone supporters plus a shared corner voter
# with each neighbour.  Each side's four approvers form a cohesive group,
# and any three sides leave the fourth group averaging 1/2.
FIG1_TEXT = (
    "12 4 3\n"
    "1000\n1000\n0100\n0100\n0010\n0010\n0001\n0001\n"
    "1100\n0110\n0011\n1001\n"
)


@pytest.fixture
def fig1_profile() -> ApprovalProfile:
    ballots = []
    for side in range(4):
        ballots += [1 << side, 1 << side]
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 0)]:
        ballots.append((1 << a) | (1 << b))
    return ApprovalProfile(ElectionSpec(12, 4, 3), tuple(ballots))


def grid_profile(k: int) -> ApprovalProfile:
    """k^2 voters on a k-by-k grid over k row and k column candidates
    (rows first); voter (i, j) approves row i and column j."""
    ballots = tuple(
        (1 << i) | (1 << (k + j)) for i in range(k) for j in range(k)
    )
    return ApprovalProfile(ElectionSpec(k * k, 2 * k, k), ballots)


@pytest.fixture
def example1_profile() -> ApprovalProfile:
    return grid_profile(3)


@pytest.fixture
def core_example_profile() -> ApprovalProfile:
    """Eight voters, six candidates 0..3 plus 4, 5: three voters approve
    {0,4}, three approve {0,5}, two approve {1,2,3}.  Committee {0,1,2,3}
    leaves every group proportionally satisfied yet voters 0..5 can deviate
    to {0,4,5}."""
    ballots = (
        [mask_of([0, 4])] * 3 + [mask_of([0, 5])] * 3 + [mask_of([1, 2, 3])] * 2
    )
    return ApprovalProfile(ElectionSpec(8, 6, 4), tuple(ballots))


def random_profile(rng: np.random.Generator, n: int, m: int, k: int) -> ApprovalProfile:
    masks = rng.integers(0, 1 << m, size=n)
    return ApprovalProfile(ElectionSpec(n, m, k), tuple(int(b) for b in masks))


def brute_force_violation(profile: ApprovalProfile, committee: int) -> bool:
    """Definition-level search over ALL voter subsets V: flag the committee
    when some V has k|V| >= ell*n, at least ell common approved candidates,
    and total utility below ell|V|."""
    spec = profile.spec
    n, k = spec.n, spec.k
    ballots = np.asarray(profile.ballots, dtype=np.int64)
    util = np.array([int(b & committee).bit_count() for b in profile.ballots])
    nsub = 1 << n
    members = ((np.arange(nsub)[:, None] >> np.arange(n)) & 1).astype(bool)
    sizes = members.sum(axis=1)
    totals = members @ util
    inter = np.empty(nsub, dtype=np.int64)
    inter[0] = (1 << spec.m) - 1
    for s in range(1, nsub):
        low = s & -s
        inter[s] = inter[s ^ low] & ballots[low.bit_length() - 1]
    common = np.array([int(x).bit_count() for x in inter])
    for ell in range(1, k + 1):
        ok = (k * sizes >= ell * n) & (common >= ell) & (totals < ell * sizes)
        if ok.any():
            return True
    return False
