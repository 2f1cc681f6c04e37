"""Exact checkers for representation axioms on concrete profiles.

This is the brute-force oracle layer: average justified representation (AJR)
with witness extraction, the weaker JR / EJR / PJR axioms, core stability,
an exhaustive proportional-approval-voting rule, and per-level
proportionality profiles.  All satisfaction comparisons are exact — integer
bucket sums plus rationals — so the strict inequalities in the axiom
definitions are never blurred by floating point.

Terminology: a group of at least ceil(ell*n/k) voters that all approve a
common candidate set L of size ell is an ell-cohesive group towards L.  A
committee fails AJR when some such group's average utility is below ell;
the minimum over qualifying groups is attained by the quota-sized set of
lowest-utility approvers of L, because prefix averages of sorted utilities
are nondecreasing (cross-validated against a literal all-subsets search in
the tests).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .core import (
    ApprovalProfile,
    BallotHistogram,
    bits_from_mask,
    enumerate_committees,
    enumerate_subsets,
    histogram,
    popcount_table,
    quota,
)
from .kernels import AjrScanner


@dataclass(frozen=True)
class Witness:
    """A concrete underrepresented cohesive group certifying an AJR violation.

    ``group`` is the common approved candidate set (bitmask, size ``ell``);
    the witnessing voters are the ``group_size`` approvers of ``group`` with
    the smallest utilities, whose combined utility is ``total_utility``.
    """

    ell: int
    group: int
    group_size: int
    total_utility: int
    average: Fraction

    def __post_init__(self):
        if self.average != Fraction(self.total_utility, self.group_size):
            raise ValueError("inconsistent witness average")
        if self.average >= self.ell:
            raise ValueError("witness does not certify a violation")


@dataclass(frozen=True)
class AxiomReport:
    """Axiom verdicts for one committee."""

    ajr: bool
    ejr: bool
    pjr: bool
    jr: bool
    core: bool
    ajr_witness: Witness | None = None

    def to_record(self, m: int) -> str:
        """Flat key/value text record, one field per line."""
        lines = [
            f"ajr={'true' if self.ajr else 'false'}",
            f"ejr={'true' if self.ejr else 'false'}",
            f"pjr={'true' if self.pjr else 'false'}",
            f"jr={'true' if self.jr else 'false'}",
            f"core={'true' if self.core else 'false'}",
        ]
        w = self.ajr_witness
        if w is not None:
            lines += [
                f"witness_ell={w.ell}",
                f"witness_set={bits_from_mask(w.group, m)}",
                f"witness_group_size={w.group_size}",
                f"witness_total={w.total_utility}",
                f"witness_average={w.average}",
            ]
        return "\n".join(lines) + "\n"


def _as_histogram(profile: ApprovalProfile | BallotHistogram) -> BallotHistogram:
    if isinstance(profile, BallotHistogram):
        return profile
    return histogram(profile)


def _bucket_table(hist: BallotHistogram, committee: int) -> np.ndarray:
    """table[u, L] = number of voters approving all of L with utility u.

    Built with a superset-sum transform over the ballot lattice, so every
    candidate set L is available at once.
    """
    m, k = hist.spec.m, hist.spec.k
    size = 1 << m
    util = popcount_table(m)[np.arange(size) & committee].astype(np.int64)
    table = np.zeros((k + 1, size), dtype=np.int64)
    table[util, np.arange(size)] = hist.counts
    for b in range(m):
        bit = 1 << b
        lo = np.nonzero((np.arange(size) & bit) == 0)[0]
        table[:, lo] += table[:, lo | bit]
    return table


class _BucketSource:
    """Per-committee utility buckets for every candidate set.

    Uses the full superset-sum table when it fits in memory, otherwise falls
    back to per-group superset enumeration.
    """

    def __init__(self, hist: BallotHistogram, committee: int):
        self.hist = hist
        self.committee = committee
        self.table = _bucket_table(hist, committee) if hist.spec.m <= 16 else None

    def buckets(self, group: int) -> np.ndarray:
        if self.table is not None:
            return self.table[:, group]
        return _group_buckets(self.hist, group, self.committee)


def _min_fill(buckets: Iterable[int], need: int) -> int:
    """Total utility of the `need` lowest-utility voters in the buckets."""
    total = 0
    for u, b in enumerate(buckets):
        take = b if b < need else need
        total += take * u
        need -= take
        if need == 0:
            break
    return total


def min_average_satisfaction(
    hist: BallotHistogram, committee: int, ell: int, group: int
) -> Fraction | None:
    """Exact average utility of the quota(ell) lowest-utility approvers of
    ``group``, or None when fewer than quota(ell) voters approve it all."""
    if group.bit_count() != ell:
        raise ValueError(f"group has {group.bit_count()} members, expected {ell}")
    buckets = _group_buckets(hist, group, committee)
    q = quota(ell, hist.spec)
    if int(buckets.sum()) < q:
        return None
    return Fraction(_min_fill(buckets.tolist(), q), q)


def _group_buckets(hist: BallotHistogram, group: int, committee: int) -> np.ndarray:
    from .core import utility_multiset

    buckets = np.zeros(hist.spec.k + 1, dtype=np.int64)
    for u, c in utility_multiset(hist, group, committee):
        buckets[u] = c
    return buckets


def _witness_from_source(source: _BucketSource) -> Witness | None:
    spec = source.hist.spec
    for ell in range(1, spec.k + 1):
        q = quota(ell, spec)
        for group in enumerate_subsets(spec.m, ell):
            buckets = source.buckets(group)
            if int(buckets.sum()) < q:
                continue
            total = _min_fill(buckets.tolist(), q)
            if total < ell * q:
                return Witness(ell, group, q, total, Fraction(total, q))
    return None


def find_ajr_witness(
    profile: ApprovalProfile | BallotHistogram, committee: int
) -> Witness | None:
    """First underrepresented cohesive group in (ell ascending, group
    lexicographic) order, or None when the committee provides AJR."""
    hist = _as_histogram(profile)
    return _witness_from_source(_BucketSource(hist, committee))


def satisfies_ajr(profile: ApprovalProfile | BallotHistogram, committee: int) -> bool:
    return find_ajr_witness(profile, committee) is None


def ajr_committee_count(
    profile: ApprovalProfile | BallotHistogram,
    existence_only: bool = False,
) -> tuple[int, int | None]:
    """(number of committees providing AJR, lexicographically first one).

    With ``existence_only`` the scan stops at the first hit, reporting count 1.
    """
    hist = _as_histogram(profile)
    scanner = AjrScanner(hist.spec)
    if existence_only:
        found, first = scanner._scanner.scan(
            np.ascontiguousarray(hist.counts, dtype=np.int64), True
        )
        return found, (first if first >= 0 else None)
    return scanner.count(hist)


def _ejr_from_source(source: _BucketSource) -> bool:
    spec = source.hist.spec
    for ell in range(1, spec.k + 1):
        q = quota(ell, spec)
        for group in enumerate_subsets(spec.m, ell):
            # Approvers with utility <= ell-1 of quota size form a fully
            # unsatisfied cohesive group.
            if int(source.buckets(group)[:ell].sum()) >= q:
                return False
    return True


def satisfies_ejr(profile: ApprovalProfile | BallotHistogram, committee: int) -> bool:
    """Every cohesive group contains a voter with utility at least its level."""
    hist = _as_histogram(profile)
    return _ejr_from_source(_BucketSource(hist, committee))


def _jr_from_source(source: _BucketSource) -> bool:
    spec = source.hist.spec
    q = quota(1, spec)
    return all(
        int(source.buckets(group)[0]) < q for group in enumerate_subsets(spec.m, 1)
    )


def satisfies_jr(profile: ApprovalProfile | BallotHistogram, committee: int) -> bool:
    """The single-candidate restriction of EJR."""
    hist = _as_histogram(profile)
    return _jr_from_source(_BucketSource(hist, committee))


def _pjr_from_source(source: _BucketSource) -> bool:
    spec = source.hist.spec
    for ell in range(1, spec.k + 1):
        q = quota(ell, spec)
        for group in enumerate_subsets(spec.m, ell):
            buckets = source.buckets(group)
            if int(buckets.sum()) < q:
                continue
            if _min_fill(buckets.tolist(), q) < ell:
                return False
    return True


def satisfies_pjr(profile: ApprovalProfile | BallotHistogram, committee: int) -> bool:
    """Every cohesive group's total utility reaches its level (the quota-sized
    minimum-utility subgroup has the smallest total)."""
    hist = _as_histogram(profile)
    return _pjr_from_source(_BucketSource(hist, committee))


def satisfies_core(profile: ApprovalProfile | BallotHistogram, committee: int) -> bool:
    """No coalition can deviate to a proportionally sized committee that makes
    every member strictly better off.

    Checks the counting form: blocked iff some size-s alternative W' has
    k * #{strict improvers} >= s * n.  The improver set is itself a valid
    coalition, and padding W' up to its entitled size never hurts a member.
    """
    hist = _as_histogram(profile)
    spec = hist.spec
    size = 1 << spec.m
    pop = popcount_table(spec.m)
    masks = np.arange(size)
    base_util = pop[masks & committee].astype(np.int64)
    counts = hist.counts
    for s in range(1, spec.k + 1):
        for alt in enumerate_subsets(spec.m, s):
            improvers = int(counts[pop[masks & alt].astype(np.int64) > base_util].sum())
            if spec.k * improvers >= s * spec.n:
                return False
    return True


def _harmonic(limit: int) -> list[Fraction]:
    out = [Fraction(0)]
    for j in range(1, limit + 1):
        out.append(out[-1] + Fraction(1, j))
    return out


def pav_score(profile: ApprovalProfile | BallotHistogram, committee: int) -> Fraction:
    """Harmonic proportional-approval score, exact."""
    hist = _as_histogram(profile)
    spec = hist.spec
    pop = popcount_table(spec.m)
    util = pop[np.arange(1 << spec.m) & committee].astype(np.int64)
    per_utility = np.zeros(spec.k + 1, dtype=np.int64)
    np.add.at(per_utility, util, hist.counts)
    harmonic = _harmonic(spec.k)
    return sum(
        (harmonic[u] * int(c) for u, c in enumerate(per_utility)),
        Fraction(0),
    )


def pav_committee(profile: ApprovalProfile | BallotHistogram) -> int:
    """Exhaustive argmax of the PAV score; lexicographically first on ties."""
    hist = _as_histogram(profile)
    best_score = None
    best = None
    for committee in enumerate_committees(hist.spec):
        score = pav_score(hist, committee)
        if best_score is None or score > best_score:
            best_score, best = score, committee
    return best


def proportionality_profile(
    profile: ApprovalProfile | BallotHistogram, committee: int
) -> dict[int, Fraction | None]:
    """Per-level minimum average satisfaction over all cohesive groups.

    Entry ell is None when no ell-cohesive group exists.  The committee
    provides AJR iff every present entry is at least its level.
    """
    hist = _as_histogram(profile)
    spec = hist.spec
    source = _BucketSource(hist, committee)
    out: dict[int, Fraction | None] = {}
    for ell in range(1, spec.k + 1):
        q = quota(ell, spec)
        best: Fraction | None = None
        for group in enumerate_subsets(spec.m, ell):
            buckets = source.buckets(group)
            if int(buckets.sum()) < q:
                continue
            avg = Fraction(_min_fill(buckets.tolist(), q), q)
            if best is None or avg < best:
                best = avg
        out[ell] = best
    return out


def evaluate_committee(
    profile: ApprovalProfile | BallotHistogram, committee: int
) -> AxiomReport:
    """All axiom verdicts for one committee."""
    hist = _as_histogram(profile)
    source = _BucketSource(hist, committee)
    witness = _witness_from_source(source)
    return AxiomReport(
        ajr=witness is None,
        ejr=_ejr_from_source(source),
        pjr=_pjr_from_source(source),
        jr=_jr_from_source(source),
        core=satisfies_core(hist, committee),
        ajr_witness=witness,
    )
