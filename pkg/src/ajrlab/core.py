"""Shared substrate for elections: sizes, approval profiles, ballot histograms,
committees, quotas, and the profile file format.

Candidates are indexed 0..m-1 and every candidate subset (ballot, committee,
cohesive-group target) is an m-bit mask with bit i set iff candidate i is in
the subset.  Masks keep subset tests and utility computations O(1) and let a
whole profile compress into a histogram over the 2^m ballot types.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

# The 2^m ballot-type histogram must stay comfortably in memory.
MAX_CANDIDATES = 24


class ProfileFormatError(ValueError):
    """A malformed profile file; ``line`` is the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ElectionSpec:
    """Election sizes: n voters, m candidates, committee size k."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one voter, got n={self.n}")
        if not 1 <= self.m <= MAX_CANDIDATES:
            raise ValueError(f"need 1 <= m <= {MAX_CANDIDATES}, got m={self.m}")
        if not 1 <= self.k <= self.m:
            raise ValueError(f"need 1 <= k <= m, got k={self.k}, m={self.m}")


@dataclass(frozen=True)
class ApprovalProfile:
    """n approval ballots, each an m-bit mask."""

    spec: ElectionSpec
    ballots: tuple[int, ...]

    def __post_init__(self):
        if len(self.ballots) != self.spec.n:
            raise ValueError(
                f"expected {self.spec.n} ballots, got {len(self.ballots)}"
            )
        limit = 1 << self.spec.m
        for i, ballot in enumerate(self.ballots):
            if not 0 <= ballot < limit:
                raise ValueError(f"ballot {i} out of range for m={self.spec.m}")


@dataclass(frozen=True)
class BallotHistogram:
    """Voter counts per ballot type: ``counts[S]`` voters cast exactly mask S."""

    spec: ElectionSpec
    counts: np.ndarray

    def __post_init__(self):
        if self.counts.shape != (1 << self.spec.m,):
            raise ValueError("histogram length must be 2^m")
        self.counts.setflags(write=False)


def mask_of(members: Iterable[int]) -> int:
    """Bitmask of a candidate collection."""
    mask = 0
    for c in members:
        mask |= 1 << c
    return mask


def members_of(mask: int) -> tuple[int, ...]:
    """Sorted candidate indices of a bitmask."""
    out = []
    i = 0
    while mask >> i:
        if (mask >> i) & 1:
            out.append(i)
        i += 1
    return tuple(out)


def mask_from_bits(bits: str) -> int:
    """Mask from a 0/1 string where character j is candidate j's membership."""
    mask = 0
    for j, ch in enumerate(bits):
        if ch == "1":
            mask |= 1 << j
        elif ch != "0":
            raise ValueError(f"character {j!r} is not 0 or 1: {ch!r}")
    return mask


def bits_from_mask(mask: int, m: int) -> str:
    """Inverse of :func:`mask_from_bits` for an m-candidate election."""
    return "".join("1" if (mask >> j) & 1 else "0" for j in range(m))


def parse_profile(text: str) -> ApprovalProfile:
    """Parse the newline-delimited profile format.

    Line 1 is ``"n m k"``; lines 2..n+1 hold exactly m characters from {0,1},
    character j being voter's approval of candidate j.  The file must consist
    of exactly those newline-terminated lines so that serialization after
    parsing reproduces the input byte for byte.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    else:
        raise ProfileFormatError(len(lines), "missing final newline")
    if not lines:
        raise ProfileFormatError(1, "empty file")

    header = lines[0].split(" ")
    if len(header) != 3:
        raise ProfileFormatError(1, f"header must be 'n m k', got {lines[0]!r}")
    try:
        n, m, k = (int(f) for f in header)
    except ValueError:
        raise ProfileFormatError(1, f"header fields must be integers: {lines[0]!r}")
    if n < 1:
        raise ProfileFormatError(1, f"need at least one voter, got n={n}")
    if not 1 <= m <= MAX_CANDIDATES:
        raise ProfileFormatError(1, f"need 1 <= m <= {MAX_CANDIDATES}, got m={m}")
    if k > m:
        raise ProfileFormatError(1, f"committee size k={k} exceeds m={m}")
    if k < 1:
        raise ProfileFormatError(1, f"committee size must be positive, got k={k}")
    if len(lines) != n + 1:
        raise ProfileFormatError(
            len(lines), f"expected {n} ballot lines, found {len(lines) - 1}"
        )

    ballots = []
    for i, row in enumerate(lines[1:], start=2):
        if len(row) != m:
            raise ProfileFormatError(i, f"expected {m} characters, got {len(row)}")
        try:
            ballots.append(mask_from_bits(row))
        except ValueError as exc:
            raise ProfileFormatError(i, str(exc))
    return ApprovalProfile(ElectionSpec(n, m, k), tuple(ballots))


def serialize_profile(profile: ApprovalProfile) -> str:
    """Canonical text form of a profile; inverse of :func:`parse_profile`."""
    spec = profile.spec
    rows = [f"{spec.n} {spec.m} {spec.k}"]
    rows.extend(bits_from_mask(b, spec.m) for b in profile.ballots)
    return "\n".join(rows) + "\n"


def utility(profile: ApprovalProfile, voter: int, committee: int) -> int:
    """Number of committee members the voter approves."""
    if not 0 <= voter < profile.spec.n:
        raise IndexError(f"voter index {voter} out of range for n={profile.spec.n}")
    return (profile.ballots[voter] & committee).bit_count()


def histogram(profile: ApprovalProfile) -> BallotHistogram:
    """Tally voters by exact ballot type."""
    counts = np.bincount(
        np.asarray(profile.ballots, dtype=np.int64), minlength=1 << profile.spec.m
    ).astype(np.int64)
    return BallotHistogram(profile.spec, counts)


def quota(ell: int, spec: ElectionSpec) -> int:
    """Minimum group size justifying ell committee seats: ceil(ell*n/k), exact."""
    if not 1 <= ell <= spec.k:
        raise ValueError(f"need 1 <= ell <= k={spec.k}, got ell={ell}")
    return -(-ell * spec.n // spec.k)


def enumerate_subsets(m: int, size: int) -> Iterator[int]:
    """All size-`size` candidate subsets of 0..m-1, in lexicographic order of
    their sorted member tuples."""
    for combo in itertools.combinations(range(m), size):
        yield mask_of(combo)


def enumerate_committees(spec: ElectionSpec) -> Iterator[int]:
    """All C(m,k) committees, ordered as :func:`enumerate_subsets`."""
    return enumerate_subsets(spec.m, spec.k)


def committee_count(spec: ElectionSpec) -> int:
    return math.comb(spec.m, spec.k)


def utility_multiset(
    hist: BallotHistogram, group: int, committee: int
) -> list[tuple[int, int]]:
    """Utilities of the approvers of every candidate in ``group``.

    Returns (utility, count) pairs with positive count, utility ascending.
    """
    k = hist.spec.k
    buckets = [0] * (k + 1)
    comp = ((1 << hist.spec.m) - 1) & ~group
    counts = hist.counts
    # Supersets of `group` are group|s for s ranging over subsets of its complement.
    s = comp
    while True:
        ballot = group | s
        c = int(counts[ballot])
        if c:
            buckets[(ballot & committee).bit_count()] += c
        if s == 0:
            break
        s = (s - 1) & comp
    return [(u, c) for u, c in enumerate(buckets) if c]


_POP_TABLES: dict[int, np.ndarray] = {}


def popcount_table(m: int) -> np.ndarray:
    """Cached popcount lookup for all m-bit masks (read-only uint8 array)."""
    table = _POP_TABLES.get(m)
    if table is None:
        masks = np.arange(1 << m, dtype=np.uint32)
        table = np.zeros(1 << m, dtype=np.uint8)
        while masks.any():
            table += (masks & 1).astype(np.uint8)
            masks >>= 1
        table.setflags(write=False)
        _POP_TABLES[m] = table
    return table
