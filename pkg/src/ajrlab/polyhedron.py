"""Constraint systems over ballot-type histograms for the boundary regime.

At a transition point the existence probability is governed by whether the
ballot histogram lands in explicit polyhedra in R^(2^m), coordinates indexed
by ballot type.  Two systems are built here:

* the negative case: every committee W is assigned a disjoint target set L_W
  and the constraints force the quota-sized minimum-utility group of L_W
  approvers below its satisfaction target, simultaneously for all W;
* the positive case: for one fixed committee, every feasible level and every
  disjoint target's minimum-utility group meets its target.

Membership of the expectation point in the characteristic cones, plus
integer inner points of L1 norm exactly n, are what the boundary analysis
consumes; both are constructed and evaluated exactly as displayed, at desk
scale.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import mask_of, popcount_table
from .theory import EQ_SLACK, feasible_levels, truncation_point, worst_group_average

DEFAULT_TOL = 1e-9


class PolyhedronCase(enum.Enum):
    NEGATIVE = "neg"
    POSITIVE = "pos"


@dataclass(frozen=True)
class GroupBlock:
    """One (committee, target set, level) triple contributing three rows."""

    committee: int
    group: int
    ell: int
    t_ell: int


@dataclass(frozen=True)
class PolyhedronSpec:
    """Rows normalized to coeffs . x <= constant; ``relations`` preserves the
    displayed direction of each row (1, 2, 3 cycling per group block)."""

    m: int
    k: int
    p: float
    case: PolyhedronCase
    coeffs: np.ndarray
    constants: np.ndarray
    relations: tuple[str, ...]
    blocks: tuple[GroupBlock, ...]

    @property
    def dimension(self) -> int:
        return 1 << self.m

    @property
    def row_count(self) -> int:
        return len(self.relations)


def _rows_for_block(m: int, k: int, block: GroupBlock) -> list[tuple[np.ndarray, str]]:
    """The three displayed rows for one (W, L, ell) block, constants excluded.

    Row 1: approvers of L with utility <= t_ell reach mass ell/k (>=).
    Row 2: approvers of L with utility <= t_ell - 1 stay within ell/k (<=).
    Row 3: total utility of the quota-sized minimum-utility group versus
           ell^2/k of the total mass (<= in the negative case, >= in the
           positive case; the direction is attached by the caller).
    """
    size = 1 << m
    masks = np.arange(size)
    pop = popcount_table(m)
    in_group = (masks & block.group) == block.group
    util = pop[masks & block.committee].astype(np.int64)
    ell_over_k = block.ell / k

    row1 = (in_group & (util <= block.t_ell)).astype(np.float64) - ell_over_k
    row2 = (in_group & (util <= block.t_ell - 1)).astype(np.float64) - ell_over_k
    sel = in_group & (util <= block.t_ell)
    row3 = np.where(sel, util.astype(np.float64), 0.0)
    row3 -= block.t_ell * (sel.astype(np.float64) - ell_over_k)
    row3 -= block.ell * ell_over_k
    return [(row1, ">="), (row2, "<="), (row3, None)]


def build_polyhedron(
    m: int, k: int, p: float, case: PolyhedronCase, ell: int | None = None
) -> PolyhedronSpec:
    """Assemble the constraint system.

    Negative case: one level ``ell`` (required), three rows per committee,
    each committee assigned the lexicographically smallest disjoint target.
    Positive case: committee fixed to {0..k-1}; three rows per (feasible
    level, disjoint target) pair; ``ell`` is ignored.
    """
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < m, got k={k}, m={m}")
    blocks: list[GroupBlock] = []
    if case is PolyhedronCase.NEGATIVE:
        if ell is None:
            raise ValueError("the negative case fixes one level ell")
        if m < k + ell:
            raise ValueError(f"need m >= k + ell, got m={m}, k={k}, ell={ell}")
        if worst_group_average(k, ell, p) is None:
            raise ValueError("no cohesive group forms at this p")
        t_ell = truncation_point(k, ell, p)[0]
        for members in itertools.combinations(range(m), k):
            committee = mask_of(members)
            spare = [c for c in range(m) if c not in members]
            group = mask_of(spare[:ell])
            blocks.append(GroupBlock(committee, group, ell, t_ell))
    else:
        committee = (1 << k) - 1
        for lvl in feasible_levels(k, m, p):
            t_lvl = truncation_point(k, lvl, p)[0]
            for members in itertools.combinations(range(k, m), lvl):
                blocks.append(GroupBlock(committee, mask_of(members), lvl, t_lvl))

    coeffs = []
    constants = []
    relations = []
    for block in blocks:
        rows = _rows_for_block(m, k, block)
        for idx, (row, rel) in enumerate(rows):
            if idx < 2:
                const = 0.0
            elif case is PolyhedronCase.NEGATIVE:
                rel = "<="
                const = -block.t_ell - 1.0 / k
            else:
                rel = ">="
                const = 0.0
            if rel == ">=":
                row = -row
                const = -const
            coeffs.append(row)
            constants.append(const)
            relations.append(rel)
    coeff_arr = np.array(coeffs) if coeffs else np.zeros((0, 1 << m))
    coeff_arr.setflags(write=False)
    const_arr = np.array(constants)
    const_arr.setflags(write=False)
    return PolyhedronSpec(
        m=m,
        k=k,
        p=p,
        case=case,
        coeffs=coeff_arr,
        constants=const_arr,
        relations=tuple(relations),
        blocks=tuple(blocks),
    )


def membership(
    point,
    poly: PolyhedronSpec,
    mode: str = "full",
    strict: bool = False,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Evaluate every row at the point.

    mode 'full' uses the displayed constants, 'cone' zeroes them
    (characteristic cone).  Non-strict allows tol of slack outward; strict
    requires tol of slack inward on every row (inner-point test).
    """
    point = np.asarray(point, dtype=np.float64)
    if point.shape != (poly.dimension,):
        raise ValueError(
            f"point has dimension {point.shape}, polyhedron needs {poly.dimension}"
        )
    if mode not in ("full", "cone"):
        raise ValueError(f"mode must be 'full' or 'cone', got {mode!r}")
    bound = poly.constants if mode == "full" else np.zeros_like(poly.constants)
    residual = poly.coeffs @ point - bound
    if strict:
        return bool(np.all(residual <= -tol))
    return bool(np.all(residual <= tol))


def expectation_vector(m: int, p: float) -> np.ndarray:
    """Ballot-type distribution under independent approval: entry S gets
    p^|S| (1-p)^(m-|S|).  Sums to 1."""
    sizes = popcount_table(m).astype(np.float64)
    return p**sizes * (1.0 - p) ** (m - sizes)


def _round_preserving_total(vector: np.ndarray, total: int) -> np.ndarray:
    """Round entries to integers, changing each by less than 1 and keeping
    the exact sum: floor everything, then hand the deficit to the largest
    fractional parts."""
    floors = np.floor(vector)
    deficit = total - int(floors.sum())
    if not 0 <= deficit <= len(vector):
        raise ValueError("vector does not sum to the requested total")
    order = np.argsort(-(vector - floors), kind="stable")
    out = floors.astype(np.int64)
    out[order[:deficit]] += 1
    return out


def inner_point(
    m: int, k: int, ell: int, p: float, n: int, case: PolyhedronCase
) -> np.ndarray:
    """Integer histogram of L1 norm exactly n strictly inside the polyhedron.

    Both constructions start from n times the expectation and shift a
    constant number of voters, then round while preserving the total:

    * negative: 2^m voters move from the empty ballot to each size-ell
      ballot, handing every assigned target extra zero-utility approvers;
    * positive: k voters move from the empty ballot to every other ballot
      type, then k^2 * 2^m voters per committee member move from each
      committee-disjoint ballot to that ballot plus the member.
    """
    size = 1 << m
    vector = expectation_vector(m, p) * float(n)
    pop = popcount_table(m).astype(np.int64)
    if case is PolyhedronCase.NEGATIVE:
        if worst_group_average(k, ell, p) is None:
            raise ValueError("no cohesive group forms at this p")
        boost = float(size)
        level_sets = pop == ell
        vector[level_sets] += boost
        vector[0] -= boost * math.comb(m, ell)
    else:
        vector[1:] += k
        vector[0] -= k * (size - 1)
        committee = (1 << k) - 1
        disjoint = (np.arange(size) & committee) == 0
        single = pop[np.arange(size) & committee] == 1
        vector[disjoint] -= float(k**3 * size)
        vector[single] += float(k**2 * size)
    if vector.min() < 0:
        raise ValueError(
            f"n={n} too small: ballot type {int(vector.argmin())} would go negative"
        )
    rounded = _round_preserving_total(vector, n)
    poly = build_polyhedron(m, k, p, case, ell if case is PolyhedronCase.NEGATIVE else None)
    if not membership(rounded, poly, mode="full", strict=True):
        raise ValueError(f"n={n} too small for a strict inner point")
    return rounded
