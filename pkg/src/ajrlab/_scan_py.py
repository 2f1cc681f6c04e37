"""Pure-Python committee scan, the fallback when the compiled kernel is absent.

Same interface and same exact integer semantics as ``_scan_c``; the inner
bucket work is vectorized with numpy per (committee, candidate-set) pair.
All sums stay below 2**53, so float-weighted bincounts are exact.
"""

from __future__ import annotations

import numpy as np


class Scanner:
    def __init__(self, m, k, committees, set_masks, set_ells, quotas, pop):
        self.k = int(k)
        self.committees = [int(w) for w in committees]
        self.quotas = [int(q) for q in quotas]
        self.set_ells = [int(e) for e in set_ells]
        full = (1 << int(m)) - 1
        # Supersets of each candidate set, as index arrays into the histogram.
        supersets = []
        for mask in set_masks:
            mask = int(mask)
            comp = full & ~mask
            subs = [comp]
            s = comp
            while s:
                s = (s - 1) & comp
                subs.append(s)
            supersets.append(np.asarray(subs, dtype=np.int64) | mask)
        self.supersets = supersets
        # Per (committee, set): utilities of those supersets, fixed across scans.
        pop = np.asarray(pop)
        self.utilities = [
            [pop[idx & w].astype(np.int64) for idx in supersets]
            for w in self.committees
        ]

    def _violates(self, counts, wi):
        k = self.k
        utilities = self.utilities[wi]
        for si, idx in enumerate(self.supersets):
            ell = self.set_ells[si]
            q = self.quotas[ell]
            c = counts[idx]
            approvers = int(c.sum())
            if approvers < q:
                continue
            buckets = np.bincount(utilities[si], weights=c, minlength=k + 1)
            cum = np.cumsum(buckets)
            level = int(np.searchsorted(cum, q, side="left"))
            below = cum[level - 1] if level else 0.0
            total = int(np.dot(np.arange(level), buckets[:level]) + level * (q - below))
            if total < ell * q:
                return True
        return False

    def scan(self, counts, existence_only):
        counts = np.asarray(counts, dtype=np.int64)
        found = 0
        first = -1
        for wi, w in enumerate(self.committees):
            if not self._violates(counts, wi):
                found += 1
                if first < 0:
                    first = w
                    if existence_only:
                        break
        return found, first


def make_scanner(m, k, committees, set_masks, set_ells, quotas, pop):
    return Scanner(m, k, committees, set_masks, set_ells, quotas, pop)
