"""Hot-loop kernel selection: compiled scan when built, pure Python otherwise.

The scan answers, for a ballot histogram, which committees leave every
cohesive voter group with average satisfaction at least its seat count.
Both backends share exact integer semantics; ``benchmarks/kernel_bench.py``
compares their throughput.
"""

from __future__ import annotations

import numpy as np

from .core import (
    BallotHistogram,
    ElectionSpec,
    enumerate_committees,
    enumerate_subsets,
    popcount_table,
    quota,
)

try:
    from . import _scan_c as _backend

    BACKEND = "c"
except ImportError:  # extension not built
    from . import _scan_py as _backend

    BACKEND = "python"


def backend_name() -> str:
    """'c' when the compiled extension is active, else 'python'."""
    return BACKEND


def _scan_arrays(spec: ElectionSpec):
    committees = np.fromiter(enumerate_committees(spec), dtype=np.int64)
    set_masks: list[int] = []
    set_ells: list[int] = []
    for ell in range(1, spec.k + 1):
        for mask in enumerate_subsets(spec.m, ell):
            set_masks.append(mask)
            set_ells.append(ell)
    quotas = np.array(
        [0] + [quota(ell, spec) for ell in range(1, spec.k + 1)], dtype=np.int64
    )
    return (
        committees,
        np.asarray(set_masks, dtype=np.int64),
        np.asarray(set_ells, dtype=np.int32),
        quotas,
    )


class AjrScanner:
    """Reusable scan for one election size; precomputes committee and
    candidate-set tables once, then runs per-histogram in the selected backend."""

    def __init__(self, spec: ElectionSpec, backend=None):
        self.spec = spec
        committees, set_masks, set_ells, quotas = _scan_arrays(spec)
        impl = _backend if backend is None else backend
        self._scanner = impl.make_scanner(
            spec.m, spec.k, committees, set_masks, set_ells, quotas,
            popcount_table(spec.m),
        )

    def _counts(self, hist) -> np.ndarray:
        counts = hist.counts if isinstance(hist, BallotHistogram) else hist
        return np.ascontiguousarray(counts, dtype=np.int64)

    def count(self, hist) -> tuple[int, int | None]:
        """(number of committees with no underrepresented group, first such
        committee in lexicographic order or None)."""
        found, first = self._scanner.scan(self._counts(hist), False)
        return found, (first if first >= 0 else None)

    def exists(self, hist) -> bool:
        """True iff some committee has no underrepresented group."""
        found, _ = self._scanner.scan(self._counts(hist), True)
        return found > 0
