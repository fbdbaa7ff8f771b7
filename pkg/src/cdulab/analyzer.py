"""Exact c-differential uniformity of a function table.

For c != 1 the uniformity is the maximum, over all shifts a (including
a = 0) and all targets b, of the number of solutions x to

    F(x + a) - c F(x) = b.

delta = 1 classifies the function as PcN, delta = 2 as APcN.  The engine
builds, for each shift a, the full value histogram of the c-derivative
(O(q^2) work per c, vectorized); `oracle_delta` recomputes the same number
by a naive scan with no histogram and exists purely as a cross-check.

c = 1 is rejected: with a != 0 that is the classical derivative, reachable
explicitly through :func:`classical_delta`.
"""

from __future__ import annotations

import os
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import CEqualsOneError
from .funcs import FuncTable

__all__ = [
    "CDiffReport",
    "SpectrumReport",
    "c_derivative",
    "delta_for_c",
    "classical_delta",
    "spectrum",
    "is_pcn_by_permutation",
    "oracle_delta",
    "default_thread_count",
]

# cap on cells processed per vectorized block: one block is A rows of q
_CELL_BUDGET = 1 << 22

THREADS_ENV_VAR = "CDULAB_THREADS"


def default_thread_count() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class CDiffReport:
    """Result of one (F, c) analysis."""

    c: int
    delta: int
    witness: tuple[int, int]  # lexicographically smallest (a, b) attaining delta

    @property
    def classification(self) -> str:
        if self.delta == 1:
            return "PcN"
        if self.delta == 2:
            return "APcN"
        return "Other"


@dataclass(frozen=True)
class SpectrumReport:
    """Per-c reports over a requested c-set, ordered by c index."""

    reports: tuple[CDiffReport, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "reports", tuple(sorted(self.reports, key=lambda r: r.c))
        )

    def __iter__(self):
        return iter(self.reports)

    def __len__(self):
        return len(self.reports)

    def deltas(self) -> dict[int, int]:
        return {r.c: r.delta for r in self.reports}

    def max_delta(self) -> int:
        return max((r.delta for r in self.reports), default=0)


def c_derivative(t: FuncTable, a: int, c: int) -> FuncTable:
    """Table of x -> F(x + a) - c F(x); a = 0 and c = 0 are permitted."""
    f = t.field
    a = f.check_index(int(a))
    c = f.check_index(int(c))
    shifted = t.values[f.shift_rows(np.asarray([a]))[0]]
    minus_cf = f.neg_array(f.mul_scalar(c, t.values))
    return FuncTable(f, f.add_arrays(shifted, minus_cf))


class _Engine:
    """Per-table sweep state: the F(x+a) matrix is shared across c values
    when it fits the cell budget, otherwise sweeps run in row blocks."""

    def __init__(self, t: FuncTable):
        self.table = t
        f = t.field
        self.hoisted: np.ndarray | None = None
        if f.q * f.q <= _CELL_BUDGET:
            rows = f.shift_rows(np.arange(f.q, dtype=np.int64))
            self.hoisted = t.values[rows]

    def max_solutions(
        self, c: int, include_zero_shift: bool
    ) -> tuple[int, tuple[int, int]]:
        """Exact max solution count and its smallest (a, b) witness."""
        f = self.table.field
        q = f.q
        minus_cf = f.neg_array(f.mul_scalar(c, self.table.values))
        best = 0
        witness = (0, 0)
        start = 0 if include_zero_shift else 1
        rows_per_block = q if self.hoisted is not None else max(1, _CELL_BUDGET // q)
        for lo in range(start, q, rows_per_block):
            hi = min(lo + rows_per_block, q)
            nrows = hi - lo
            if self.hoisted is not None:
                fxa = self.hoisted[lo:hi]
            else:
                a_block = np.arange(lo, hi, dtype=np.int64)
                fxa = self.table.values[f.shift_rows(a_block)]
            vals = f.add_arrays(fxa, minus_cf[None, :])
            offsets = np.arange(nrows, dtype=np.int64)[:, None] * q
            counts = np.bincount(
                (vals + offsets).ravel(), minlength=nrows * q
            ).reshape(nrows, q)
            row_max = counts.max(axis=1)
            block_best = int(row_max.max())
            if block_best > best:
                r = int(np.argmax(row_max == block_best))
                b = int(np.argmax(counts[r] == block_best))
                best = block_best
                witness = (lo + r, b)
        return best, witness


_ENGINES: "weakref.WeakKeyDictionary[FuncTable, _Engine]" = weakref.WeakKeyDictionary()


def _engine_for(t: FuncTable) -> _Engine:
    eng = _ENGINES.get(t)
    if eng is None:
        eng = _Engine(t)
        _ENGINES[t] = eng
    return eng


def _max_solutions(
    t: FuncTable, c: int, include_zero_shift: bool
) -> tuple[int, tuple[int, int]]:
    return _engine_for(t).max_solutions(c, include_zero_shift)


def delta_for_c(t: FuncTable, c: int) -> CDiffReport:
    """Exact uniformity for one c != 1, with deterministic witness."""
    c = t.field.check_index(int(c))
    if c == 1:
        raise CEqualsOneError("c = 1 is excluded; use classical_delta instead")
    delta, witness = _max_solutions(t, c, include_zero_shift=True)
    return CDiffReport(c=c, delta=delta, witness=witness)


def classical_delta(t: FuncTable) -> CDiffReport:
    """Classical differential uniformity: c = 1, maximum over a != 0 only."""
    delta, witness = _max_solutions(t, 1, include_zero_shift=False)
    return CDiffReport(c=1, delta=delta, witness=witness)


def spectrum(
    t: FuncTable,
    cs: Iterable[int],
    threads: int | None = None,
    progress: Callable[[CDiffReport, int, int], None] | None = None,
) -> SpectrumReport:
    """delta_for_c for every c in cs; output order is by c index regardless
    of scheduling, so thread count never changes the result."""
    f = t.field
    c_list = sorted({f.check_index(int(c)) for c in cs})
    if any(c == 1 for c in c_list):
        raise CEqualsOneError("the c-set must exclude 1")
    threads = default_thread_count() if threads is None else max(1, threads)
    reports: list[CDiffReport] = []
    if threads == 1 or len(c_list) <= 1:
        for i, c in enumerate(c_list):
            rep = delta_for_c(t, c)
            reports.append(rep)
            if progress is not None:
                progress(rep, i + 1, len(c_list))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            done = 0
            for rep in pool.map(lambda c: delta_for_c(t, c), c_list):
                done += 1
                reports.append(rep)
                if progress is not None:
                    progress(rep, done, len(c_list))
    return SpectrumReport(reports=tuple(reports))


def is_pcn_by_permutation(t: FuncTable, c: int) -> bool:
    """PcN test through the definition: every c-derivative is a permutation."""
    f = t.field
    c = f.check_index(int(c))
    if c == 1:
        raise CEqualsOneError("c = 1 is excluded")
    return all(c_derivative(t, a, c).is_permutation() for a in range(f.q))


def oracle_delta(t: FuncTable, c: int) -> int:
    """Naive recount of delta_for_c: scan (a, b, x) directly, no histogram.

    Test-only cross-check; O(q^3) comparisons, keep q small.
    """
    f = t.field
    c = f.check_index(int(c))
    if c == 1:
        raise CEqualsOneError("c = 1 is excluded")
    q = f.q
    vals = [int(v) for v in t.values]
    best = 0
    for a in range(q):
        row = [
            f.sub(vals[f.add(x, a)], f.mul(c, vals[x])) for x in range(q)
        ]
        for b in range(q):
            n = row.count(b)
            if n > best:
                best = n
    return best
