"""Generating functions for partition statistics and their enumeration oracles.

Every ``*_series(N)`` returns the statistic as a QSeries in integral
q-exponents, exact for exponents 0 .. N-1.  The oracles count by walking
partitions directly and share nothing with the product/Lambert formulas.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _dense
from .errors import OracleCeilingExceeded
from .numtheory import sigma1_table
from .series import QSeries

DEFAULT_ORACLE_CEILING = 60


class Statistic(enum.Enum):
    P = "p"
    PBAR = "pbar"
    SPT = "spt"
    SPTBAR1 = "sptbar1"
    M2SPT = "m2spt"
    PODD = "podd"


@dataclass(frozen=True)
class PartitionStatistic:
    name: Statistic
    series: QSeries
    oracle_range: int = 0


# -- dense building blocks -------------------------------------------------

def pentagonal(n: int) -> list[int]:
    """Coefficients of prod_{k>=1} (1 - q^k) below q^n, by Euler's pentagonal theorem."""
    out = [0] * n
    k = 0
    while k * (3 * k - 1) // 2 < n:
        sign = -1 if k % 2 else 1
        e1 = k * (3 * k - 1) // 2
        out[e1] = sign
        e2 = k * (3 * k + 1) // 2
        if k and e2 < n:
            out[e2] = sign
        k += 1
    return out


def _dilate_dense(a: list[int], t: int, n: int) -> list[int]:
    out = [0] * n
    for i, c in enumerate(a):
        if i * t >= n:
            break
        out[i * t] = c
    return out


_partition_table: list[int] = []


def _partitions(n: int) -> list[int]:
    # the longest table computed so far serves every shorter request
    global _partition_table
    if len(_partition_table) < n:
        _partition_table, _ = _dense.inverse(pentagonal(n), n)
    return _partition_table[:n]


def _mul(a, b, n):
    return _dense.mul_trunc(list(a), list(b), n)


def _overpartitions(n: int) -> list[int]:
    p = _partitions(n)
    return _mul(_mul(p, p, n), _dilate_dense(pentagonal((n + 1) // 2), 2, n), n)


def _podd(n: int) -> list[int]:
    # prod (1 + q^(2k-1)) / (1 - q^(2k)) = E(q^2) / (E(q) E(q^4))
    p = _partitions(n)
    p4 = _dilate_dense(p[: (n + 3) // 4], 4, n)
    e2 = _dilate_dense(pentagonal((n + 1) // 2), 2, n)
    return _mul(_mul(p, p4, n), e2, n)


def _to_series(coeffs, n: int) -> QSeries:
    return QSeries.from_dense([int(c) for c in coeffs], n)


# -- public generating functions -------------------------------------------

def partition_series(n: int) -> QSeries:
    """sum p(k) q^k, k < n, by inverting the Euler product."""
    _check(n)
    return _to_series(_partitions(n), n)


def overpartition_series(n: int) -> QSeries:
    _check(n)
    return _to_series(_overpartitions(n), n)


def podd_series(n: int) -> QSeries:
    """Partitions without repeated odd parts."""
    _check(n)
    return _to_series(_podd(n), n)


def _spt_bracket(n: int) -> np.ndarray:
    br = np.zeros(n, dtype=object)
    sig = sigma1_table(n)
    br[:] = sig
    k = 1
    while k * (3 * k + 1) // 2 < n:
        sign = -1 if k % 2 else 1
        # k and -k folded: q^{k(3k+1)/2} and q^{k(3k+3)/2}, both over (1-q^k)^2
        for e in (k * (3 * k + 1) // 2, k * (3 * k + 3) // 2):
            if e < n:
                m = len(range(e, n, k))
                br[e::k] += sign * np.arange(1, m + 1, dtype=np.int64)
        k += 1
    return br


def spt_series(n: int) -> QSeries:
    """sum spt(k) q^k, k < n."""
    _check(n)
    br = [int(x) for x in _spt_bracket(n)]
    return _to_series(_mul(_partitions(n), br, n), n)


def _sptbar1_bracket(n: int) -> list[int]:
    br = np.zeros(n, dtype=np.int64)
    # sum_k 2k q^k / (1 - q^{2k})
    for k in range(1, n):
        br[k::2 * k] += 2 * k
    # folded bilateral sum over (1 - q^{2k})(1 - q^{4k})
    k = 1
    while k * k + k < n:
        sign = -1 if k % 2 else 1
        for shift, weight in ((1, 1), (2, 1), (3, 2), (4, 1), (5, 1)):
            e = k * k + shift * k
            if e >= n:
                continue
            m = len(range(e, n, 2 * k))
            # 1/((1-x^2)(1-x^4)) has coefficient floor(i/2)+1 at x^{2i}
            br[e::2 * k] += 4 * sign * weight * (np.arange(m, dtype=np.int64) // 2 + 1)
        k += 1
    return [int(x) for x in br]


def sptbar1_series(n: int) -> QSeries:
    """Smallest parts in overpartitions with odd smallest part."""
    _check(n)
    return _to_series(_mul(_overpartitions(n), _sptbar1_bracket(n), n), n)


def _m2spt_bracket(n: int) -> list[int]:
    br = np.zeros(n, dtype=np.int64)
    sig = sigma1_table((n + 1) // 2)
    for j in range(1, len(sig)):
        if 2 * j < n:
            br[2 * j] += sig[j]
    k = 1
    while 2 * k * k + k < n:
        sign = -1 if k % 2 else 1
        for e in (2 * k * k + k, 2 * k * k + 3 * k):
            if e < n:
                m = len(range(e, n, 2 * k))
                br[e::2 * k] += sign * np.arange(1, m + 1, dtype=np.int64)
        k += 1
    return [int(x) for x in br]


def m2spt_series(n: int) -> QSeries:
    """Smallest parts over partitions with distinct odd parts and even smallest part."""
    _check(n)
    return _to_series(_mul(_podd(n), _m2spt_bracket(n), n), n)


_BUILDERS = {
    Statistic.P: partition_series,
    Statistic.PBAR: overpartition_series,
    Statistic.SPT: spt_series,
    Statistic.SPTBAR1: sptbar1_series,
    Statistic.M2SPT: m2spt_series,
    Statistic.PODD: podd_series,
}


def statistic_series(stat: Statistic | str, n: int) -> QSeries:
    return _BUILDERS[Statistic(stat)](n)


def _check(n):
    if n < 1:
        raise ValueError("precision must be at least 1")


# -- enumeration oracles ---------------------------------------------------

def partitions_of(n: int):
    """Partitions of n as non-increasing tuples."""
    if n == 0:
        yield ()
        return

    def rec(remaining, largest, prefix):
        if remaining == 0:
            yield tuple(prefix)
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            yield from rec(remaining - part, part, prefix)
            prefix.pop()

    yield from rec(n, n, [])


def overpartitions_of(n: int):
    """Overpartitions as (parts, overlined-distinct-values) pairs; exhaustive."""
    for parts in partitions_of(n):
        distinct = sorted(set(parts))
        for mask in range(1 << len(distinct)):
            yield parts, frozenset(v for i, v in enumerate(distinct) if mask >> i & 1)


@lru_cache(maxsize=None)
def _oracle_counts(n: int) -> dict[Statistic, int]:
    counts = dict.fromkeys(Statistic, 0)
    for parts in partitions_of(n):
        counts[Statistic.P] += 1
        distinct = len(set(parts))
        counts[Statistic.PBAR] += 1 << distinct
        if not parts:
            continue
        smallest = parts[-1]
        mult = parts.count(smallest)
        counts[Statistic.SPT] += mult
        if smallest % 2:
            # each of the 2^distinct overlinings keeps the same smallest parts
            counts[Statistic.SPTBAR1] += mult << distinct
        odd = [x for x in parts if x % 2]
        if len(odd) == len(set(odd)):
            counts[Statistic.PODD] += 1
            if smallest % 2 == 0:
                counts[Statistic.M2SPT] += mult
    if n == 0:
        counts[Statistic.PBAR] = 1
        counts[Statistic.PODD] = 1
    return counts


def enumerate_oracle(stat: Statistic | str, n: int,
                     ceiling: int = DEFAULT_ORACLE_CEILING) -> int:
    """Count a statistic by exhaustive generation of the partitions of n."""
    if n > ceiling:
        raise OracleCeilingExceeded(f"n={n} exceeds oracle ceiling {ceiling}")
    if n < 0:
        return 0
    return _oracle_counts(n)[Statistic(stat)]


def sptbar1_exhaustive(n: int) -> int:
    """s-bar-pt1(n) by listing every overpartition (small n only)."""
    total = 0
    for parts, _over in overpartitions_of(n):
        if parts and parts[-1] % 2:
            total += parts.count(parts[-1])
    return total
