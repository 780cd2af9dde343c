"""Segmented sieve for the von Mangoldt function."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Iterator

import numpy as np

SEGMENT_SIZE = 1 << 20
_INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class LambdaSegment:
    """``values[i] == Lambda(start + i)``."""

    start: int
    values: np.ndarray

    def __len__(self):
        return self.values.size

    @property
    def stop(self) -> int:
        return self.start + self.values.size


def small_primes(limit: int) -> np.ndarray:
    """All primes ``<= limit`` by a plain Eratosthenes sieve."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _sieve_block(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    # Lambda on [lo, hi); base must contain every prime <= isqrt(hi - 1).
    n = hi - lo
    out = np.zeros(n, dtype=float)
    composite = np.zeros(n, dtype=bool)
    if lo <= 1:
        composite[: 2 - lo] = True
    for p in base.tolist():
        pp = p * p
        if pp >= hi:
            break
        first = max(pp, -(-lo // p) * p)
        composite[first - lo::p] = True
        logp = math.log(p)
        q = p
        while q < hi:
            if q >= lo and q >= pp:
                out[q - lo] = logp
            q *= p
    idx = np.flatnonzero(~composite)
    if idx.size:
        out[idx] = np.log((idx + lo).astype(float))
    return out


def sieve_lambda(start: int, length: int) -> LambdaSegment:
    """Exact Lambda(n) for ``start <= n < start + length``.

    Works segment by segment, so the scratch memory is bounded by
    ``SEGMENT_SIZE`` regardless of ``length`` (the returned array is, of
    course, ``length`` long).
    """
    start = int(start)
    length = int(length)
    if start < 1:
        raise ValueError(f"start must be >= 1, got {start}")
    if length < 0:
        raise ValueError(f"length must be >= 0, got {length}")
    if start + length - 1 > _INT64_MAX:
        raise ValueError("range end exceeds 2**63 - 1")
    out = np.zeros(length, dtype=float)
    if length == 0:
        return LambdaSegment(start, out)
    end = start + length
    base = small_primes(math.isqrt(end - 1))
    lo = start
    while lo < end:
        hi = min(lo + SEGMENT_SIZE, end)
        out[lo - start:hi - start] = _sieve_block(lo, hi, base)
        lo = hi
    return LambdaSegment(start, out)


class PrimePowerTable:
    """Lazily sieved prime powers, cached by fixed segment index.

    Segment ``i`` covers ``[i * SEGMENT_SIZE + 1, (i + 1) * SEGMENT_SIZE]``.
    Segments are read-only once built, so many threads can share a table.
    """

    def __init__(self, max_cached_segments: int = 128):
        self._segments: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._lock = threading.Lock()
        self._base = np.zeros(0, dtype=np.int64)
        self._base_limit = 0
        self.max_cached_segments = max_cached_segments

    def _base_primes(self, limit: int) -> np.ndarray:
        with self._lock:
            if limit > self._base_limit:
                self._base_limit = max(limit, 2 * self._base_limit)
                self._base = small_primes(self._base_limit)
            return self._base

    def segment(self, index: int) -> tuple[np.ndarray, np.ndarray]:
        """``(n, Lambda(n))`` for the prime powers in segment ``index``."""
        hit = self._segments.get(index)
        if hit is not None:
            return hit
        lo = index * SEGMENT_SIZE + 1
        hi = lo + SEGMENT_SIZE
        vals = _sieve_block(lo, hi, self._base_primes(math.isqrt(hi - 1)))
        idx = np.flatnonzero(vals)
        entry = ((idx + lo).astype(np.int64), vals[idx])
        entry[0].flags.writeable = False
        entry[1].flags.writeable = False
        with self._lock:
            if len(self._segments) < self.max_cached_segments:
                self._segments[index] = entry
        return entry

    def segments_upto(self, limit: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Yield per-segment ``(n, Lambda(n))`` arrays covering ``n <= limit``."""
        limit = int(limit)
        if limit < 2:
            return
        last = (limit - 1) // SEGMENT_SIZE
        for index in range(last + 1):
            ns, lam = self.segment(index)
            if index == last:
                cut = np.searchsorted(ns, limit, side="right")
                ns, lam = ns[:cut], lam[:cut]
            yield ns, lam

    def arrays(self, limit: int) -> tuple[np.ndarray, np.ndarray]:
        parts = list(self.segments_upto(limit))
        if not parts:
            return np.zeros(0, dtype=np.int64), np.zeros(0)
        return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


_DEFAULT_TABLE = PrimePowerTable()


def default_table() -> PrimePowerTable:
    return _DEFAULT_TABLE


def prime_power_iter(limit: int) -> Iterator[tuple[int, float]]:
    """Yield ``(n, Lambda(n))`` for every prime power ``n <= limit``, increasing."""
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    for ns, lam in _DEFAULT_TABLE.segments_upto(limit):
        yield from zip(ns.tolist(), lam.tolist())


def chebyshev_psi(limit: int) -> float:
    """Chebyshev's psi(limit) = sum of Lambda(n) for n <= limit."""
    return math.fsum(math.fsum(lam) for _, lam in _DEFAULT_TABLE.segments_upto(limit))
