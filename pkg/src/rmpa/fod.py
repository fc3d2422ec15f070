"""Fast Hadamard transform and ML decoding of first-order RM(m, 1) codes.

One call to fht_decode is one "first-order decoding" (FOD), the unit in
which decoder complexity is counted.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np


@dataclass
class FodCounter:
    """Monotone tally of first-order decodings, broken down by the size
    exponent m' of the decoded subcode."""

    total: int = 0
    per_level: dict = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def record(self, level: int, count: int = 1) -> None:
        with self._lock:
            self.total += count
            self.per_level[level] = self.per_level.get(level, 0) + count

    def snapshot(self) -> "FodCounter":
        with self._lock:
            return FodCounter(total=self.total, per_level=dict(self.per_level))


def fht(values: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis:
    out[a] = sum_z (-1)^<a, z> values[z].  Butterfly, O(n log n)."""
    x = np.array(values, dtype=np.float64)
    n = x.shape[-1]
    if n == 0 or n & (n - 1):
        raise ValueError(f"length must be a power of two, got {n}")
    lead = x.shape[:-1]
    h = 1
    while h < n:
        v = x.reshape(lead + (n // (2 * h), 2, h))
        a = v[..., 0, :] + v[..., 1, :]
        b = v[..., 0, :] - v[..., 1, :]
        v[..., 0, :] = a
        v[..., 1, :] = b
        h *= 2
    return x


def _linear_form_bits(a: np.ndarray, m: int) -> np.ndarray:
    """Bit matrix c[j, z] = <a[j], z> for all z in [0, 2^m)."""
    z = np.arange(1 << m)
    acc = np.zeros(a.shape + z.shape, dtype=np.uint8)
    for bit in range(m):
        acc ^= (((a[..., None] >> bit) & 1) & ((z >> bit) & 1)).astype(np.uint8)
    return acc


def fht_decode(l: np.ndarray, counter: FodCounter | None = None,
               level: int | None = None) -> np.ndarray:
    """ML decoding of RM(m', 1) by Walsh-spectrum argmax.

    Returns the codeword c(z) = u0 ^ <a*, z> with a* = argmax_a |W[a]|
    (ties to the smallest a) and u0 = 0 iff W[a*] >= 0.  Counts one FOD
    per decoded vector.
    """
    l = np.asarray(l, dtype=np.float64)
    single = l.ndim == 1
    batch = l[None, :] if single else l
    n = batch.shape[-1]
    m = n.bit_length() - 1
    if n < 2 or n & (n - 1):
        raise ValueError(f"length must be a power of two >= 2, got {n}")
    w = fht(batch)
    a_star = np.argmax(np.abs(w), axis=-1)
    u0 = (w[np.arange(batch.shape[0]), a_star] < 0).astype(np.uint8)
    bits = _linear_form_bits(a_star, m) ^ u0[:, None]
    if counter is not None:
        counter.record(m if level is None else level, count=batch.shape[0])
    return bits[0] if single else bits
