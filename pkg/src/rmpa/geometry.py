"""One-dimensional subspace cosets, hard/soft projections, and aggregation.

Coordinates are indexed by integers z in [0, 2^m); the subspace B_i = {0, i}
partitions the index set into n/2 cosets {z, z^i}, ordered by their canonical
representative min(z, z^i).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Natural-log LLR saturation.  Beyond exp(-30) the error probabilities are
# numerically irrelevant at the simulated SNRs, and atanh stays finite.
LLR_CLAMP = 30.0


@dataclass(frozen=True)
class CosetMap:
    """Coset structure of B_i = {0, i} inside F_2^m."""

    m: int
    i: int
    reps: np.ndarray      # canonical representatives, ascending (n/2,)
    partners: np.ndarray  # reps ^ i (n/2,)
    coset_of: np.ndarray  # coordinate z -> coset index (n,)
    partner_of: np.ndarray  # coordinate z -> z ^ i (n,)


@lru_cache(maxsize=None)
def build_coset_map(m: int, i: int) -> CosetMap:
    n = 1 << m
    if not 1 <= i <= n - 1:
        raise ValueError(f"subspace index must be in [1, {n - 1}], got {i}")
    z = np.arange(n)
    partner_of = z ^ i
    reps = z[z < partner_of]
    partners = reps ^ i
    coset_of = np.empty(n, dtype=np.int64)
    coset_of[reps] = np.arange(n // 2)
    coset_of[partners] = np.arange(n // 2)
    for a in (reps, partners, coset_of, partner_of):
        a.setflags(write=False)
    return CosetMap(m=m, i=i, reps=reps, partners=partners,
                    coset_of=coset_of, partner_of=partner_of)


def project_hard(c: np.ndarray, cmap: CosetMap) -> np.ndarray:
    """XOR the two members of each coset; length n -> n/2."""
    c = np.asarray(c)
    return c[..., cmap.reps] ^ c[..., cmap.partners]


def boxplus(a, b, min_sum: bool = False):
    """Soft XOR of two LLRs, 2*atanh(tanh(a/2)*tanh(b/2)), evaluated in the
    stable log form ln((1 + e^(a+b)) / (e^a + e^b)).  Result clamped."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if min_sum:
        out = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    else:
        out = np.logaddexp(0.0, a + b) - np.logaddexp(a, b)
    return np.clip(out, -LLR_CLAMP, LLR_CLAMP)


def project_llr(l: np.ndarray, cmap: CosetMap, min_sum: bool = False) -> np.ndarray:
    """Boxplus the two members of each coset; length n -> n/2."""
    l = np.asarray(l, dtype=np.float64)
    return boxplus(l[..., cmap.reps], l[..., cmap.partners], min_sum=min_sum)


def clamp_llr(l: np.ndarray) -> np.ndarray:
    return np.clip(l, -LLR_CLAMP, LLR_CLAMP)


def aggregate(l: np.ndarray, decoded) -> np.ndarray:
    """Average the partner LLRs, sign-flipped by the decoded projection bits.

    decoded is a non-empty list of (subspace index, length-n/2 bit vector);
    output coordinate z is (1/np) * sum_i (1 - 2*chat_i[coset(z)]) * l[z^i].
    """
    l = np.asarray(l, dtype=np.float64)
    if len(decoded) == 0:
        raise ValueError("aggregate requires at least one decoded projection")
    m = int(np.log2(l.shape[-1]))
    accu = np.zeros_like(l)
    for i, chat in decoded:
        cmap = build_coset_map(m, i)
        chat = np.asarray(chat)
        signs = 1.0 - 2.0 * chat[..., cmap.coset_of]
        accu += signs * l[..., cmap.partner_of]
    return accu / len(decoded)
