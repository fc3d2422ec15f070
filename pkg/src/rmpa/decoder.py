"""Projection-aggregation decoding with a multi-factor pruning schedule.

The pruning factor gamma * delta_itr^(j-1) * delta_rec^(l-2) sets the
fraction of the n-1 coset projections kept at iteration j and recursion
level l.  (1,1,1) is the unpruned decoder; (q,1,1) and (1,1/d,1) recover
the sparse and iteration-decay variants.  Factors may be exact Fractions
so the ceil() in the projection count is free of float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .codes import CodeParams
from .fod import FodCounter, fht_decode
from .geometry import build_coset_map, clamp_llr, project_llr


@dataclass(frozen=True, eq=False)
class PruningConfig:
    """Pruning factors plus iteration cap; fully determines decoder
    behavior and complexity (early stopping aside)."""

    gamma: Fraction | float = Fraction(1)
    delta_itr: Fraction | float = Fraction(1)
    delta_rec: Fraction | float = Fraction(1)
    n_max: int = 3
    # per-recursion-level projection counts {level: count}; overrides the
    # factor form and is iteration-independent
    explicit_schedule: dict | None = None
    early_stop_theta: float | None = None
    min_sum: bool = False
    # seeded random projection subsets instead of uniform striding
    random_projection_seed: int | None = None

    def __post_init__(self):
        for name in ("gamma", "delta_itr", "delta_rec"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {v}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.explicit_schedule is not None:
            for level, count in self.explicit_schedule.items():
                if level < 2 or count < 1:
                    raise ValueError(
                        f"bad schedule entry level={level} count={count}")
        if self.early_stop_theta is not None and self.early_stop_theta <= 0:
            raise ValueError("early-stop threshold must be positive")


@dataclass
class DecodeResult:
    codeword: np.ndarray
    fods: FodCounter
    iterations_run: int
    converged_early: bool


def preset(name: str, *, q=None, d=None, gamma=None, delta_itr=None,
           delta_rec=None, n_max: int = 3, **kwargs) -> PruningConfig:
    """Named decoder configurations.

    rpa     -> (1, 1, 1)
    srpa    -> (q, 1, 1)
    rpa_sch -> (1, 1/d, 1)
    mfp     -> (gamma, delta_itr, delta_rec)
    """
    one = Fraction(1)
    if name == "rpa":
        return PruningConfig(one, one, one, n_max=n_max, **kwargs)
    if name == "srpa":
        if q is None or not 0 < q <= 1:
            raise ValueError(f"srpa requires q in (0, 1], got {q}")
        return PruningConfig(Fraction(q), one, one, n_max=n_max, **kwargs)
    if name == "rpa_sch":
        if d is None or d < 1:
            raise ValueError(f"rpa_sch requires d >= 1, got {d}")
        return PruningConfig(one, Fraction(1, 1) / Fraction(d), one,
                             n_max=n_max, **kwargs)
    if name == "mfp":
        if gamma is None or delta_itr is None or delta_rec is None:
            raise ValueError("mfp requires gamma, delta_itr, delta_rec")
        return PruningConfig(Fraction(gamma), Fraction(delta_itr),
                             Fraction(delta_rec), n_max=n_max, **kwargs)
    raise ValueError(f"unknown preset {name!r}")


def explicit_schedule_config(counts, r: int, **kwargs) -> PruningConfig:
    """Fixed projection counts per recursion level, given top level first
    (level r down to level 2); single iteration."""
    counts = list(counts)
    if len(counts) != r - 1:
        raise ValueError(f"need {r - 1} schedule entries for r={r}, got {len(counts)}")
    schedule = {r - t: int(c) for t, c in enumerate(counts)}
    return PruningConfig(explicit_schedule=schedule, n_max=1, **kwargs)


def delta(j: int, l: int, cfg: PruningConfig):
    """Fraction of projections kept at iteration j, recursion level l."""
    return cfg.gamma * cfg.delta_itr ** (j - 1) * cfg.delta_rec ** (l - 2)


def num_projections(n: int, j: int, l: int, cfg: PruningConfig,
                    gamma=None) -> int:
    """ceil(pruning factor * (n-1)); gamma overrides cfg.gamma for the
    decayed factor handed to inner recursion levels."""
    if cfg.explicit_schedule is not None:
        np_ = cfg.explicit_schedule[l]
    else:
        g = cfg.gamma if gamma is None else gamma
        np_ = math.ceil(g * cfg.delta_itr ** (j - 1)
                        * cfg.delta_rec ** (l - 2) * (n - 1))
    if not 1 <= np_ <= n - 1:
        raise ValueError(f"projection count {np_} outside [1, {n - 1}]")
    return np_


def select_projection_indices(n: int, np_: int, rng=None) -> list:
    """np_ subspace indices uniformly strided over [1, n-1] (or a seeded
    random subset when rng is given)."""
    if not 1 <= np_ <= n - 1:
        raise ValueError(f"projection count {np_} outside [1, {n - 1}]")
    if rng is not None:
        return sorted(rng.choice(np.arange(1, n), size=np_, replace=False).tolist())
    stride = (n - 1) // np_
    return [t * stride + 1 for t in range(np_)]


def check_convergence(l_old: np.ndarray, l_new: np.ndarray, theta: float) -> bool:
    """True iff every coordinate changed by less than theta * |old value|."""
    l_old = np.asarray(l_old, dtype=np.float64)
    l_new = np.asarray(l_new, dtype=np.float64)
    if l_old.shape != l_new.shape:
        raise ValueError("LLR vectors must have equal length")
    return bool(np.all(np.abs(l_new - l_old) < theta * np.abs(l_old)))


def _decode_batch(llr: np.ndarray, m: int, r: int, g, cfg: PruningConfig,
                  counter: FodCounter, top: bool, rng=None):
    """Core recursion over a batch axis; returns (bits, iterations, converged).
    Early stopping applies only at the top invocation (inner decoders run
    their full iteration budget) and only for batch size 1."""
    if r == 1:
        return fht_decode(llr, counter, level=m), 0, False
    n = 1 << m
    batch = llr.shape[0]
    theta = cfg.early_stop_theta if top else None
    llr = clamp_llr(llr)
    iterations = 0
    converged = False
    for j in range(1, cfg.n_max + 1):
        np_ = num_projections(n, j, r, cfg, gamma=g)
        g_inner = g * cfg.delta_itr ** (j - 1)
        indices = select_projection_indices(n, np_, rng=rng)
        maps = [build_coset_map(m, i) for i in indices]
        projected = np.stack([project_llr(llr, cm, min_sum=cfg.min_sum)
                              for cm in maps])
        flat = projected.reshape(np_ * batch, n // 2)
        chat, _, _ = _decode_batch(flat, m - 1, r - 1, g_inner, cfg,
                                   counter, top=False, rng=rng)
        chat = chat.reshape(np_, batch, n // 2)
        accu = np.zeros((batch, n))
        for t, cm in enumerate(maps):
            signs = 1.0 - 2.0 * chat[t][:, cm.coset_of]
            accu += signs * llr[:, cm.partner_of]
        llr_new = clamp_llr(accu / np_)
        iterations = j
        if theta is not None and check_convergence(llr[0], llr_new[0], theta):
            llr = llr_new
            converged = True
            break
        llr = llr_new
    bits = (llr < 0).astype(np.uint8)
    return bits, iterations, converged


def decode(llr: np.ndarray, params: CodeParams, cfg: PruningConfig,
           counter: FodCounter | None = None) -> DecodeResult:
    """Decode one LLR vector; see module docstring."""
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (params.n,):
        raise ValueError(f"LLR length {llr.shape} does not match n={params.n}")
    if params.r < 1:
        raise ValueError("decoding requires r >= 1")
    if counter is None:
        counter = FodCounter()
    rng = (np.random.default_rng(cfg.random_projection_seed)
           if cfg.random_projection_seed is not None else None)
    bits, iterations, converged = _decode_batch(
        llr[None, :], params.m, params.r, cfg.gamma, cfg, counter,
        top=True, rng=rng)
    return DecodeResult(codeword=bits[0], fods=counter.snapshot(),
                        iterations_run=iterations, converged_early=converged)


def decode_batch(llr: np.ndarray, params: CodeParams, cfg: PruningConfig,
                 counter: FodCounter | None = None) -> np.ndarray:
    """Decode a (batch, n) stack of independent LLR vectors in one pass.
    Numerically identical to per-vector decode(); early stopping is a
    per-vector rule and is not supported here."""
    if cfg.early_stop_theta is not None:
        raise ValueError("batched decoding does not support early stopping")
    llr = np.asarray(llr, dtype=np.float64)
    if llr.ndim != 2 or llr.shape[1] != params.n:
        raise ValueError(f"expected shape (batch, {params.n}), got {llr.shape}")
    if params.r < 1:
        raise ValueError("decoding requires r >= 1")
    if counter is None:
        counter = FodCounter()
    rng = (np.random.default_rng(cfg.random_projection_seed)
           if cfg.random_projection_seed is not None else None)
    bits, _, _ = _decode_batch(llr, params.m, params.r, cfg.gamma, cfg,
                               counter, top=True, rng=rng)
    return bits


def analytic_fod_count(params: CodeParams, cfg: PruningConfig) -> int:
    """First-order-decoding count of a full decode with early stopping off;
    must match the instrumented counter exactly."""
    if params.r < 1:
        raise ValueError("r >= 1 required")
    if cfg.explicit_schedule is not None:
        total = 1
        for level in range(2, params.r + 1):
            total *= cfg.explicit_schedule[level]
        return cfg.n_max * total

    def count(m, r, g):
        if r == 1:
            return 1
        total = 0
        for j in range(1, cfg.n_max + 1):
            np_ = math.ceil(g * cfg.delta_itr ** (j - 1)
                            * cfg.delta_rec ** (r - 2) * ((1 << m) - 1))
            total += np_ * count(m - 1, r - 1, g * cfg.delta_itr ** (j - 1))
        return total

    return count(params.m, params.r, cfg.gamma)


def literal_formula_fod_count(params: CodeParams, cfg: PruningConfig) -> int:
    """The closed-form count as a single sum-of-products over levels.

    Documented for reference only: it applies the iteration decay twice
    (once in the decayed starting factor and once in the pruning function)
    and does not nest the per-level iteration loops, so it disagrees with
    the decoder's actual count; analytic_fod_count is authoritative.
    """
    n = params.n
    total = 0
    for j in range(1, cfg.n_max + 1):
        prod = 1
        for l in range(2, params.r + 1):
            g = cfg.gamma * cfg.delta_itr ** (j - 1)
            factor = g * cfg.delta_itr ** (j - 1) * cfg.delta_rec ** (l - 2)
            prod *= math.ceil(factor * (n // (1 << (params.r - l)) - 1))
        total += prod
    return total
