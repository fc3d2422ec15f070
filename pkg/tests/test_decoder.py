from fractions import Fraction as F

import numpy as np
import pytest

from rmpa import (CodeParams, FodCounter, PruningConfig, analytic_fod_count,
                  build_coset_map, build_generator, check_convergence, decode,
                  decode_batch, delta, encode, explicit_schedule_config,
                  fht_decode, is_codeword, literal_formula_fod_count,
                  ml_decode_oracle, num_projections, preset,
                  select_projection_indices)
from rmpa.channel import ChannelConfig, llr_from_channel, transmit
from rmpa.geometry import aggregate, clamp_llr, project_llr

MFP_72 = preset("mfp", gamma=F(2, 3), delta_itr=F(1, 4), delta_rec=F(1, 2))
MFP_83 = preset("mfp", gamma=F(3, 4), delta_itr=F(1, 3), delta_rec=F(3, 4))


def test_delta_examples():
    assert delta(1, 2, preset("rpa")) == 1
    assert delta(1, 2, MFP_72) == F(2, 3)
    assert delta(2, 3, MFP_83) == F(3, 16)


def test_num_projections_mfp72_split():
    n = 128
    counts = [num_projections(n, j, 2, MFP_72) for j in (1, 2, 3)]
    assert counts == [85, 22, 6]
    assert sum(counts) == 113


def test_num_projections_unpruned_keeps_all():
    for j in (1, 2, 3):
        assert num_projections(128, j, 2, preset("rpa")) == 127


def test_num_projections_mfp83_top_level():
    assert num_projections(256, 1, 3, MFP_83) == 144


def test_num_projections_explicit_schedule():
    cfg = explicit_schedule_config([4, 8], 3)
    assert num_projections(64, 1, 3, cfg) == 4
    assert num_projections(32, 1, 2, cfg) == 8
    assert cfg.n_max == 1


def test_num_projections_monotone_in_iteration_and_level():
    cfg = MFP_83
    for l in (2, 3):
        nps = [num_projections(256, j, l, cfg) for j in (1, 2, 3)]
        assert nps == sorted(nps, reverse=True)
    for j in (1, 2, 3):
        assert (num_projections(256, j, 3, cfg)
                <= num_projections(256, j, 2, cfg))


def test_select_indices_examples():
    assert select_projection_indices(128, 127) == list(range(1, 128))
    assert select_projection_indices(128, 3) == [1, 43, 85]
    assert select_projection_indices(8, 7) == list(range(1, 8))


def test_select_indices_distinct_in_range():
    for n in (16, 64, 256):
        for np_ in (1, 3, n // 2, n - 1):
            idx = select_projection_indices(n, np_)
            assert len(set(idx)) == np_
            assert all(1 <= i <= n - 1 for i in idx)


def test_select_indices_out_of_range():
    with pytest.raises(ValueError):
        select_projection_indices(16, 0)
    with pytest.raises(ValueError):
        select_projection_indices(16, 16)


def test_select_indices_seeded_random_mode():
    rng1 = np.random.default_rng(99)
    rng2 = np.random.default_rng(99)
    a = select_projection_indices(64, 5, rng=rng1)
    b = select_projection_indices(64, 5, rng=rng2)
    assert a == b
    assert len(set(a)) == 5 and all(1 <= i <= 63 for i in a)


def test_presets():
    cfg = preset("rpa")
    assert (cfg.gamma, cfg.delta_itr, cfg.delta_rec) == (1, 1, 1)
    cfg = preset("srpa", q=F(1, 8))
    assert (cfg.gamma, cfg.delta_itr, cfg.delta_rec) == (F(1, 8), 1, 1)
    cfg = preset("rpa_sch", d=2)
    assert (cfg.gamma, cfg.delta_itr, cfg.delta_rec) == (1, F(1, 2), 1)
    with pytest.raises(ValueError):
        preset("srpa", q=0)
    with pytest.raises(ValueError):
        preset("rpa_sch", d=0.5)
    with pytest.raises(ValueError):
        preset("no_such_decoder")


def test_config_validation():
    with pytest.raises(ValueError):
        PruningConfig(gamma=0)
    with pytest.raises(ValueError):
        PruningConfig(delta_itr=1.5)
    with pytest.raises(ValueError):
        PruningConfig(n_max=0)
    with pytest.raises(ValueError):
        explicit_schedule_config([4], 3)


def test_analytic_counts_match_published_table():
    assert analytic_fod_count(CodeParams(7, 2), preset("rpa")) == 381
    assert analytic_fod_count(CodeParams(8, 3), preset("rpa")) == 291465
    assert analytic_fod_count(CodeParams(7, 2), MFP_72) == 113
    assert analytic_fod_count(CodeParams(8, 3), MFP_83) == 22544


def test_analytic_count_iteration_decay_ceiling():
    # ceil(127) + ceil(63.5) + ceil(31.75); the published table says 221,
    # which implies a floor -- we follow the algorithm's ceiling
    assert analytic_fod_count(CodeParams(7, 2), preset("rpa_sch", d=2)) == 223


def test_analytic_count_explicit_schedule():
    cfg = explicit_schedule_config([4, 8], 3)
    assert analytic_fod_count(CodeParams(6, 3), cfg) == 32


def test_literal_closed_form_disagrees_as_documented():
    # the single-sum closed form double-counts the iteration decay; kept
    # only as documentation of that inconsistency
    assert literal_formula_fod_count(CodeParams(8, 3), MFP_83) == 14004
    assert literal_formula_fod_count(CodeParams(8, 3), MFP_83) != \
        analytic_fod_count(CodeParams(8, 3), MFP_83)


GRID_CONFIGS = [preset("rpa"), preset("srpa", q=F(1, 2)),
                preset("rpa_sch", d=2), MFP_83]


@pytest.mark.parametrize("m", [4, 5, 6, 7])
@pytest.mark.parametrize("r", [2, 3])
@pytest.mark.parametrize("cfg", GRID_CONFIGS)
def test_instrumented_count_equals_analytic(m, r, cfg):
    p = CodeParams(m, r)
    llr = np.random.default_rng(m * 10 + r).normal(size=p.n)
    counter = FodCounter()
    decode(llr, p, cfg, counter)
    assert counter.total == analytic_fod_count(p, cfg)


def test_instrumented_count_rm83_mfp():
    p = CodeParams(8, 3)
    counter = FodCounter()
    decode(np.random.default_rng(0).normal(size=p.n), p, MFP_83, counter)
    assert counter.total == 22544


def test_decode_noiseless_converges_first_iteration():
    p = CodeParams(4, 2)
    gen = build_generator(p)
    cfg = PruningConfig(early_stop_theta=0.05)
    rng = np.random.default_rng(6)
    for _ in range(10):
        c = encode(rng.integers(0, 2, p.k, dtype=np.uint8), gen)
        res = decode(20.0 * (1.0 - 2.0 * c), p, cfg)
        assert np.array_equal(res.codeword, c)
        assert res.converged_early
        assert res.iterations_run == 1


def test_decode_first_order_is_fht():
    p = CodeParams(4, 1)
    llr = np.random.default_rng(1).normal(size=16)
    res = decode(llr, p, preset("rpa"))
    assert np.array_equal(res.codeword, fht_decode(llr))
    assert res.fods.total == 1
    assert is_codeword(res.codeword, p)


def test_decode_matches_ml_oracle_at_high_snr():
    p = CodeParams(4, 2)
    gen = build_generator(p)
    cfg = PruningConfig(n_max=1)
    ch = ChannelConfig(ebno_db=6.0, rate=p.rate)
    rng = np.random.default_rng(12)
    agree = 0
    frames = 500
    for _ in range(frames):
        c = encode(rng.integers(0, 2, p.k, dtype=np.uint8), gen)
        llr = llr_from_channel(transmit(c, ch, rng), ch)
        got = decode(llr, p, cfg).codeword
        if np.array_equal(got, ml_decode_oracle(llr, p)):
            agree += 1
    assert agree >= 0.99 * frames


def test_check_convergence_examples():
    l = np.array([1.0, -2.0, 3.0])
    assert check_convergence(l, l, 0.05)
    assert not check_convergence(np.array([0.0, 1.0]), np.array([0.1, 1.0]), 0.05)
    assert not check_convergence(np.array([10.0, -10.0]),
                                 np.array([10.4, -10.6]), 0.05)
    assert check_convergence(np.array([10.0, -10.0]),
                             np.array([10.4, -10.4]), 0.05)


def test_decode_deterministic():
    p = CodeParams(5, 2)
    llr = np.random.default_rng(3).normal(size=32)
    a = decode(llr, p, MFP_72)
    b = decode(llr, p, MFP_72)
    assert np.array_equal(a.codeword, b.codeword)
    assert a.fods.total == b.fods.total


def test_decode_batch_matches_per_frame():
    p = CodeParams(5, 2)
    batch = np.random.default_rng(4).normal(size=(16, 32))
    got = decode_batch(batch, p, preset("rpa"))
    for row_in, row_out in zip(batch, got):
        assert np.array_equal(decode(row_in, p, preset("rpa")).codeword,
                              row_out)


def test_decode_batch_rejects_early_stop():
    p = CodeParams(4, 2)
    cfg = PruningConfig(early_stop_theta=0.05)
    with pytest.raises(ValueError):
        decode_batch(np.zeros((2, 16)), p, cfg)


def textbook_rpa_order2(llr, m, n_max):
    """Unpruned projection-aggregation loop for RM(m, 2), written straight
    from the three-step description: all n-1 projections, first-order
    decoding, average with denominator n-1."""
    n = 1 << m
    level = clamp_llr(np.asarray(llr, dtype=np.float64))
    for _ in range(n_max):
        decoded = []
        for i in range(1, n):
            cm = build_coset_map(m, i)
            decoded.append((i, fht_decode(project_llr(level, cm))))
        level = clamp_llr(aggregate(level, decoded))
    return (level < 0).astype(np.uint8)


@pytest.mark.parametrize("m", [4, 5])
def test_unpruned_preset_equals_textbook_loop(m):
    p = CodeParams(m, 2)
    rng = np.random.default_rng(20 + m)
    for _ in range(10):
        llr = rng.normal(size=p.n) * 3
        res = decode(llr, p, preset("rpa"))
        assert np.array_equal(res.codeword, textbook_rpa_order2(llr, m, 3))
