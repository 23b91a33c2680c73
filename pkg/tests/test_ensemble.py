import pickle

import numpy as np
import pytest

import dqwalk.ensemble as ensemble_mod
from dqwalk import (
    EnsembleConfig,
    EnsembleMemberError,
    InitialStateSpec,
    generate_map,
    new_walker_state,
    qfi_series,
    run_ensemble,
    split_seed,
)


def test_split_seed_deterministic_and_distinct():
    a = split_seed(0, 0)
    assert a == split_seed(0, 0)
    seen = {split_seed(12345, k) for k in range(20000)}
    assert len(seen) == 20000


def test_split_seed_depends_on_master():
    xs = [split_seed(1, k) for k in range(100)]
    ys = [split_seed(2, k) for k in range(100)]
    assert not set(xs) & set(ys)


def test_split_seed_range_and_validation():
    assert 0 <= split_seed(2**64 - 1, 10**9) < 2**64
    with pytest.raises(ValueError):
        split_seed(-1, 0)
    with pytest.raises(ValueError):
        split_seed(0, -1)


def test_initial_state_spec_builds_states():
    spec = InitialStateSpec()
    s = spec.build(5)
    assert s.amplitudes[5, 0] == 1.0
    spec = InitialStateSpec(kind="boson")
    assert spec.build(5).symmetry == "boson"
    with pytest.raises(ValueError):
        InitialStateSpec(kind="pairwise")
    with pytest.raises(ValueError):
        InitialStateSpec(kind="boson", coin=(0.0, 1.0))


def test_config_validation():
    with pytest.raises(ValueError):
        EnsembleConfig(kind="dynamic", p=2.0, n_steps=10, n_maps=5)
    with pytest.raises(ValueError):
        EnsembleConfig(kind="dynamic", p=0.5, n_steps=10, n_maps=0)
    with pytest.raises(ValueError):
        EnsembleConfig(kind="dynamic", p=0.5, n_steps=10, n_maps=5,
                       master_seed=-3)
    with pytest.raises(ValueError):
        EnsembleConfig(kind="dynamic", p=0.5, n_steps=10, n_maps=5,
                       phi=float("nan"))
    with pytest.raises(ValueError):
        EnsembleConfig(kind="dynamic", p=0.5, n_steps=10, n_maps=5,
                       operator_order="sideways")
    with pytest.raises(ValueError):
        EnsembleConfig(kind="dynamic", p=0.5, n_steps=10, n_maps=5,
                       collect_qfi=False)


def test_mean_matches_manual_average():
    # the ensemble route must agree with averaging explicit per-map runs
    cfg = EnsembleConfig(kind="dynamic", p=0.6, n_steps=15, n_maps=6,
                         master_seed=42, phi=0.3)
    series = run_ensemble(cfg)
    rows = []
    for k in range(cfg.n_maps):
        seed = split_seed(42, k)
        pmap = generate_map("dynamic", 15, 0.6, seed=seed)
        rows.append(qfi_series(new_walker_state(15), pmap, 0.3, 15).values)
    rows = np.array(rows)
    np.testing.assert_array_equal(series.qfi_mean, rows.mean(axis=0))
    np.testing.assert_allclose(
        series.qfi_stderr,
        rows.std(axis=0, ddof=1) / np.sqrt(cfg.n_maps),
        atol=1e-15,
    )
    np.testing.assert_array_equal(series.member_seeds,
                                  [split_seed(42, k) for k in range(6)])


def test_rerun_is_bit_identical():
    cfg = EnsembleConfig(kind="static", p=0.8, n_steps=20, n_maps=12,
                         master_seed=7, collect_distribution=True,
                         collect_variance=True)
    a = run_ensemble(cfg)
    b = run_ensemble(cfg)
    np.testing.assert_array_equal(a.qfi_mean, b.qfi_mean)
    np.testing.assert_array_equal(a.distribution, b.distribution)
    np.testing.assert_array_equal(a.variance, b.variance)


def test_worker_count_does_not_change_results():
    cfg = EnsembleConfig(kind="dynamic", p=0.5, n_steps=18, n_maps=14,
                         master_seed=3, collect_distribution=True,
                         per_map_variance=True)
    serial = run_ensemble(cfg, workers=1)
    pooled = run_ensemble(cfg, workers=3)
    np.testing.assert_array_equal(serial.qfi_mean, pooled.qfi_mean)
    np.testing.assert_array_equal(serial.qfi_stderr, pooled.qfi_stderr)
    np.testing.assert_array_equal(serial.distribution, pooled.distribution)
    np.testing.assert_array_equal(serial.variance_per_map,
                                  pooled.variance_per_map)


def test_single_map_stderr_is_zero():
    cfg = EnsembleConfig(kind="none", p=0.0, n_steps=10, n_maps=1)
    series = run_ensemble(cfg)
    assert (series.qfi_stderr == 0.0).all()


def test_distribution_and_variance_outputs():
    cfg = EnsembleConfig(kind="dynamic", p=1.0, n_steps=12, n_maps=8,
                         master_seed=5, collect_qfi=False,
                         collect_distribution=True, collect_variance=True,
                         per_map_variance=True)
    series = run_ensemble(cfg)
    assert series.qfi_mean is None
    assert series.distribution.shape == (13, 25)
    np.testing.assert_allclose(series.distribution.sum(axis=1), 1.0,
                               atol=1e-12)
    assert series.variance.shape == (13,)
    assert series.variance[0] == 0.0
    assert series.variance[1] == pytest.approx(1.0, abs=1e-12)
    # mean-then-variance and variance-then-mean are different statistics,
    # both start identically but diverge once maps decohere differently
    assert series.variance_per_map[1] == pytest.approx(1.0, abs=1e-12)


def test_offcenter_initial_state_gets_capacity():
    cfg = EnsembleConfig(kind="none", p=0.0, n_steps=8, n_maps=1,
                         initial=InitialStateSpec(position=3))
    series = run_ensemble(cfg)
    assert series.positions[0] == -11 and series.positions[-1] == 11
    assert len(series.qfi_mean) == 9


def test_member_failure_carries_index_and_seed(monkeypatch):
    real = ensemble_mod.generate_map

    def broken(kind, n_steps, p, semantics, seed):
        if seed == split_seed(9, 2):
            raise ValueError("synthetic failure")
        return real(kind, n_steps, p, semantics, seed)

    monkeypatch.setattr(ensemble_mod, "generate_map", broken)
    cfg = EnsembleConfig(kind="dynamic", p=0.5, n_steps=5, n_maps=4,
                         master_seed=9)
    with pytest.raises(EnsembleMemberError) as info:
        run_ensemble(cfg)
    assert info.value.member_index == 2
    assert info.value.member_seed == split_seed(9, 2)
    assert "synthetic failure" in str(info.value)


def test_member_error_survives_pickling():
    err = EnsembleMemberError(3, 12345, "boom")
    back = pickle.loads(pickle.dumps(err))
    assert back.member_index == 3
    assert back.member_seed == 12345
    assert "boom" in str(back)


def test_workers_validation():
    cfg = EnsembleConfig(kind="none", p=0.0, n_steps=5, n_maps=1)
    with pytest.raises(ValueError):
        run_ensemble(cfg, workers=0)
