import numpy as np
import pytest

from dqwalk import (
    StepContext,
    TwoParticleExperiment,
    exchange_residual,
    generate_map,
    new_two_particle_state,
    run_two_particle,
    separable_reference,
    two_particle_step,
)


def test_experiment_validates_statistics():
    with pytest.raises(ValueError):
        TwoParticleExperiment("maxwellian", "none", 0.0, 10, 1)


def test_separable_joint_equals_single_sum_clean():
    exp = TwoParticleExperiment("separable", "none", 0.0, 25, 1)
    joint = run_two_particle(exp)
    reference = separable_reference(exp)
    np.testing.assert_allclose(joint.qfi_mean, reference, atol=1e-10)


def test_separable_joint_equals_single_sum_disordered():
    # same master seed means identical maps member by member
    exp = TwoParticleExperiment("separable", "dynamic", 0.7, 20, 4,
                                master_seed=13, phi=0.5)
    joint = run_two_particle(exp)
    reference = separable_reference(exp)
    np.testing.assert_allclose(joint.qfi_mean, reference, atol=1e-10)


def test_boson_dominates_separable_clean():
    sep = run_two_particle(TwoParticleExperiment("separable", "none", 0.0, 30, 1))
    bos = run_two_particle(TwoParticleExperiment("boson", "none", 0.0, 30, 1))
    assert (bos.qfi_mean[2:] >= sep.qfi_mean[2:] - 1e-10).all()
    # and strictly more information at late times
    assert bos.qfi_mean[30] > sep.qfi_mean[30] * 1.05


def test_fermion_runs_and_differs_from_boson():
    bos = run_two_particle(TwoParticleExperiment("boson", "none", 0.0, 20, 1))
    fer = run_two_particle(TwoParticleExperiment("fermion", "none", 0.0, 20, 1))
    assert (fer.qfi_mean >= -1e-12).all()
    assert not np.allclose(bos.qfi_mean[2:], fer.qfi_mean[2:], rtol=1e-3)


@pytest.mark.parametrize("statistics", ["boson", "fermion"])
def test_exchange_symmetry_preserved_by_disordered_evolution(statistics):
    pmap = generate_map("dynamic", 15, 0.8, seed=29)
    s = new_two_particle_state(statistics, 15)
    for t in range(1, 16):
        s = two_particle_step(s, StepContext(0.7, t, pmap))
    assert exchange_residual(s) < 1e-12


def test_joint_qfi_nonnegative_under_disorder():
    exp = TwoParticleExperiment("boson", "static", 1.0, 15, 5, master_seed=2)
    series = run_two_particle(exp)
    assert (series.qfi_mean >= 0.0).all()


def test_collect_distribution_gives_marginal():
    exp = TwoParticleExperiment("boson", "none", 0.0, 10, 1)
    series = run_two_particle(exp, collect_distribution=True)
    assert series.distribution.shape == (11, 21)
    np.testing.assert_allclose(series.distribution.sum(axis=1), 1.0,
                               atol=1e-12)
