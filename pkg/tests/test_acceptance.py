"""End-to-end acceptance checks.

Every guaranteed behavior of the package is verified here at its stated
tolerance, one test per criterion, each printing a PASS/FAIL line (run with
-s to see them as they happen).  The heavy disorder ensembles are shared
through module-scoped fixtures so the whole file stays fast enough to run on
every change.
"""

import time

import numpy as np
import pytest

import dqwalk as dq


def _report(name, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


# -- shared heavy ensembles ---------------------------------------------------


@pytest.fixture(scope="module")
def dynamic_p1_qfi():
    cfg = dq.EnsembleConfig(kind="dynamic", p=1.0, n_steps=50, n_maps=1000)
    t0 = time.perf_counter()
    series = dq.run_ensemble(cfg)
    return series, time.perf_counter() - t0


@pytest.fixture(scope="module")
def dynamic_p01_qfi():
    cfg = dq.EnsembleConfig(kind="dynamic", p=0.1, n_steps=50, n_maps=1000)
    return dq.run_ensemble(cfg)


@pytest.fixture(scope="module")
def static_p1_qfi():
    cfg = dq.EnsembleConfig(kind="static", p=1.0, n_steps=100, n_maps=1000)
    return dq.run_ensemble(cfg)


def test_criterion_01_clean_walk_baseline():
    pmap = dq.generate_map("none", 2, 0.0)
    state = dq.new_walker_state(2)
    series = dq.qfi_series(state, pmap, 0.0, 2)
    f1_ok = abs(series.values[1]) <= 1e-10
    f2_ok = abs(series.values[2] - 1.0) <= 1e-10

    pair = dq.DerivativePair.initial(state)
    for t in (1, 2):
        pair = dq.step_with_derivative(pair, dq.StepContext(0.0, t, pmap))
    dist = dq.position_distribution(pair.psi)
    probs = dict(zip(dist.positions().tolist(), dist.probabilities.tolist()))
    expected = {-2: 0.25, -1: 0.0, 0: 0.5, 1: 0.0, 2: 0.25}
    dist_err = max(abs(probs[x] - v) for x, v in expected.items())
    _report(
        "criterion 1 (clean-walk baseline)",
        f1_ok and f2_ok and dist_err <= 1e-12,
        f"F(1)={series.values[1]:.2e}, F(2)-1={series.values[2] - 1.0:.2e}, "
        f"max dist err={dist_err:.2e}",
    )


def test_criterion_02_derivative_vs_finite_difference():
    rng = np.random.default_rng(20260821)
    worst = 0.0
    n_maps = 0
    for kind in ("static", "dynamic"):
        for _ in range(12):
            p = float(rng.uniform(0.05, 1.0))
            seed = int(rng.integers(0, 2**63))
            phi = float(rng.uniform(0, 2 * np.pi))
            pmap = dq.generate_map(kind, 30, p, seed=seed)
            state = dq.new_walker_state(30)
            pair = dq.DerivativePair.initial(state)
            for t in range(1, 31):
                pair = dq.step_with_derivative(
                    pair, dq.StepContext(phi, t, pmap)
                )
            _, fd_dpsi = dq.qfi_finite_difference_crosscheck(
                state, pmap, phi, 30, h=1e-5
            )
            err = float(
                np.max(np.abs(pair.dpsi.amplitudes - fd_dpsi.amplitudes))
            )
            worst = max(worst, err)
            n_maps += 1
    _report(
        "criterion 2 (derivative recursion vs finite differences)",
        worst <= 1e-6,
        f"worst per-component error {worst:.2e} over {n_maps} maps at t=30, h=1e-5",
    )


def test_criterion_03_ballistic_exponent_and_speed():
    cfg = dq.EnsembleConfig(kind="none", p=0.0, n_steps=100, n_maps=1)
    t0 = time.perf_counter()
    series = dq.run_ensemble(cfg)
    fit = dq.fit_power_law(series.qfi_mean, 10, 100)
    elapsed = time.perf_counter() - t0
    _report(
        "criterion 3 (ordered walk ballistic)",
        abs(fit.alpha - 2.0) <= 0.05 and elapsed < 1.0,
        f"alpha={fit.alpha:.4f} (target 2.00+/-0.05), {elapsed:.2f}s (< 1s)",
    )


def test_criterion_04_dynamic_disorder_diffusive(dynamic_p1_qfi):
    series, elapsed = dynamic_p1_qfi
    fit = dq.fit_power_law(series.qfi_mean, 10, 50)
    _report(
        "criterion 4 (dynamic p=1 diffusive)",
        abs(fit.alpha - 1.0) <= 0.15 and elapsed < 120.0,
        f"alpha={fit.alpha:.4f} (target 1.00+/-0.15), "
        f"1000 maps in {elapsed:.1f}s (< 120s)",
    )


def test_criterion_05_weak_dynamic_disorder_superdiffusive(dynamic_p01_qfi):
    fit = dq.fit_power_law(dynamic_p01_qfi.qfi_mean, 10, 50)
    _report(
        "criterion 5 (dynamic p=0.1 superdiffusive)",
        1.2 <= fit.alpha <= 1.9,
        f"alpha={fit.alpha:.4f} (target within [1.2, 1.9])",
    )


def test_criterion_06_static_disorder_localizes(static_p1_qfi):
    alpha = dq.windowed_alpha(static_p1_qfi.qfi_mean, window=20)
    late = alpha.alphas[alpha.centers >= 30]
    increments = np.diff(late)
    max_inc = float(increments.max())
    final = float(late[-1])
    _report(
        "criterion 6 (static p=1 localization)",
        max_inc <= 0.1 and final < 0.5,
        f"max windowed-alpha increment beyond t=30 is {max_inc:.3f} (<= 0.1), "
        f"final window alpha={final:.3f} (< 0.5)",
    )


def test_criterion_07_variance_routes():
    ordered = dq.run_ensemble(dq.EnsembleConfig(
        kind="none", p=0.0, n_steps=100, n_maps=1,
        collect_qfi=False, collect_variance=True,
    ))
    fit_ordered = dq.fit_power_law(ordered.variance, 10, 100)

    dynamic = dq.run_ensemble(dq.EnsembleConfig(
        kind="dynamic", p=1.0, n_steps=100, n_maps=1000,
        collect_qfi=False, collect_variance=True,
    ))
    fit_dynamic = dq.fit_power_law(dynamic.variance, 10, 100)

    static = dq.run_ensemble(dq.EnsembleConfig(
        kind="static", p=1.0, n_steps=100, n_maps=1000,
        collect_qfi=False, collect_variance=True,
    ))
    alpha_static = dq.windowed_alpha(static.variance, window=20)
    static_final = float(alpha_static.alphas[-1])

    ok = (
        abs(fit_ordered.alpha - 2.0) <= 0.05
        and abs(fit_dynamic.alpha - 1.0) <= 0.15
        and static_final < 0.5
    )
    _report(
        "criterion 7 (variance transport routes)",
        ok,
        f"ordered alpha={fit_ordered.alpha:.4f} (2.00+/-0.05), "
        f"dynamic p=1 alpha={fit_dynamic.alpha:.4f} (1.00+/-0.15), "
        f"static p=1 final windowed alpha={static_final:.3f} (< 0.5)",
    )


def test_criterion_08_exchange_statistics_ordered():
    sep = dq.run_two_particle(
        dq.TwoParticleExperiment("separable", "none", 0.0, 50, 1)
    )
    bos = dq.run_two_particle(
        dq.TwoParticleExperiment("boson", "none", 0.0, 50, 1)
    )
    reference = dq.separable_reference(
        dq.TwoParticleExperiment("separable", "none", 0.0, 50, 1)
    )
    additivity_err = float(np.max(np.abs(sep.qfi_mean - reference)))
    dominance = bool(
        np.all(bos.qfi_mean[2:] >= sep.qfi_mean[2:] - 1e-10)
    )
    _report(
        "criterion 8 (boson advantage and separable additivity)",
        dominance and additivity_err <= 1e-10,
        f"boson >= separable at every t in [2, 50]: {dominance}, "
        f"separable joint vs single sum max err {additivity_err:.2e} (<= 1e-10)",
    )


def test_criterion_09_invariants():
    details = []
    ok = True

    # norm conservation and light cone over a disordered evolution
    pmap = dq.generate_map("dynamic", 100, 0.5, seed=77)
    state = dq.new_walker_state(100)
    cone_ok = True
    for t in range(1, 101):
        state = dq.step(state, dq.StepContext(0.9, t, pmap))
        cone_ok = cone_ok and dq.support_radius(state) <= t
    norm_err = abs(state.norm() - 1.0)
    ok &= norm_err <= 1e-12 and cone_ok
    details.append(f"norm drift {norm_err:.2e}/100 steps, light cone {cone_ok}")

    # exchange symmetry through disorder
    res = 0.0
    for kind in ("boson", "fermion"):
        s = dq.new_two_particle_state(kind, 20)
        pm = dq.generate_map("dynamic", 20, 0.8, seed=5)
        for t in range(1, 21):
            s = dq.two_particle_step(s, dq.StepContext(0.4, t, pm))
        res = max(res, dq.exchange_residual(s))
    ok &= res <= 1e-12
    details.append(f"exchange residual {res:.2e}")

    # distribution normalization
    dist = dq.position_distribution(state)
    dist_err = abs(float(dist.probabilities.sum()) - 1.0)
    ok &= dist_err <= 1e-12
    details.append(f"distribution norm err {dist_err:.2e}")

    # QFI nonnegativity on a disordered series
    series = dq.qfi_series(dq.new_walker_state(40),
                           dq.generate_map("static", 40, 0.9, seed=3),
                           0.7, 40)
    nonneg = bool((series.values >= 0.0).all())
    ok &= nonneg
    details.append(f"QFI nonnegative {nonneg}")

    # determinism: rerun and reschedule must give identical bytes
    cfg = dq.EnsembleConfig(kind="dynamic", p=0.7, n_steps=25, n_maps=30,
                            master_seed=11, collect_distribution=True,
                            collect_variance=True, per_map_variance=True)
    a = dq.run_ensemble(cfg)
    b = dq.run_ensemble(cfg)
    c = dq.run_ensemble(cfg, workers=3)
    same = all(
        np.array_equal(getattr(a, f), getattr(b, f))
        and np.array_equal(getattr(a, f), getattr(c, f))
        for f in ("qfi_mean", "qfi_stderr", "distribution", "variance",
                  "variance_per_map")
    )
    ok &= same
    details.append(f"rerun+scheduling bit-identical {same}")

    _report("criterion 9 (invariants)", bool(ok), "; ".join(details))


def test_criterion_10_fitter_on_planted_laws():
    t = np.arange(121, dtype=float)
    worst_fit = 0.0
    worst_window = 0.0
    for alpha in (0.5, 1.0, 1.5, 2.0):
        values = np.zeros(121)
        values[1:] = 0.7 * t[1:] ** alpha
        fit = dq.fit_power_law(values, 1, 120)
        worst_fit = max(worst_fit, abs(fit.alpha - alpha))
        windowed = dq.windowed_alpha(values, window=20)
        worst_window = max(worst_window, float(np.max(np.abs(windowed.alphas - alpha))))
    _report(
        "criterion 10 (planted power laws)",
        worst_fit <= 1e-10 and worst_window <= 1e-10,
        f"worst fit err {worst_fit:.2e}, worst windowed err {worst_window:.2e} "
        f"over alpha in {{0.5, 1, 1.5, 2}}",
    )
