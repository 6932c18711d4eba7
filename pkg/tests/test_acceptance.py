"""Acceptance gate: one test per shipped claim, at the stated tolerances.

Each test prints a single criterion line (visible in captured output on
failure, and mirrored by the verbose test report on success).  Criteria
that cannot hold are still run at face value and allowed to fail; their
failure messages carry the measured diagnostics.
"""

import json
import math
import time

import numpy as np
import pytest

import beamsolitons as bs
from beamsolitons import cli
from conftest import random_state


def _report(num, label, ok, detail):
    line = f"criterion {num} ({label}): {'PASS' if ok else 'FAIL'} [{detail}]"
    print(line)
    if not ok:
        pytest.fail(line)


def _moderate_state(grid):
    u = 1.5 * np.exp(-grid.x ** 2 / 8.0) * np.cos(2.0 * grid.x)
    v = 0.8 * np.exp(-grid.x ** 2 / 10.0) * np.sin(1.5 * grid.x)
    return bs.FieldState(u, v, grid)


def test_criterion_01_potential_certificates(piecewise_model, smooth_model):
    t0 = time.perf_counter()
    ok_w1 = bs.check_assumptions(piecewise_model, -5.0, 50.0, 2000).passed
    ok_w2 = bs.check_assumptions(smooth_model, -5.0, 50.0, 2000).passed
    quartic = bs.make_potential("custom", custom_name="quartic_test")
    q_report = bs.check_assumptions(quartic, -5.0, 50.0, 2000)
    elapsed = time.perf_counter() - t0
    ok = ok_w1 and ok_w2 and not q_report.hylomorphy_ok and elapsed < 1.0
    _report(1, "potential hypotheses", ok,
            f"W1={ok_w1} W2={ok_w2} quartic_hylomorphy={q_report.hylomorphy_ok} "
            f"{elapsed:.2f}s")


def test_criterion_02_ratio_lower_bound(scan_grid):
    t0 = time.perf_counter()
    states = []
    rng = np.random.Generator(np.random.Philox(2024))
    for _ in range(400):  # dilated bumps
        states.append(bs.bump_state(scan_grid, bs.BumpSpec(),
                                    float(rng.uniform(0.1, 300.0)),
                                    float(rng.uniform(0.5, 30.0))))
    ks = scan_grid.wavenumbers
    for _ in range(400):  # single modes
        k = float(ks[int(rng.integers(1, 120))])
        a, b = rng.uniform(-2, 2, size=2)
        states.append(bs.FieldState(a * np.sin(k * scan_grid.x),
                                    b * np.cos(k * scan_grid.x), scan_grid))
    for seed in range(400):  # smooth noise
        states.append(random_state(scan_grid, seed))
    ratios = [bs.lambda0_ratio(s) for s in states if abs(bs.momentum(s)) > 1e-6]
    elapsed = time.perf_counter() - t0
    ok = len(ratios) >= 1000 and min(ratios) >= 1.0 - 1e-9 and elapsed < 10.0
    _report(2, "half-norm-to-momentum ratio >= 1", ok,
            f"n={len(ratios)} min={min(ratios):.6f} {elapsed:.2f}s")


def test_criterion_03_subunit_ratio_scan(smooth_model, scan_grid):
    t0 = time.perf_counter()
    result = bs.scan_lambda_star(
        smooth_model, scan_grid, bs.BumpSpec(),
        np.geomspace(1.0, 200.0, 25), list(range(4, 37, 2)))
    winning_uu = next(ok for R, lam, ratio, _, ok in result.table
                      if R == result.best_R and lam == result.best_lambda)
    elapsed = time.perf_counter() - t0
    ok = result.best_ratio < 0.95 and winning_uu and elapsed < 30.0
    _report(3, "scan certifies E/|C| < 0.95 with UU", ok,
            f"best={result.best_ratio:.4f} at R={result.best_R:g} "
            f"lambda={result.best_lambda:g} uu={winning_uu} {elapsed:.2f}s")


def test_criterion_04_gradient_correctness(smooth_model, scan_grid):
    t0 = time.perf_counter()
    st = bs.bump_state(scan_grid, bs.BumpSpec(), 3.0, 5.0)
    delta = 1e-3
    geu, gev = bs.energy_gradient(st, smooth_model)
    gcu, gcv = bs.momentum_gradient(st)
    gju, gjv = bs.j_gradient(st, smooth_model, delta)
    rng = np.random.Generator(np.random.Philox(44))
    worst_e = worst_c = worst_j = 0.0
    for _ in range(20):
        spec = np.zeros(513, dtype=complex)
        spec[1:40] = rng.standard_normal(39) + 1j * rng.standard_normal(39)
        du = np.fft.irfft(spec, 1024)
        spec[1:40] = rng.standard_normal(39) + 1j * rng.standard_normal(39)
        dv = np.fft.irfft(spec, 1024)

        def measure(fn, h):
            plus = bs.FieldState(st.u + h * du, st.v + h * dv, scan_grid)
            minus = bs.FieldState(st.u - h * du, st.v - h * dv, scan_grid)
            return (fn(plus) - fn(minus)) / (2.0 * h)

        pe = bs.integrate(scan_grid, geu * du + gev * dv)
        pc = bs.integrate(scan_grid, gcu * du + gcv * dv)
        pj = bs.integrate(scan_grid, gju * du + gjv * dv)
        worst_e = max(worst_e, abs(measure(lambda s: bs.energy(s, smooth_model), 1e-6)
                                   - pe) / abs(pe))
        worst_c = max(worst_c, abs(measure(bs.momentum, 1e-4) - pc) / abs(pc))
        worst_j = max(worst_j, abs(measure(
            lambda s: bs.hylomorphic_j(s, smooth_model, delta), 1e-6) - pj) / abs(pj))
    elapsed = time.perf_counter() - t0
    ok = worst_e <= 1e-5 and worst_j <= 1e-5 and worst_c <= 1e-8 and elapsed < 10.0
    _report(4, "Gateaux derivatives match gradients", ok,
            f"E={worst_e:.2e} C={worst_c:.2e} J={worst_j:.2e} {elapsed:.2f}s")


def test_criterion_05_soliton_certificate_at_delta_0p1(smooth_model, scan_grid):
    t0 = time.perf_counter()
    try:
        profile = bs.minimize(bs.MinimizeConfig(delta=0.1), smooth_model, scan_grid)
    except (bs.NonConvergenceError, bs.DegeneratePathError,
            bs.DecayCertificateError) as err:
        elapsed = time.perf_counter() - t0
        diag = err.diagnostics
        _report(5, "delta = 0.1 converges with certificates", False,
                f"{type(err).__name__} after {diag['iterations']} iterations, "
                f"J={diag['j_value']:.6f} vs vanishing floor "
                f"{diag['vanishing_floor']:.6f}, momentum={diag['momentum']:.2e}, "
                f"classified: {diag['classification']}; {elapsed:.0f}s")
        return
    elapsed = time.perf_counter() - t0
    peak = float(np.max(np.abs(profile.state.u)))
    ok = (profile.grad_norm_final <= 1e-8
          and profile.el_residual_l2 <= 1e-4
          and abs(profile.speed - profile.fitted_speed) <= 1e-3 * abs(profile.speed)
          and profile.boundary_mass <= 1e-6 * peak
          and elapsed < 300.0)
    _report(5, "delta = 0.1 converges with certificates", ok,
            f"grad={profile.grad_norm_final:.2e} el={profile.el_residual_l2:.2e} "
            f"{elapsed:.0f}s")


def test_criterion_06_delta_distinctness(smooth_model, scan_grid):
    t0 = time.perf_counter()
    profiles = {}
    failures = {}
    for delta in (0.05, 0.1, 0.2):
        try:
            profiles[delta] = bs.minimize(bs.MinimizeConfig(delta=delta),
                                          smooth_model, scan_grid)
        except (bs.NonConvergenceError, bs.DegeneratePathError,
                bs.DecayCertificateError) as err:
            failures[delta] = f"{type(err).__name__}: {err.diagnostics['classification']}"
    elapsed = time.perf_counter() - t0
    if failures:
        _report(6, "three deltas give distinct profiles", False,
                "; ".join(f"delta={d}: {msg}" for d, msg in failures.items())
                + f"; {elapsed:.0f}s")
        return
    energies = [p.invariants_at_min.energy for p in profiles.values()]
    gaps = [abs(a - b) / max(abs(a), abs(b))
            for i, a in enumerate(energies) for b in energies[i + 1:]]
    ok = min(gaps) > 1e-6 and elapsed < 900.0
    _report(6, "three deltas give distinct profiles", ok,
            f"min pairwise energy gap {min(gaps):.2e} {elapsed:.0f}s")


def test_criterion_07_transport(soliton, smooth_model, main_grid, small_grid):
    t0 = time.perf_counter()
    c = soliton.speed
    cfg = bs.EvolveConfig(t_final=20.0 / c, sample_stride=200)
    rec = bs.evolve(bs.FieldState(soliton.state.u, soliton.state.v, main_grid),
                    smooth_model, cfg)
    shape = float(np.max(rec.shape_error_series))
    xis = np.unwrap(rec.shift_series, period=2.0 * main_grid.half_length)
    slope = float(np.polyfit(rec.times, xis, 1)[0])
    speed_err = abs(slope - c) / c
    e = rec.energy_series
    e_drift = float(np.max(np.abs(e - e[0]))) / abs(e[0])
    cm = rec.momentum_series
    c_drift = float(np.max(np.abs(cm - cm[0])))
    c_bound = 1e-8 * bs.x_norm_sq(soliton.state)

    # second-order check, run where truncation dominates rounding (the
    # soliton's own drift sits at the accumulation floor at any stable dt)
    probe = _moderate_state(small_grid)
    base = bs.default_dt(small_grid)
    drifts = []
    for mult in (2.0, 1.0):
        r = bs.evolve(probe, smooth_model,
                      bs.EvolveConfig(t_final=2.0, dt=mult * base,
                                      sample_stride=10 ** 9))
        drifts.append(abs(r.energy_series[-1] - r.energy_series[0])
                      / abs(r.energy_series[0]))
    halving_gain = drifts[0] / drifts[1]
    elapsed = time.perf_counter() - t0
    ok = (shape <= 1e-3 and speed_err <= 0.01 and e_drift <= 1e-6
          and c_drift <= c_bound and halving_gain >= 3.0 and elapsed < 300.0)
    _report(7, "soliton transport with conservation", ok,
            f"shape={shape:.2e} speed_err={speed_err:.2e} dE={e_drift:.2e} "
            f"dC={c_drift:.2e} halving x{halving_gain:.2f} {elapsed:.0f}s")


def test_criterion_08_orbital_stability(soliton, smooth_model):
    t0 = time.perf_counter()
    cfg = bs.EvolveConfig(t_final=20.0 / soliton.speed, sample_stride=200)
    xnorm = math.sqrt(bs.x_norm_sq(soliton.state))
    details = []
    ok = True
    for eps in (1e-3, 1e-2):
        rec = bs.stability_experiment(soliton, smooth_model, eps, cfg, seed=0)
        sup = float(np.max(rec.orbit_distance_series))
        v = rec.liapunov_series
        v_drift = float(np.max(np.abs(v - v[0]))) / v[0]
        ok &= sup <= 5.0 * eps * xnorm and v_drift <= 1e-6
        details.append(f"eps={eps:g}: sup/eps||u||={sup / (eps * xnorm):.2f} "
                       f"Vdrift={v_drift:.1e}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 600.0
    _report(8, "perturbations stay on the orbit", ok,
            "; ".join(details) + f" {elapsed:.0f}s")


def test_criterion_09_integrator_unit_suite(small_grid, smooth_model):
    t0 = time.perf_counter()
    zero_force = bs.make_potential("custom", custom_name="zero_force")
    dt = bs.default_dt(small_grid)

    # exact dispersion: mode k rotates at frequency k^2
    k = 8.0 * math.pi / 20.0
    u0 = np.sin(k * small_grid.x)
    st = bs.FieldState(u0, np.zeros(256), small_grid)
    n_steps = 1000
    m = round(k * small_grid.half_length / math.pi)
    amp0 = 2.0 * abs(np.fft.rfft(st.u)[m]) / small_grid.n_points
    for _ in range(n_steps):
        st = bs.step(st, zero_force, dt)
    t = n_steps * dt
    phase_err = float(np.max(np.abs(st.u - math.cos(k * k * t) * u0)))
    uh = np.fft.rfft(st.u)[m]
    vh = np.fft.rfft(st.v)[m]
    amp = 2.0 * math.hypot(abs(uh), abs(vh) / (k * k)) / small_grid.n_points
    amp_drift_per_step = abs(amp - amp0) / n_steps

    # reversibility through the nonlinear flow
    st0 = _moderate_state(small_grid)
    st = st0
    for _ in range(50):
        st = bs.step(st, smooth_model, dt)
    for _ in range(50):
        st = bs.step(st, smooth_model, -dt)
    rev_err = max(float(np.max(np.abs(st.u - st0.u))),
                  float(np.max(np.abs(st.v - st0.v))))

    # translation equivariance of one step
    tau = 17 * small_grid.dx
    moved = bs.FieldState(bs.shift(small_grid, st0.u, tau),
                          bs.shift(small_grid, st0.v, tau), small_grid)
    a = bs.step(moved, smooth_model, dt)
    b = bs.step(st0, smooth_model, dt)
    equi_err = max(float(np.max(np.abs(a.u - bs.shift(small_grid, b.u, tau)))),
                   float(np.max(np.abs(a.v - bs.shift(small_grid, b.v, tau)))))
    elapsed = time.perf_counter() - t0
    ok = (phase_err <= 1e-8 and amp_drift_per_step <= 1e-12
          and rev_err <= 1e-9 and equi_err <= 1e-9 and elapsed < 30.0)
    _report(9, "integrator exactness suite", ok,
            f"phase={phase_err:.1e} amp/step={amp_drift_per_step:.1e} "
            f"reverse={rev_err:.1e} equivariance={equi_err:.1e} {elapsed:.1f}s")


def test_criterion_10_reproducibility(tmp_path):
    t0 = time.perf_counter()
    config = {
        "grid": {"half_length": 64.0, "n_points": 512},
        "minimize": {"delta": [1e-3]},
        "scan": {"R_values": [10.0, 100.0], "lambda_values": [8.0, 12.0]},
        "evolve": {"t_final": 0.5, "dt": 2.5e-4, "sample_stride": 50,
                   "epsilon_values": [1e-3]},
        "seed": 7,
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    runs = [tmp_path / "run1", tmp_path / "run2"]
    for out in runs:
        assert cli.main(["find-soliton", "--config", str(path),
                         "--output", str(out)]) == 0
        assert cli.main(["lambda-bounds", "--config", str(path),
                         "--output", str(out)]) == 0
        assert cli.main(["stability", "--config", str(path), "--output",
                         str(out), str(out / "profile_delta_0.001.json")]) == 0
    same = all(
        (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes()
        for name in ("profile_delta_0.001.json", "lambda_bounds.csv",
                     "stability_eps_0.001.csv"))
    elapsed = time.perf_counter() - t0
    _report(10, "byte-identical reruns", same, f"{elapsed:.1f}s")
