"""Finite-gap field evaluation: normalization, periodicity, growth."""

import dataclasses
import math

import numpy as np
import pytest

from ds2aw import (
    NumericError,
    ThetaParams,
    build_spectral_data,
    default_theta_params,
    empty_spectral_data,
    evaluate_grid,
    evaluate_u,
    first_appearance_estimate,
)

from conftest import SINGLE_LX, SINGLE_LY, cosine_grid, harmonic_grid


def test_normalization_at_origin(single_mode_sd):
    u = evaluate_u(0.0, 0.0, 0.0, single_mode_sd)
    assert u == pytest.approx(single_mode_sd.u00, abs=1e-13)


def test_double_periodicity(single_mode_sd, four_mode_sd):
    rng = np.random.default_rng(17)
    for sd in (single_mode_sd, four_mode_sd):
        params = default_theta_params(sd, [0.0, 1.0])
        for _ in range(5):
            x, y = rng.uniform(0, 3, size=2)
            t = rng.uniform(0, 1)
            u0 = evaluate_u(x, y, t, sd, params)
            ux = evaluate_u(x + sd.L_x, y, t, sd, params)
            uy = evaluate_u(x, y + sd.L_y, t, sd, params)
            assert abs(ux - u0) <= 1e-9 * abs(u0)
            assert abs(uy - u0) <= 1e-9 * abs(u0)


def test_eps_zero_degeneration():
    sd = empty_spectral_data(SINGLE_LX, SINGLE_LY, a=1.0)
    f = evaluate_grid([0.0, 0.7], 16, 16, sd)
    for field in f:
        assert np.abs(field.u - 1.0).max() <= 1e-12


def test_cauchy_datum_reproduced(single_mode_sd):
    # t = 0 snapshot approximates a + eps v0 at order eps^2
    sd = single_mode_sd
    nx = ny = 32
    f = evaluate_grid([0.0], nx, ny, sd)[0]
    x = np.arange(nx) * (sd.L_x / nx)
    X = np.meshgrid(x, np.arange(ny) * (sd.L_y / ny), indexing="xy")[0]
    target = 1.0 + sd.eps * np.cos(1.2 * X)
    assert np.abs(f.u - target).max() < 10.0 * sd.eps**2


def test_grid_matches_pointwise_bitwise(single_mode_sd):
    sd = single_mode_sd
    params = default_theta_params(sd, [0.4])
    f = evaluate_grid([0.4], 8, 8, sd, params)[0]
    for iy in range(8):
        for ix in range(8):
            x = ix * sd.L_x / 8
            y = iy * sd.L_y / 8
            assert f.u[iy, ix] == evaluate_u(x, y, 0.4, sd, params)


def test_thread_schedule_independence(single_mode_sd):
    sd = single_mode_sd
    params = default_theta_params(sd, [0.3])
    a = evaluate_grid([0.3], 64, 64, sd, params, threads=1)[0]
    b = evaluate_grid([0.3], 64, 64, sd, params, threads=4)[0]
    assert np.array_equal(a.u, b.u)


def test_modulational_growth_rate(single_mode_sd):
    # the (1, 0) Fourier coefficient grows like e^{sigma t} up to T1/2
    sd = single_mode_sd
    sigma = abs(sd.W_t[0])
    t1 = first_appearance_estimate(sd)
    times = np.linspace(0.0, 0.5 * t1, 9)
    fields = evaluate_grid(times, 32, 32, sd)
    amps = []
    for f in fields:
        c = np.fft.fft2(f.u) / (32 * 32)
        amps.append(abs(c[0, 1]))
    # drop the t=0 point: both eigendirections are present initially
    fit = np.polyfit(times[3:], np.log(amps[3:]), 1)[0]
    assert abs(fit - sigma) <= 0.05 * sigma


def test_anomalous_wave_peak(single_mode_sd):
    sd = single_mode_sd
    t1 = first_appearance_estimate(sd)
    times = np.arange(0.0, 2.0 * t1, 0.1)
    fields = evaluate_grid(times, 32, 32, sd)
    peak = max(np.abs(f.u).max() for f in fields)
    assert peak > 2.0


def test_gauge_phase_rotation(single_mode_sd):
    # constant-phase gauge: rotating u00 rotates the field rigidly
    sd = single_mode_sd
    rot = dataclasses.replace(sd, u00=sd.u00 * np.exp(0.7j))
    f0 = evaluate_grid([0.9], 16, 16, sd)[0]
    f1 = evaluate_grid([0.9], 16, 16, rot)[0]
    assert np.abs(np.abs(f1.u) - np.abs(f0.u)).max() <= 1e-12
    assert np.allclose(f1.u, f0.u * np.exp(0.7j), rtol=1e-12)


def test_relabeling_invariance(single_mode_sd):
    # permuting handle indices consistently leaves the field unchanged
    sd = single_mode_sd
    perm = [1, 0]
    swapped = dataclasses.replace(
        sd,
        pairs=[sd.pairs[i] for i in perm],
        B=sd.B[np.ix_(perm, perm)],
        W_z=sd.W_z[perm],
        W_zbar=sd.W_zbar[perm],
        W_t=sd.W_t[perm],
        A_inf2=sd.A_inf2[perm],
        A_div=sd.A_div[perm],
        K=sd.K[perm],
        d=sd.d[perm],
    )
    rng = np.random.default_rng(23)
    for _ in range(5):
        x, y, t = rng.uniform(0, 2, size=3)
        assert evaluate_u(x, y, t, swapped) == pytest.approx(
            evaluate_u(x, y, t, sd), rel=1e-10
        )


def test_first_appearance_estimate_values():
    # C = max |sqrt(alpha beta)| = 1 when v0 = 2 cos(1.2 x)
    v0 = harmonic_grid(32, 32, [(1, 0, 1.0), (-1, 0, 1.0)])
    sd = build_spectral_data(SINGLE_LX, SINGLE_LY, 1e-2, v0)
    assert max(abs(p.sqrt_alpha_beta) for p in sd.pairs) == pytest.approx(1.0, abs=1e-12)
    t1 = first_appearance_estimate(sd)
    assert t1 == pytest.approx(math.log(100.0) / 1.92, rel=1e-12)
    # halving eps delays by log 2 / sigma_max
    sd2 = build_spectral_data(SINGLE_LX, SINGLE_LY, 5e-3, v0)
    assert first_appearance_estimate(sd2) - t1 == pytest.approx(
        math.log(2.0) / 1.92, rel=1e-10
    )
    assert t1 > 0.0


def test_theta_zero_reported(single_mode_sd, monkeypatch):
    # the hard floor (1e-300) is unreachable for genuine data, so raise it
    # and aim the argument exactly at a theta root to exercise the error path
    import importlib

    fieldgen = importlib.import_module("ds2aw.fieldgen")
    sd = single_mode_sd
    monkeypatch.setattr(fieldgen, "DENOM_FLOOR", 1e-2)
    root = np.array([1j * math.pi + sd.B[0, 0] / 2.0, 0.35 + 0.1j])
    bad = dataclasses.replace(sd, d=root)
    with pytest.raises(NumericError) as err:
        evaluate_u(0.0, 0.0, 0.0, bad, default_theta_params(sd, [0.0]))
    assert err.value.code == "theta-zero"


def test_threads_env_fallback(monkeypatch):
    from ds2aw.fieldgen import _resolve_threads

    monkeypatch.setenv("DS2AW_THREADS", "3")
    assert _resolve_threads(None) == 3
    assert _resolve_threads(2) == 2
    monkeypatch.setenv("DS2AW_THREADS", "0")
    assert _resolve_threads(None) >= 1


def test_truncation_insufficient_propagates(single_mode_sd):
    sd = single_mode_sd
    tiny = ThetaParams(g=sd.g, B=sd.B, truncation_radius=1, tail_tolerance=1e-30)
    with pytest.raises(NumericError) as err:
        evaluate_u(0.1, 0.2, 0.5, sd, tiny)
    assert err.value.code == "truncation-insufficient"
