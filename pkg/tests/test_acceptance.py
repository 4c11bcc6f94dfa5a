"""Acceptance criteria, one test and one PASS/FAIL line each."""
import time

import numpy as np
import pytest

from svc_tunneling import analysis as an
from svc_tunneling import geometry as geo
from svc_tunneling.geometry import SvcParams
from svc_tunneling.oracle import oracle_transmission
from svc_tunneling.spp import (general_zeta, spp_zetas, svc_geometry, svc_transmission, zeta_n2_fast)
from svc_tunneling.xfer import barrier_matrix, polar_m22

from test_spp import (explicit_zeta3, explicit_zeta4, explicit_zeta5, fixture_value,
                      _random_geometry)


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {number} {'PASS' if ok else 'FAIL'}: {detail}")
        return ok
    return emit


def test_criterion_1_oracle_equivalence(report):
    k = np.linspace(0.05, 15, 2000)
    t0 = time.perf_counter()
    worst = 0.0
    for rho in (1.5, 2.5, 4.0, 8.0):
        for g in range(1, 7):
            p = SvcParams(rho, g, 20.0, 15.0)
            dev = np.max(np.abs(svc_transmission(p, k) - oracle_transmission(geo.build_layout(p), k)))
            worst = max(worst, float(dev))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 60
    report(1, ok, f"max |T_closed - T_oracle| = {worst:.2e} (<= 1e-8), {elapsed:.2f} s (< 60 s)")
    assert ok


def test_criterion_2_explicit_level_fixtures(report, rng):
    worst_fixture = 0.0
    for _ in range(100):
        geom = _random_geometry(rng, 5)
        kk = rng.uniform(0.1, 10.0)
        m = polar_m22(barrier_matrix(kk, rng.uniform(0.0, 30.0), geom.unit_width))
        z = spp_zetas(m, kk, geom).values
        for j, fn in {3: explicit_zeta3, 4: explicit_zeta4, 5: explicit_zeta5}.items():
            ref, scale = fixture_value(fn, m, z, kk, geom.repetitions, geom.spacings)
            worst_fixture = max(worst_fixture, abs(general_zeta(j, m, z, kk, geom) - ref) / scale)
    k = np.linspace(0.05, 15, 500)
    worst_fast = 0.0
    for rho in (1.5, 2.5, 4.0, 8.0):
        p = SvcParams(rho, 10, 20.0, 15.0)
        geom = svc_geometry(p)
        m = polar_m22(barrier_matrix(k, 20.0, geom.unit_width))
        gen = spp_zetas(m, k, geom).values
        for j in range(1, 11):
            fast = zeta_n2_fast(j, m, gen, k, geom.spacings)
            worst_fast = max(worst_fast, float(np.max(np.abs(fast - gen[j - 1]) / np.maximum(1, np.abs(gen[j - 1])))))
    ok = worst_fixture <= 1e-12 and worst_fast <= 1e-10
    report(2, ok, f"explicit zeta_3..5 vs general {worst_fixture:.2e} (<= 1e-12), "
                  f"fast vs general {worst_fast:.2e} (<= 1e-10)")
    assert ok


def test_criterion_3_textbook_reduction(report):
    v, span = 20.0, 15.0
    k = np.sort(np.concatenate([np.linspace(0.05, 15, 2000), [np.sqrt(v)]]))
    t = svc_transmission(SvcParams(2.0, 0, v, span), k)
    q = np.sqrt((k * k - v).astype(complex))
    at_top = k == np.sqrt(v)  # kappa = 0 up to the rounding of sqrt
    with np.errstate(invalid="ignore", divide="ignore"):
        eps_sin = np.where(at_top, k * span / 2, (v / (2 * k * q) * np.sin(q * span)).real)
    dev = float(np.max(np.abs(t - 1 / (1 + eps_sin ** 2))))
    ok = dev <= 1e-12 and bool(at_top.any())
    report(3, ok, f"max |T_0 - 1/(1 + eps-^2 sin^2)| = {dev:.2e} (<= 1e-12), kappa = 0 included")
    assert ok


def test_criterion_4_sharp_resonances(report):
    counts = {}
    for rho in (2.2, 2.5):
        res = an.find_resonances(SvcParams(rho, 4, 20.0, 15.0), 0.5, 8.0)
        counts[rho] = sum(1 for r in res if r.t_peak >= 0.999 and r.resolved and r.width < 1e-2)
    ok = all(c >= 2 for c in counts.values())
    report(4, ok, "sharp peaks (T >= 0.999, FWHM < 1e-2): "
                  + ", ".join(f"rho={r}: {c}" for r, c in counts.items()) + " (>= 2 each)")
    assert ok


def test_criterion_5_saturation(report):
    grid = np.linspace(0.1, 15, 2000)
    base = SvcParams(6.0, 2, 20.0, 15.0)
    late = an.saturation_metric(base, 6, 8, grid)
    early = an.saturation_metric(base, 2, 4, grid)
    ok = late < early
    report(5, ok, f"metric(6,8) = {late:.3e} < metric(2,4) = {early:.3e}")
    assert ok


def test_criterion_6_area_preserving_convergence(report):
    k = np.linspace(1, 100, 20_000)
    p = SvcParams(3.5, 4, 10.0, 1.0, area_preserving=True)
    d45, = an.rg_convergence(p, [4, 5], k)
    d1015, = an.rg_convergence(p, [10, 15], k)
    ok = d1015 <= 1e-3 and d45 > d1015
    report(6, ok, f"sup|R10 - R15| = {d1015:.2e} (<= 1e-3), sup|R4 - R5| = {d45:.2e} (> previous)")
    assert ok


def test_criterion_7_inverse_square_scaling(report):
    fits = {v0: an.scaling_fit(SvcParams(3.5, 5, v0, 1.0, area_preserving=True), (50, 500))
            for v0 in (10.0, 20.0)}
    ok = all(-2.1 <= f.slope <= -1.9 for f in fits.values())
    report(7, ok, "envelope slope over k in [50, 500]: "
                  + ", ".join(f"V0={v:g}: {f.slope:.3f}" for v, f in fits.items())
                  + " (required in [-2.1, -1.9])")
    assert ok


def test_criterion_8_unitarity_parity(report, rng):
    k = np.linspace(0.05, 15, 2000)
    worst_sum = 0.0
    worst_parity = 0.0
    for rho in (1.5, 2.5, 4.0, 8.0):
        for g in (1, 3, 6):
            p = SvcParams(rho, g, 20.0, 15.0)
            s = an.sweep(p, 0.05, 15, 2000)
            worst_sum = max(worst_sum, float(np.max(np.abs(s.t + s.r - 1))))
            lay = geo.build_layout(p)
            worst_parity = max(worst_parity, float(np.max(np.abs(
                oracle_transmission(lay.reversed(), k) - oracle_transmission(lay, k)))))
    n = 10_000
    kk = rng.uniform(0.01, 20, n)
    v = rng.uniform(0, 50, n)
    kk[::4] = np.sqrt(v[::4]) * (1 + rng.uniform(-1e-7, 1e-7, kk[::4].size)) + 1e-12
    b = rng.uniform(0, 2, n)
    dets = np.array([barrier_matrix(a, c, d).det for a, c, d in zip(kk, v, b)])
    size = np.array([max(1.0, abs(barrier_matrix(a, c, d).m22) ** 2) for a, c, d in zip(kk, v, b)])
    worst_det = float(np.max(np.abs(dets - 1) / size))
    ok = worst_sum <= 1e-12 and worst_parity <= 1e-12 and worst_det <= 1e-10
    report(8, ok, f"|T + R - 1| = {worst_sum:.1e} (<= 1e-12), reversed-layout {worst_parity:.1e} "
                  f"(<= 1e-12), |det M - 1| = {worst_det:.1e} (<= 1e-10)")
    assert ok


def test_criterion_9_performance_trend(report):
    # large enough that per-point work, not per-call overhead, sets the oracle cost
    grid = np.linspace(0.05, 15, 1000)
    p = SvcParams(2.5, 1, 20.0, 15.0)
    rep = an.benchmark(p, grid, stages=range(6, 13), repeats=5, oracle_max_stage=12)
    ratios = [r["oracle_ratio"] for r in rep["stages"][1:]]  # G -> G + 1 for G = 6..11
    closed = an.benchmark(p, grid, stages=[12, 24], repeats=5, oracle_max_stage=0)["stages"][1]["closed_ratio"]
    one = SvcParams(2.5, 30, 20.0, 15.0)
    t0 = time.perf_counter()
    for x in np.linspace(0.05, 15, 200):
        svc_transmission(one, x)
    per_point = (time.perf_counter() - t0) / 200
    ok = all(1.6 <= r <= 2.6 for r in ratios) and closed <= 3.0 and per_point < 1e-2
    report(9, ok, "oracle ratio G->G+1 for G=6..11: " + ", ".join(f"{r:.2f}" for r in ratios)
                  + f" (in [1.6, 2.6]); closed(24)/closed(12) = {closed:.2f} (<= 3); "
                  f"G=30 {per_point * 1e3:.3f} ms/point (< 10)")
    assert ok
