import math

import numpy as np
import pytest

from svc_tunneling import analysis as an
from svc_tunneling.geometry import SvcParams, barrier_height
from svc_tunneling.spp import svc_amplitude, svc_transmission

GRID = np.linspace(0.1, 15, 2000)


def test_sweep_endpoints_and_reflection():
    p = SvcParams(2.5, 4, 20.0, 15.0)
    s = an.sweep(p, 0.5, 3.0, 2)
    np.testing.assert_array_equal(s.k, [0.5, 3.0])
    s = an.sweep(p, 0.05, 15, 2000)
    assert len(s) == 2000 and s.method == "closed_form" and s.params is p
    assert np.max(np.abs(s.t + s.r - 1)) <= 1e-12


def test_sweep_free_potential():
    s = an.sweep(SvcParams(2.5, 4, 0.0, 15.0), 0.05, 15, 500)
    np.testing.assert_array_equal(s.t, 1.0)


def test_sweep_methods_agree():
    p = SvcParams(4.0, 6, 20.0, 15.0)
    a = an.sweep(p, 0.05, 15, 2000, "closed")
    b = an.sweep(p, 0.05, 15, 2000, "oracle")
    assert b.method == "oracle"
    assert np.max(np.abs(a.t - b.t)) <= 1e-8


@pytest.mark.parametrize("args", [(0.0, 1.0, 10), (-1.0, 1.0, 10), (2.0, 1.0, 10), (0.1, 1.0, 1)])
def test_sweep_rejects(args):
    with pytest.raises(ValueError):
        an.sweep(SvcParams(2.0, 1, 1.0, 1.0), *args)


def test_method_names():
    assert an.normalize_method("closed") == "closed_form"
    assert an.normalize_method("oracle") == "oracle"
    with pytest.raises(ValueError):
        an.normalize_method("brute")
    with pytest.raises(ValueError):
        an.transmission(SvcParams(2.0, 25, 1.0, 1.0), 1.0, "oracle")


def test_threaded_sweep_matches_serial(monkeypatch):
    p = SvcParams(2.5, 8, 20.0, 15.0)
    monkeypatch.setenv("SVC_THREADS", "1")
    serial = an.sweep(p, 0.05, 15, 20_000)
    monkeypatch.setenv("SVC_THREADS", "3")
    assert an.thread_count() == 3
    threaded = an.sweep(p, 0.05, 15, 20_000)
    np.testing.assert_array_equal(serial.t, threaded.t)


def test_resonances_free_potential_is_empty():
    assert an.find_resonances(SvcParams(2.0, 3, 0.0, 15.0), 0.5, 8) == []


def test_resonances_single_barrier_analytic():
    v, span = 20.0, 15.0
    res = an.find_resonances(SvcParams(2.0, 0, v, span), 4.6, 8.0)
    m = np.arange(1, 200)
    expected = np.sqrt(v + (m * np.pi / span) ** 2)
    expected = expected[(expected > 4.6) & (expected < 8.0)]
    assert len(res) == len(expected)
    got = np.array([r.k_star for r in res])
    np.testing.assert_allclose(got, expected, rtol=0, atol=1e-8)
    assert all(r.t_peak >= 0.999 and r.k_star > 4.6 for r in res)


@pytest.mark.parametrize("rho, fixtures", [
    (2.2, [0.8641018144883497, 1.2954421544169639, 1.725846987989355, 2.154831529867848]),
    (2.5, [1.9439943286852617, 2.4260299090229434, 2.6177239459990855, 2.904485782257387]),
])
def test_sharp_resonances_fixture(rho, fixtures):
    res = an.find_resonances(SvcParams(rho, 4, 20.0, 15.0), 0.5, 8.0)
    sharp = [r for r in res if r.resolved and r.width < 1e-3]
    assert len(sharp) >= 2
    got = [r.k_star for r in sharp[:4]]
    np.testing.assert_allclose(got, fixtures, rtol=0, atol=1e-9)
    for r in res:
        assert r.t_peak >= 0.999 and 0.5 < r.k_star < 8.0


def test_resonances_deterministic():
    p = SvcParams(2.5, 4, 20.0, 15.0)
    assert an.find_resonances(p, 0.5, 5) == an.find_resonances(p, 0.5, 5)


def test_resonance_width_is_half_maximum_width():
    p = SvcParams(2.5, 4, 20.0, 15.0)
    r = [x for x in an.find_resonances(p, 2.5, 2.7) if x.resolved][0]
    # T at the two flanks is about 0.5, the peak itself is near 1
    t_in = svc_transmission(p, r.k_star + np.array([-0.2, 0.2]) * r.width)
    assert np.all(t_in > 0.5)
    assert r.width > 0


def test_resonance_threshold():
    p = SvcParams(2.5, 4, 20.0, 15.0)
    loose = an.find_resonances(p, 0.5, 8, threshold=0.5)
    strict = an.find_resonances(p, 0.5, 8)
    assert len(loose) >= len(strict)
    with pytest.raises(ValueError):
        an.find_resonances(p, 3, 2)


def test_saturation_metric():
    base = SvcParams(6.0, 2, 20.0, 15.0)
    assert an.saturation_metric(base, 4, 4, GRID) == 0.0
    late = an.saturation_metric(base, 6, 8, GRID)
    early = an.saturation_metric(base, 2, 4, GRID)
    assert late == pytest.approx(0.0018473490325070507, rel=1e-6)
    assert early == pytest.approx(0.926453697401616, rel=1e-6)
    assert late < early
    assert an.saturation_metric(SvcParams(6.0, 2, 0.0, 15.0), 1, 7, GRID) == 0.0


def test_saturation_sequence_non_increasing():
    base = SvcParams(6.0, 2, 20.0, 15.0)
    seq = [an.saturation_metric(base, g, g + 1, GRID) for g in range(2, 8)]
    assert all(math.isfinite(x) for x in seq)
    assert all(b <= 1.1 * a for a, b in zip(seq, seq[1:]))


def test_rg_convergence(area_params):
    k = np.linspace(1, 100, 4000)
    assert an.rg_convergence(area_params, [5], k) == []
    d = an.rg_convergence(area_params, [4, 5, 10, 15], k)
    assert len(d) == 3
    assert d[2] <= 1e-3
    assert d[0] > d[2]
    with pytest.raises(ValueError):
        an.rg_convergence(area_params, [5, 4], k)


def test_scaling_fit_single_barrier_slope():
    # R envelope of one barrier: eps-^2 at sin^2 = 1 is V^2 / (4 k^2 kappa^2) ~ V^2 / (4 k^4)
    fit = an.scaling_fit(SvcParams(3.5, 0, 10.0, 1.0, area_preserving=True), (50, 500))
    assert fit.slope == pytest.approx(-4.0, abs=0.02)
    assert fit.intercept == pytest.approx(math.log(10.0 ** 2 / 4), abs=0.05)
    assert fit.n_points >= 10


def test_reflection_scales_with_height_squared():
    # at large k, R / V0^2 is height independent; compare the k^4-weighted window averages
    k = np.linspace(50, 500, 20_000)
    for g in (0, 5, 10):
        lo = 1 - svc_transmission(SvcParams(3.5, g, 10.0, 1.0, area_preserving=True), k)
        hi = 1 - svc_transmission(SvcParams(3.5, g, 20.0, 1.0, area_preserving=True), k)
        ratio = np.trapezoid(hi * k ** 4, k) / np.trapezoid(lo * k ** 4, k)
        assert ratio == pytest.approx(4.0, rel=1e-2)


def test_scaling_fit_grid_independent(area_params):
    a = an.scaling_fit(area_params, (50, 500), n_points=20_000)
    b = an.scaling_fit(area_params, (50, 500), n_points=100_000)
    assert a.n_points == b.n_points
    assert a.slope == pytest.approx(b.slope, abs=0.01)
    assert a.to_dict()["k_window"] == (50.0, 500.0)


def test_signed_amplitude_matches_transmission(area_params):
    k = np.linspace(50, 60, 500)
    amp = svc_amplitude(area_params, k)
    np.testing.assert_allclose(1 / (1 + amp ** 2), svc_transmission(area_params, k), rtol=1e-14)


def test_scaling_fit_guards(area_params):
    vg = barrier_height(area_params)
    with pytest.raises(ValueError):
        an.scaling_fit(area_params, (0.5 * math.sqrt(vg), 500))
    with pytest.raises(an.WindowTooNarrowError):
        an.scaling_fit(area_params, (50, 50.5), n_points=50)


def test_benchmark_report():
    p = SvcParams(2.5, 1, 20.0, 15.0)
    rep = an.benchmark(p, np.linspace(0.05, 15, 50), stages=range(1, 4), repeats=5, oracle_max_stage=2)
    rows = rep["stages"]
    assert [r["stage"] for r in rows] == [1, 2, 3]
    assert rows[2]["oracle_ns"] is None and "oracle_ratio" not in rows[2]
    assert rows[1]["oracle_ratio"] > 0 and rows[1]["closed_ratio"] > 0
    with pytest.raises(ValueError):
        an.benchmark(p, np.linspace(0.05, 15, 50), repeats=3)
