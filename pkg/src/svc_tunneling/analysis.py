"""Spectrum sweeps and the derived analyses: resonances, stage saturation,
convergence of area-preserving reflection, large-k scaling and timing."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from svc_tunneling import geometry as geo
from svc_tunneling.geometry import SvcParams
from svc_tunneling.oracle import MAX_ORACLE_STAGE, oracle_transmission
from svc_tunneling.spectrum import Spectrum
from svc_tunneling.spp import NumericGuardError, svc_amplitude, svc_transmission

__all__ = [
    "Resonance",
    "ScalingFit",
    "WindowTooNarrowError",
    "normalize_method",
    "thread_count",
    "transmission",
    "sweep",
    "find_resonances",
    "saturation_metric",
    "rg_convergence",
    "scaling_fit",
    "benchmark",
]

_CHUNK = 4096
MAX_TRISECTION_ROUNDS = 60


class WindowTooNarrowError(ValueError):
    pass


@dataclass(frozen=True)
class Resonance:
    """A transmission maximum; ``width`` is the FWHM at ``T = 0.5`` or NaN."""

    k_star: float
    t_peak: float
    width: float

    @property
    def resolved(self) -> bool:
        return math.isfinite(self.width)


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line ``log R = slope * log k + intercept`` through the R envelope."""

    slope: float
    intercept: float
    k_window: tuple[float, float]
    residual: float
    n_points: int

    def to_dict(self) -> dict:
        return asdict(self)


def normalize_method(method: str) -> str:
    if method in ("closed", "closed_form", "closed-form"):
        return "closed_form"
    if method == "oracle":
        return "oracle"
    raise ValueError(f"unknown method {method!r} (closed|oracle)")


def thread_count() -> int:
    """Worker threads for sweeps: ``SVC_THREADS`` or the CPU count."""
    env = os.environ.get("SVC_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def transmission(params: SvcParams, k, method: str = "closed_form"):
    """``T(k)`` by the closed form or by the explicit-layout oracle."""
    if normalize_method(method) == "closed_form":
        return svc_transmission(params, k)
    if params.stage > MAX_ORACLE_STAGE:
        raise ValueError(f"oracle is capped at stage {MAX_ORACLE_STAGE}")
    return oracle_transmission(geo.build_layout(params), k)


def _evaluate(params, k, method):
    k = np.asarray(k, dtype=float)
    workers = thread_count()
    if workers == 1 or k.size <= _CHUNK:
        return np.asarray(transmission(params, k, method), dtype=float)
    chunks = np.array_split(k, math.ceil(k.size / _CHUNK))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: transmission(params, c, method), chunks))
    return np.concatenate(parts)


def sweep(params: SvcParams, k_min: float, k_max: float, n_points: int,
          method: str = "closed_form") -> Spectrum:
    """Uniform grid including both end points; ``R = 1 - T``."""
    if not k_min > 0:
        raise ValueError("k_min must be > 0")
    if not k_max > k_min:
        raise ValueError("k_max must exceed k_min")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    method = normalize_method(method)
    k = np.linspace(k_min, k_max, n_points)
    t = _evaluate(params, k, method)
    return Spectrum(k, t, params=params, method=method)


def _refine_peaks(f, lo, hi, k_best, t_best, rounds, resolution):
    """Vectorised trisection of all brackets at once, keeping the best sample."""
    for _ in range(rounds):
        width = hi - lo
        active = width > np.maximum(resolution, 4 * np.spacing(hi))
        if not np.any(active):
            break
        m1 = lo + width / 3.0
        m2 = hi - width / 3.0
        f1 = f(m1)
        f2 = f(m2)
        better1 = f1 > t_best
        k_best = np.where(better1, m1, k_best)
        t_best = np.where(better1, f1, t_best)
        better2 = f2 > t_best
        k_best = np.where(better2, m2, k_best)
        t_best = np.where(better2, f2, t_best)
        go_right = f1 < f2
        lo = np.where(active & go_right, m1, lo)
        hi = np.where(active & ~go_right, m2, hi)
    return k_best, t_best


def _half_max_crossing(f, k_star, direction, step, bound):
    """Distance from ``k_star`` to where ``T`` drops to 0.5, or NaN if it never does."""
    h = step
    prev = 0.0
    while True:
        if h > bound:
            h = bound
        if h <= 0:
            return math.nan
        val = f(k_star + direction * h)
        if val < 0.5:
            return brentq(lambda d: f(k_star + direction * d) - 0.5, prev, h, xtol=1e-16, rtol=1e-15)
        if h >= bound:
            return math.nan
        prev = h
        h *= 2.0


def find_resonances(params: SvcParams, k_min: float, k_max: float, threshold: float = 0.999,
                    n_initial: int = 10_000, resolution: float = 0.0) -> list[Resonance]:
    """Transmission maxima with ``T >= threshold`` in ``(k_min, k_max)``.

    Local maxima of ``T`` on a uniform grid of ``n_initial`` points are refined by
    trisection inside their neighbouring grid cells (at most 60 rounds, or until
    the bracket is below ``resolution``).  The width is the full width at
    ``T = 0.5``; NaN when ``T`` stays above 0.5 out to the search interval.

    A potential with zero height transmits everywhere and yields no isolated
    peaks, so the result is empty.
    """
    if not 0 < k_min < k_max:
        raise ValueError("need 0 < k_min < k_max")
    if geo.barrier_height(params) == 0:
        return []

    def f(k):
        return np.asarray(svc_transmission(params, k), dtype=float)

    def f1(k):
        return float(svc_transmission(params, k))

    k = np.linspace(k_min, k_max, n_initial)
    t = f(k)
    i = np.nonzero((t[1:-1] > t[:-2]) & (t[1:-1] >= t[2:]))[0] + 1
    if i.size == 0:
        return []
    k_best, t_best = _refine_peaks(f, k[i - 1], k[i + 1], k[i], t[i], MAX_TRISECTION_ROUNDS, resolution)

    keep = t_best >= threshold
    peaks = []
    last = -math.inf
    for kb, tb in zip(k_best[keep], t_best[keep]):
        if kb - last <= 4 * np.spacing(kb):
            continue
        last = kb
        step = max(4 * np.spacing(kb), 1e-15)
        left = _half_max_crossing(f1, kb, -1.0, step, kb - k_min)
        right = _half_max_crossing(f1, kb, 1.0, step, k_max - kb)
        peaks.append(Resonance(float(kb), float(tb), float(left + right)))
    return peaks


def saturation_metric(params_base: SvcParams, g1: int, g2: int, grid) -> float:
    """``max_k |T_{g1}(k) - T_{g2}(k)|`` with everything else fixed."""
    grid = np.asarray(grid, dtype=float)
    if g1 == g2:
        return 0.0
    t1 = svc_transmission(params_base.with_stage(g1), grid)
    t2 = svc_transmission(params_base.with_stage(g2), grid)
    return float(np.max(np.abs(t1 - t2)))


def rg_convergence(params: SvcParams, g_list, grid) -> list[float]:
    """``max_k |R_{g_i} - R_{g_{i+1}}|`` for consecutive stages of ``g_list``."""
    g_list = list(g_list)
    if any(b <= a for a, b in zip(g_list, g_list[1:])):
        raise ValueError("g_list must be strictly ascending")
    grid = np.asarray(grid, dtype=float)
    refl = [1.0 - svc_transmission(params.with_stage(g), grid) for g in g_list]
    return [float(np.max(np.abs(a - b))) for a, b in zip(refl, refl[1:])]


def scaling_fit(params: SvcParams, k_window: tuple[float, float], n_points: int = 20_000) -> ScalingFit:
    """Fit ``log R`` against ``log k`` through the reflection envelope.

    The envelope holds one point per interval between consecutive transmission
    resonances: the largest ``R`` sampled there.  Resonances are located as sign
    changes of the real amplitude from :func:`svc_tunneling.spp.svc_amplitude`,
    so the point set does not depend on how finely the grid resolves the
    zeros of ``R``.  The window must lie above the barrier top.

    Parameters
    ----------
    params : SvcParams
    k_window : (float, float)
        Fit interval; ``k_window[0] > sqrt(V_G)``.
    n_points : int
        Uniform samples across the window.

    Raises
    ------
    WindowTooNarrowError
        Fewer than 10 envelope points in the window.
    """
    k_lo, k_hi = map(float, k_window)
    height = geo.barrier_height(params)
    if not k_lo > math.sqrt(height):
        raise ValueError(f"window must start above sqrt(V) = {math.sqrt(height):.6g}")
    if not k_hi > k_lo:
        raise ValueError("empty k window")
    k = np.linspace(k_lo, k_hi, n_points)
    amp = svc_amplitude(params, k)
    if not np.all(np.isfinite(amp)):
        raise NumericGuardError("reflection amplitude overflowed inside the fit window")
    r = amp * amp / (1.0 + amp * amp)
    cuts = np.nonzero(np.signbit(amp[1:]) != np.signbit(amp[:-1]))[0] + 1
    idx = np.array([lo + int(np.argmax(r[lo:hi])) for lo, hi in zip(cuts[:-1], cuts[1:])], dtype=int)
    idx = idx[r[idx] > 0] if idx.size else idx
    if idx.size < 10:
        raise WindowTooNarrowError(f"only {idx.size} envelope points in window {k_window}")
    x, y = np.log(k[idx]), np.log(r[idx])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((slope * x + intercept - y) ** 2)))
    return ScalingFit(float(slope), float(intercept), (k_lo, k_hi), residual, int(idx.size))


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def benchmark(params: SvcParams, grid, stages=range(1, 12), repeats: int = 5,
              oracle_max_stage: int = 12) -> dict:
    """Median wall-clock cost per k point of both methods, per stage.

    Repetitions run round-robin over the stages, so a transient slowdown of
    the machine hits one sample of several stages rather than every sample of
    one stage.  Returns a report with ``closed_ns`` and ``oracle_ns`` per
    stage (oracle entries are ``None`` above ``oracle_max_stage``) and the
    ratios between consecutive stages.
    """
    grid = np.asarray(grid, dtype=float)
    if repeats < 5:
        raise ValueError("use at least 5 repetitions")
    stages = list(stages)
    jobs = []
    for g in stages:
        p = params.with_stage(g)
        closed = (lambda p=p: svc_transmission(p, grid))
        oracle = None
        if g <= oracle_max_stage:
            layout = geo.build_layout(p)
            oracle = (lambda layout=layout: oracle_transmission(layout, grid))
        jobs.append((closed, oracle))
    samples = [([], []) for _ in stages]
    for _ in range(repeats):
        for (closed, oracle), (c_s, o_s) in zip(jobs, samples):
            c_s.append(_timed(closed))
            if oracle is not None:
                o_s.append(_timed(oracle))
    rows = []
    for g, (c_s, o_s) in zip(stages, samples):
        rows.append({"stage": g,
                     "closed_ns": float(np.median(c_s)) / grid.size * 1e9,
                     "oracle_ns": float(np.median(o_s)) / grid.size * 1e9 if o_s else None})
    for prev, cur in zip(rows, rows[1:]):
        cur["closed_ratio"] = cur["closed_ns"] / prev["closed_ns"]
        if cur["oracle_ns"] is not None and prev["oracle_ns"] is not None:
            cur["oracle_ratio"] = cur["oracle_ns"] / prev["oracle_ns"]
    return {"params": params.to_dict(), "points": int(grid.size), "repeats": repeats, "stages": rows}
