"""Closed-form transmission of super-periodic potentials (SPP).

A unit cell of width ``b`` is repeated ``N_1`` times with spacing ``s_1``; that
block is repeated ``N_2`` times with spacing ``s_2``, and so on.  With ``M`` the
unit-cell transfer matrix,

    T = 1 / (1 + [|M12| * prod_j U_{N_j - 1}(zeta_j)]**2)

where ``U_n`` are Chebyshev polynomials of the second kind and the Bloch-phase
arguments ``zeta_j`` follow from a recursion over the hierarchy levels.  The
SVC(rho) potential of stage ``G`` is the case ``N_j = 2`` for all ``j`` with
``b = l_G`` and spacings from :func:`svc_tunneling.geometry.spacing`, which makes
``T_G(k)`` cost ``O(G)`` per wavenumber instead of ``O(2**G)``.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from svc_tunneling import geometry as geo
from svc_tunneling.geometry import Layout, SvcParams
from svc_tunneling.xfer import PolarElement, TransferMatrix, barrier_matrix, chebyshev_u, polar_m22

__all__ = [
    "NumericGuardError",
    "OVERFLOW_SWITCH",
    "SppGeometry",
    "ZetaSequence",
    "svc_geometry",
    "spp_layout",
    "zeta_1",
    "zeta_2",
    "general_zeta",
    "zeta_n2_fast",
    "spp_zetas",
    "svc_zetas",
    "transmission_from_amplitude",
    "spp_transmission",
    "svc_transmission",
    "svc_amplitude",
    "svc_reflection",
]

OVERFLOW_SWITCH = 1e150


class NumericGuardError(FloatingPointError):
    """A spectrum evaluation produced values the overflow guard cannot interpret."""


@dataclass(frozen=True)
class SppGeometry:
    """Hierarchy of repetitions built on a unit cell of width ``unit_width``.

    ``spacings[j-1]`` and ``repetitions[j-1]`` are ``s_j`` and ``N_j``.
    """

    unit_width: float
    spacings: np.ndarray
    repetitions: np.ndarray
    spans: np.ndarray = field(init=False)

    def __post_init__(self):
        s = np.atleast_1d(np.asarray(self.spacings, dtype=float))
        n = np.atleast_1d(np.asarray(self.repetitions, dtype=int))
        if s.shape != n.shape:
            raise ValueError("spacings and repetitions must have the same length")
        if np.any(n < 1):
            raise ValueError("repetitions must be >= 1")
        spans = [float(self.unit_width)]
        for sj, nj in zip(s, n):
            if nj > 1 and sj < spans[-1] * (1.0 - 1e-12):
                raise ValueError(f"spacing {sj} smaller than block span {spans[-1]}: cells overlap")
            spans.append(spans[-1] + (nj - 1) * sj)
        object.__setattr__(self, "spacings", s)
        object.__setattr__(self, "repetitions", n)
        object.__setattr__(self, "spans", np.array(spans))

    @property
    def order(self) -> int:
        return self.spacings.size


@dataclass(frozen=True)
class ZetaSequence:
    """``zeta_1 .. zeta_n`` on a k grid; ``values[j-1]`` holds ``zeta_j``."""

    values: list
    k: np.ndarray | float
    geometry: SppGeometry | None = None

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def svc_geometry(params: SvcParams) -> SppGeometry:
    """SPP description of an SVC(rho) potential: ``b = l_G``, ``N_j = 2``."""
    g = params.stage
    return SppGeometry(geo.segment_length(params), geo.spacings(params), np.full(g, 2))


def spp_layout(geometry: SppGeometry, height: float) -> Layout:
    """Explicit cell positions of an SPP, left edge at 0."""
    starts = np.zeros(1)
    for sj, nj in zip(geometry.spacings, geometry.repetitions):
        starts = (starts[None, :] + sj * np.arange(nj)[:, None]).ravel()
    starts.sort()
    widths = np.full(starts.shape, float(geometry.unit_width))
    return Layout(starts, widths, float(height), float(geometry.spans[-1]))


def zeta_1(m: PolarElement, k, s1: float):
    return m.modulus * np.cos(m.argument + k * s1)


def zeta_2(m: PolarElement, zeta1, k, n1: int, s1: float, s2: float):
    return (m.modulus * chebyshev_u(n1 - 1, zeta1) * np.cos(m.argument - k * ((n1 - 1) * s1 - s2))
            - chebyshev_u(n1 - 2, zeta1) * np.cos(k * (n1 * s1 - s2)))


def general_zeta(j: int, m: PolarElement, prior: Sequence, k, geometry: SppGeometry):
    """``zeta_j`` for arbitrary repetition counts, ``j >= 2``.

    ``prior`` must hold ``zeta_1 .. zeta_{j-1}``.
    """
    if j < 2:
        raise ValueError("general_zeta needs j >= 2; use zeta_1 for the first level")
    if len(prior) < j - 1:
        raise ValueError(f"need zeta_1..zeta_{j - 1}, got {len(prior)} values")
    n = geometry.repetitions
    s = geometry.spacings
    if j > s.size:
        raise ValueError(f"geometry has order {s.size} < {j}")
    u1 = [chebyshev_u(n[p] - 1, prior[p]) for p in range(j - 1)]
    u2 = [chebyshev_u(n[p] - 2, prior[p]) for p in range(j - 1)]

    shift = np.sum((n[: j - 1] - 1) * s[: j - 1]) - s[j - 1]
    lead = m.modulus * np.cos(m.argument - k * shift) * np.prod(u1, axis=0)

    corr = 0.0
    for r in range(1, j - 1):
        arg = np.sum(n[r - 1 : j - 1] * s[r - 1 : j - 1]) - np.sum(s[r:j])
        tail = np.prod(u1[r : j - 1], axis=0) if r < j - 1 else 1.0
        corr = corr + np.cos(k * arg) * u2[r - 1] * tail

    trail = u2[j - 2] * np.cos(k * (n[j - 2] * s[j - 2] - s[j - 1]))
    return lead - corr - trail


def zeta_n2_fast(j: int, m: PolarElement, prior: Sequence, k, spacings):
    """``zeta_j`` when every level repeats twice (the SVC case), ``j >= 1``."""
    s = np.asarray(spacings, dtype=float)
    cum = np.concatenate([[0.0], np.cumsum(s[:j])])  # cum[i] = s_1 + ... + s_i
    sj = s[j - 1]
    total = 0.0
    tail = 1.0  # prod_{p=r+1}^{j-1} zeta_p, grows as r decreases
    for r in range(j - 1, 0, -1):
        eta2 = (cum[j] - cum[r - 1]) - (2.0 * sj - s[r - 1])
        total = total + 2.0 ** (j - r - 1) * np.cos(k * eta2) * tail
        tail = tail * prior[r - 1]
    eta1 = cum[j - 1] - sj
    return 2.0 ** (j - 1) * m.modulus * np.cos(m.argument - k * eta1) * tail - total


def spp_zetas(m: PolarElement, k, geometry: SppGeometry) -> ZetaSequence:
    """All ``zeta_j`` through the general-N recursion."""
    vals = []
    n_levels = geometry.order
    if n_levels >= 1:
        vals.append(zeta_1(m, k, geometry.spacings[0]))
    if n_levels >= 2:
        s = geometry.spacings
        vals.append(zeta_2(m, vals[0], k, int(geometry.repetitions[0]), s[0], s[1]))
    for j in range(3, n_levels + 1):
        vals.append(general_zeta(j, m, vals, k, geometry))
    return ZetaSequence(vals, k, geometry)


def _svc_parts(params: SvcParams, k):
    geom = svc_geometry(params)
    m = barrier_matrix(k, geo.barrier_height(params), geom.unit_width)
    return geom, m


def _n2_recursion(m22, k, spacings) -> list:
    """All ``zeta_j`` of an N=2 hierarchy in O(G).

    Same quantity as :func:`zeta_n2_fast`, with its two sums carried as one
    complex accumulator: ``zeta_j = Re(exp(1j k eta_1(j)) D_j)``,
    ``D_1 = conj(M22)``, ``D_{j+1} = 2 zeta_j D_j - exp(1j k (s_j - S_{j-1}))``
    where ``S_i = s_1 + ... + s_i``.
    """
    d = np.conj(m22)
    before = 0.0
    vals = []
    for sj in spacings:
        z = (np.exp(1j * k * (before - sj)) * d).real
        vals.append(z)
        d = 2.0 * z * d - np.exp(1j * k * (sj - before))
        before += sj
    return vals


def svc_zetas(params: SvcParams, k) -> ZetaSequence:
    """``zeta_1 .. zeta_G`` of an SVC(rho) potential."""
    k = np.asarray(k, dtype=float)
    geom, m = _svc_parts(params, k)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = _n2_recursion(m.m22, k, geom.spacings)
    return ZetaSequence(vals, k, geom)


def transmission_from_amplitude(m12_abs, factors, scale: float = 1.0):
    """``1 / (1 + (scale * |M12| * prod(factors))**2)`` with an overflow guard.

    The product is formed directly while it stays below ``OVERFLOW_SWITCH``;
    otherwise the squared amplitude is accumulated as a log-magnitude and the
    transmission taken as ``expit(-log)``, which saturates to 0.
    """
    m12_abs = np.asarray(m12_abs, dtype=float)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        x = scale * m12_abs
        log_x = np.log(scale) + np.log(m12_abs)
        for f in factors:
            f = np.asarray(f, dtype=float)
            x = x * f
            log_x = log_x + np.log(np.abs(f))
        direct = 1.0 / (1.0 + x * x)
        guarded = expit(-2.0 * log_x)
        use_direct = np.isfinite(x) & (np.abs(x) < OVERFLOW_SWITCH)
        t = np.where(use_direct, direct, guarded)
        # inf - inf inside the recursion: amplitude is beyond double range
        t = np.where(np.isnan(t) & ~np.isnan(m12_abs), 0.0, t)
    if np.any(np.isnan(t)):
        raise NumericGuardError("transmission evaluated to NaN")
    return t[()] if t.ndim == 0 else t


def spp_transmission(m: TransferMatrix, geometry: SppGeometry, k):
    """Transmission of an SPP from its unit-cell matrix ``m``."""
    k = np.asarray(k, dtype=float)
    z = spp_zetas(polar_m22(m), k, geometry)
    factors = [chebyshev_u(int(nj) - 1, zj) for nj, zj in zip(geometry.repetitions, z.values)]
    return transmission_from_amplitude(np.abs(m.m12), factors)


def svc_transmission(params: SvcParams, k):
    """Closed-form ``T_G(k)`` of an SVC(rho) potential.

    ``T_G = 1 / (1 + 4**G |eps- sin(kappa l_G)|**2 prod zeta_j**2)``.
    """
    k = np.asarray(k, dtype=float)
    geom, m = _svc_parts(params, k)
    with np.errstate(over="ignore", invalid="ignore"):
        zetas = _n2_recursion(m.m22, k, geom.spacings)
    return transmission_from_amplitude(np.abs(m.m12), zetas, scale=2.0 ** params.stage)


def svc_amplitude(params: SvcParams, k):
    """Signed real amplitude ``A = 2**G eps- sin(kappa l_G) prod zeta_j``, with ``T = 1 / (1 + A**2)``.

    Its zeros are the perfect-transmission resonances.  No overflow guard: values
    beyond double range come back as ``inf``.
    """
    k = np.asarray(k, dtype=float)
    geom, m = _svc_parts(params, k)
    with np.errstate(over="ignore", invalid="ignore"):
        a = 2.0 ** params.stage * np.asarray(m.m12).imag
        for z in _n2_recursion(m.m22, k, geom.spacings):
            a = a * z
    return a


def svc_reflection(params: SvcParams, k):
    return 1.0 - svc_transmission(params, k)
