"""Brute-force transmission through an explicit segment layout.

Each region is propagated with the real 2x2 matrix that carries
``(psi, psi')`` across it; continuity of ``psi`` and ``psi'`` makes every
interface trivial.  The chain is then converted to plane-wave amplitudes at the
absolute end points ``x = 0`` and ``x = span``.  Nothing here knows about the
hierarchical structure of the layout, so agreement with the closed form in
:mod:`svc_tunneling.spp` is an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from svc_tunneling.geometry import Layout
from svc_tunneling.spectrum import Spectrum
from svc_tunneling.xfer import TransferMatrix, kappa, stable_sinc_kappa

__all__ = [
    "MAX_ORACLE_STAGE",
    "InterfaceChain",
    "interface_chain",
    "region_matrix",
    "region_matrices",
    "chain_product",
    "oracle_matrix",
    "oracle_transmission",
    "oracle_spectrum",
]

MAX_ORACLE_STAGE = 24
_RESCALE = 1e150


@dataclass(frozen=True)
class InterfaceChain:
    """Interface positions and the squared wavenumber ``k**2 - V(x)`` of each region.

    ``q2[i]`` belongs to the region between ``positions[i-1]`` and
    ``positions[i]``; ``q2[0]`` and ``q2[-1]`` are the outer free regions.
    """

    positions: np.ndarray
    potential: np.ndarray
    left: float
    right: float

    def widths(self) -> np.ndarray:
        """Widths of the regions strictly inside ``[left, right]``."""
        x = np.concatenate([[self.left], self.positions, [self.right]])
        return np.diff(x)


def interface_chain(layout: Layout) -> InterfaceChain:
    n = len(layout)
    if n > 2 ** MAX_ORACLE_STAGE:
        raise ValueError(f"oracle is capped at 2**{MAX_ORACLE_STAGE} segments")
    positions = layout.edges
    # regions: [left, x0), [x0, x0+w0), [x0+w0, x1), ... , [x_last_end, right]
    potential = np.zeros(2 * n + 1)
    potential[1::2] = layout.height
    left = min(0.0, float(positions[0])) if n else 0.0
    right = max(float(layout.span), float(positions[-1])) if n else float(layout.span)
    return InterfaceChain(positions, potential, left, right)


def region_matrix(k, v: float, d: float) -> np.ndarray:
    """Real matrix mapping ``(psi, psi')`` across a flat region of width ``d``.

    Shape ``(..., 2, 2)``; unimodular.
    """
    k = np.asarray(k, dtype=float)
    q = kappa(k, v)
    cos_qd = np.cos(q * d).real
    sinc = stable_sinc_kappa(q, d).real
    q2 = k * k - v
    out = np.empty(k.shape + (2, 2))
    out[..., 0, 0] = cos_qd
    out[..., 0, 1] = sinc
    out[..., 1, 0] = -q2 * sinc
    out[..., 1, 1] = cos_qd
    return out


def region_matrices(layout: Layout, k) -> list[np.ndarray]:
    """Per-region ``(psi, psi')`` matrices, ordered left to right."""
    chain = interface_chain(layout)
    cache = {}
    mats = []
    for d, v in zip(chain.widths(), chain.potential):
        if d == 0.0:
            continue
        key = (float(d), float(v))
        if key not in cache:
            cache[key] = region_matrix(k, v, d)
        mats.append(cache[key])
    return mats


def chain_product(mats, log_scale=None):
    """Left-to-right composition ``mats[-1] @ ... @ mats[0]`` with rescaling.

    Returns ``(product, log_scale)`` where the true product is
    ``product * exp(log_scale)``.
    """
    if not mats:
        raise ValueError("empty chain")
    prod = np.array(mats[0], dtype=float, copy=True)
    log_scale = np.zeros(prod.shape[:-2]) if log_scale is None else np.array(log_scale, dtype=float)
    for m in mats[1:]:
        prod = m @ prod
        big = np.max(np.abs(prod), axis=(-2, -1))
        over = big > _RESCALE
        if np.any(over):
            factor = np.where(over, big, 1.0)
            prod = prod / factor[..., None, None]
            log_scale = log_scale + np.log(factor)
    return prod, log_scale


def _psi_product(layout: Layout, k):
    k = np.asarray(k, dtype=float)
    mats = region_matrices(layout, k)
    if not mats:
        return np.broadcast_to(np.eye(2), k.shape + (2, 2)).copy(), np.zeros(k.shape)
    return chain_product(mats)


def oracle_matrix(layout: Layout, k) -> tuple[TransferMatrix, np.ndarray]:
    """Plane-wave transfer matrix of the whole layout.

    Maps the right-hand amplitudes ``(C, D)`` of ``e^{ikx}, e^{-ikx}`` at
    ``x >= span`` to the left-hand ones at ``x <= 0``.  Returned as
    ``(matrix, log_scale)``: the true matrix is ``matrix * exp(log_scale)``.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("oracle requires k > 0")
    chain = interface_chain(layout)
    p, log_scale = _psi_product(layout, k)
    # inverse of a unimodular 2x2: [[d, -b], [-c, a]], scaled consistently
    a, b, c, d = p[..., 0, 0], p[..., 0, 1], p[..., 1, 0], p[..., 1, 1]
    x0, x1 = chain.left, chain.right
    ik = 1j * k
    e_p, e_m = np.exp(ik * x1), np.exp(-ik * x1)
    # columns of P^{-1} Q(x1)
    r11 = d * e_p - b * ik * e_p
    r21 = -c * e_p + a * ik * e_p
    r12 = d * e_m + b * ik * e_m
    r22 = -c * e_m - a * ik * e_m
    # rows of Q(x0)^{-1}
    f_p, f_m = np.exp(-ik * x0), np.exp(ik * x0)
    m11 = 0.5 * f_p * (r11 + r21 / ik)
    m12 = 0.5 * f_p * (r12 + r22 / ik)
    m21 = 0.5 * f_m * (r11 - r21 / ik)
    m22 = 0.5 * f_m * (r12 - r22 / ik)
    return TransferMatrix(m11, m12, m21, m22), log_scale


def oracle_transmission(layout: Layout, k):
    """``T = 1 / |M22|**2`` of the composed chain; saturates to 0 on overflow."""
    m, log_scale = oracle_matrix(layout, k)
    with np.errstate(over="ignore", divide="ignore"):
        log_m22 = np.log(np.abs(m.m22)) + log_scale
        t = np.exp(-2.0 * log_m22)
    t = np.minimum(t, 1.0)
    return t[()] if t.ndim == 0 else t


def oracle_spectrum(layout: Layout, grid, params=None) -> Spectrum:
    grid = np.asarray(grid, dtype=float)
    t = oracle_transmission(layout, grid) if grid.size else np.empty(0)
    return Spectrum(grid, np.asarray(t, dtype=float), params=params, method="oracle")
