"""Plane-wave transfer matrices of rectangular barriers and related primitives.

Convention: a barrier of width ``b`` and height ``v`` has

    M11 = (cos kb' - i eps+ sin kb') e^{ikb},  M12 =  i eps- sin kb'
    M21 = -i eps- sin kb',                    M22 = (cos kb' + i eps+ sin kb') e^{-ikb}

with ``kb' = kappa * b``, ``kappa = sqrt(k**2 - v)`` and
``eps+- = (k/kappa +- kappa/k) / 2``.  Free propagation is the identity, and the
transmission probability is ``1 / |M22|**2``.

All functions broadcast over numpy arrays of ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TransferMatrix",
    "PolarElement",
    "DegenerateMatrixError",
    "kappa",
    "stable_sinc_kappa",
    "barrier_matrix",
    "chebyshev_u",
    "polar_m22",
]

_SERIES_SWITCH = 1e-4


class DegenerateMatrixError(ArithmeticError):
    """Raised when ``M22`` vanishes, which no physical barrier produces."""


@dataclass(frozen=True)
class TransferMatrix:
    m11: np.ndarray | complex
    m12: np.ndarray | complex
    m21: np.ndarray | complex
    m22: np.ndarray | complex

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def transmission(self):
        """``1 / (1 + |m12|**2)``, equal to ``1 / |m22|**2`` for a lossless scatterer
        but never above 1 after rounding."""
        return 1.0 / (1.0 + np.abs(self.m12) ** 2)

    def as_array(self) -> np.ndarray:
        """Stack into shape ``(..., 2, 2)``."""
        m11, m12, m21, m22 = np.broadcast_arrays(self.m11, self.m12, self.m21, self.m22)
        return np.stack([np.stack([m11, m12], -1), np.stack([m21, m22], -1)], -2)

    @classmethod
    def from_array(cls, a) -> TransferMatrix:
        a = np.asarray(a)
        return cls(a[..., 0, 0], a[..., 0, 1], a[..., 1, 0], a[..., 1, 1])

    def __matmul__(self, other: TransferMatrix) -> TransferMatrix:
        return TransferMatrix(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )


@dataclass(frozen=True)
class PolarElement:
    """``M22 = modulus * exp(1j * argument)``, argument in ``(-pi, pi]``."""

    modulus: np.ndarray | float
    argument: np.ndarray | float

    @property
    def value(self):
        return self.modulus * np.exp(1j * self.argument)


def kappa(k, v):
    """Wavenumber inside the barrier; ``1j * sqrt(v - k**2)`` below the top."""
    q2 = np.asarray(k, dtype=float) ** 2 - v
    return np.where(q2 >= 0, np.sqrt(np.abs(q2)) + 0j, 1j * np.sqrt(np.abs(q2)))


def stable_sinc_kappa(kappa, b):
    """``sin(kappa * b) / kappa`` with the ``kappa -> 0`` limit ``b``.

    A three-term Taylor series is used when ``|kappa * b| < 1e-4``.
    """
    kap = np.asarray(kappa, dtype=complex)
    x = kap * b
    small = np.abs(x) < _SERIES_SWITCH
    safe = np.where(small, 1.0, kap)
    x2 = x * x
    series = b * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    out = np.where(small, series, np.sin(np.where(small, 1.0, x)) / safe)
    return out[()] if out.ndim == 0 else out


def barrier_matrix(k, v: float, b: float) -> TransferMatrix:
    """Transfer matrix of a rectangular barrier of height ``v`` and width ``b``.

    Finite at ``k**2 == v``: ``eps+- sin(kappa b)`` are evaluated as
    ``(k**2 +- kappa**2) / (2k) * sin(kappa b) / kappa``.
    """
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("barrier_matrix requires k > 0")
    if b < 0:
        raise ValueError("barrier width must be >= 0")
    kap = kappa(k, v)
    sinc = stable_sinc_kappa(kap, b)
    kap2 = k * k - v
    # both products are real in the propagating and the evanescent regime
    eps_p_sin = ((k * k + kap2) / (2.0 * k) * sinc).real
    eps_m_sin = ((k * k - kap2) / (2.0 * k) * sinc).real
    cos_kb = np.cos(kap * b).real
    phase = np.exp(1j * k * b)
    m11 = (cos_kb - 1j * eps_p_sin) * phase
    m22 = (cos_kb + 1j * eps_p_sin) * np.conj(phase)
    m12 = 1j * eps_m_sin
    return TransferMatrix(m11, m12, -m12, m22)


def chebyshev_u(n: int, y):
    """Chebyshev polynomial of the second kind ``U_n(y)`` for ``n >= -1``.

    Evaluated by the three-term recurrence, so any real ``y`` is allowed.
    """
    if n < -1:
        raise ValueError("chebyshev_u is defined here for n >= -1")
    y = np.asarray(y, dtype=float)
    prev, cur = np.zeros_like(y), np.ones_like(y)
    if n == -1:
        return prev[()] if prev.ndim == 0 else prev
    for _ in range(n):
        prev, cur = cur, 2.0 * y * cur - prev
    return cur[()] if cur.ndim == 0 else cur


def polar_m22(m: TransferMatrix) -> PolarElement:
    """Modulus and argument of ``m22``."""
    m22 = np.asarray(m.m22, dtype=complex)
    modulus = np.abs(m22)
    if np.any(modulus == 0):
        raise DegenerateMatrixError("m22 == 0: not a physical scatterer")
    arg = np.angle(m22)
    arg = np.where(arg <= -np.pi, np.pi, arg)
    if arg.ndim == 0:
        return PolarElement(float(modulus), float(arg))
    return PolarElement(modulus, arg)
