"""Geometry of the general Smith-Volterra-Cantor barrier SVC(rho).

Starting from a single barrier on ``[0, L]``, stage ``j`` removes the central
fraction ``1/rho**j`` of every remaining segment.  After ``G`` stages there are
``2**G`` equal segments of width ``l_G``.  Closed forms for ``l_G`` and for the
start-to-start spacings ``s_p`` of the equivalent super-periodic construction
are expressed through the q-Pochhammer symbol.

Units: hbar**2 / 2m = 1, so energies are ``k**2`` and heights share those units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from svc_tunneling._fmt import dumps

__all__ = [
    "RHO_MIN",
    "MAX_LAYOUT_STAGE",
    "SvcParams",
    "Layout",
    "q_pochhammer",
    "segment_length",
    "spacing",
    "spacing_from_lengths",
    "spacings",
    "build_layout",
    "area_preserving_height",
    "barrier_height",
]

RHO_MIN = 1.0 + 1e-9
MAX_LAYOUT_STAGE = 64


@dataclass(frozen=True)
class SvcParams:
    """Parameters of one SVC(rho) potential.

    Parameters
    ----------
    rho : float
        Scaling parameter, strictly greater than 1.
    stage : int
        Stage ``G >= 0``.
    height : float
        Barrier height ``V``.  When ``area_preserving`` is set this is the
        stage-0 height ``V_0`` and the actual height is ``V_G``.
    span : float
        Total length ``L``.
    area_preserving : bool
        Rescale the height per stage so that the total barrier area stays
        ``V_0 * L``.
    """

    rho: float
    stage: int
    height: float
    span: float
    area_preserving: bool = False

    def __post_init__(self):
        if not (self.rho > RHO_MIN):
            raise ValueError(f"rho must satisfy rho > 1 (got {self.rho!r})")
        if int(self.stage) != self.stage or self.stage < 0:
            raise ValueError(f"stage must be an integer >= 0 (got {self.stage!r})")
        if not self.span > 0:
            raise ValueError(f"span must be > 0 (got {self.span!r})")
        # V = 0 is the free-particle limit; the analysis paths use it as a sanity case.
        if not self.height >= 0:
            raise ValueError(f"height must be >= 0 (got {self.height!r})")
        object.__setattr__(self, "stage", int(self.stage))

    def with_stage(self, stage: int) -> SvcParams:
        return replace(self, stage=stage)

    def to_dict(self) -> dict:
        return {
            "rho": float(self.rho),
            "stage": self.stage,
            "height": float(self.height),
            "span": float(self.span),
            "area_preserving": self.area_preserving,
        }


@dataclass(frozen=True)
class Layout:
    """Explicit barrier segments on ``[0, span]``, all of height ``height``."""

    starts: np.ndarray
    widths: np.ndarray
    height: float
    span: float
    rho: float | None = None
    stage: int | None = None
    _edges: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        starts = np.asarray(self.starts, dtype=float)
        widths = np.asarray(self.widths, dtype=float)
        if starts.shape != widths.shape or starts.ndim != 1:
            raise ValueError("starts and widths must be 1-d arrays of equal length")
        if np.any(widths < 0):
            raise ValueError("segment widths must be non-negative")
        ends = starts + widths
        # gaps below rounding level (large rho, high stage) may come out a few ulps negative
        slack = 8 * np.finfo(float).eps * max(float(self.span), float(np.max(np.abs(ends), initial=0.0)))
        if np.any(starts[1:] < ends[:-1] - slack):
            raise ValueError("segments must be sorted and non-overlapping")
        object.__setattr__(self, "starts", starts)
        object.__setattr__(self, "widths", widths)
        object.__setattr__(self, "_edges", np.column_stack([starts, ends]).ravel())

    @property
    def segments(self) -> list[tuple[float, float]]:
        return list(zip(self.starts.tolist(), self.widths.tolist()))

    @property
    def edges(self) -> np.ndarray:
        """Interface positions ``[x0_in, x0_out, x1_in, ...]``, length ``2 * n``."""
        return self._edges

    def __len__(self):
        return self.starts.size

    def reversed(self) -> Layout:
        """Mirror image ``x -> span - x``."""
        ends = self.starts + self.widths
        return replace(self, starts=(self.span - ends)[::-1], widths=self.widths[::-1].copy())

    def to_dict(self) -> dict:
        return {
            "rho": None if self.rho is None else float(self.rho),
            "stage": self.stage,
            "span": float(self.span),
            "height": float(self.height),
            "segments": [[s, w] for s, w in self.segments],
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> Layout:
        seg = np.asarray(data["segments"], dtype=float).reshape(-1, 2)
        return cls(seg[:, 0], seg[:, 1], float(data["height"]), float(data["span"]),
                   data.get("rho"), data.get("stage"))


def q_pochhammer(a: float, sigma: float, n: int) -> float:
    """Finite q-Pochhammer symbol ``prod_{j=0}^{n-1} (1 - a * sigma**j)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    prod = 1.0
    term = a
    for _ in range(n):
        prod *= 1.0 - term
        term *= sigma
    return prod


def _occupied_fraction(rho: float, n: int) -> float:
    return q_pochhammer(1.0 / rho, 1.0 / rho, n)


def segment_length(params: SvcParams) -> float:
    """Width ``l_G`` of each of the ``2**G`` segments."""
    return math.ldexp(params.span, -params.stage) * _occupied_fraction(params.rho, params.stage)


def spacing(p: int, params: SvcParams) -> float:
    """Start-to-start spacing ``s_p`` of the level-``p`` repetition, ``1 <= p <= G``.

    ``s_1`` is the innermost (smallest) spacing and ``s_G`` the outermost.
    """
    g = params.stage
    if not 1 <= p <= g:
        raise IndexError(f"spacing index p={p} out of range 1..{g}")
    m = g + 1 - p
    rho = params.rho
    return (math.ldexp(params.span, -m) * (1.0 + rho ** (-m))
            * _occupied_fraction(rho, g - p))


def spacing_from_lengths(p: int, params: SvcParams) -> float:
    """``s_p = l_{G+1-p} + l_{G-p} / rho**(G+1-p)`` built from segment lengths."""
    g = params.stage
    if not 1 <= p <= g:
        raise IndexError(f"spacing index p={p} out of range 1..{g}")
    m = g + 1 - p
    return (segment_length(params.with_stage(m))
            + segment_length(params.with_stage(m - 1)) / params.rho ** m)


def spacings(params: SvcParams) -> np.ndarray:
    """Array ``[s_1, ..., s_G]``."""
    return np.array([spacing(p, params) for p in range(1, params.stage + 1)], dtype=float)


def area_preserving_height(params: SvcParams) -> float:
    """Height ``V_G`` keeping the total barrier area equal to ``V_0 * L``."""
    return params.height * params.span / (2.0 ** params.stage * segment_length(params))


def barrier_height(params: SvcParams) -> float:
    """Height actually used at stage ``G`` (``V`` or ``V_G``)."""
    return area_preserving_height(params) if params.area_preserving else float(params.height)


def build_layout(params: SvcParams) -> Layout:
    """Enumerate the ``2**G`` segments by repeated middle removal."""
    g = params.stage
    if g > MAX_LAYOUT_STAGE:
        raise ValueError(f"layout enumeration is capped at stage {MAX_LAYOUT_STAGE}")
    starts = np.zeros(1)
    width = float(params.span)
    for j in range(1, g + 1):
        removed = width / params.rho ** j
        width = 0.5 * (width - removed)
        starts = np.column_stack([starts, starts + width + removed]).ravel()
    return Layout(starts, np.full(starts.shape, width), barrier_height(params),
                  float(params.span), float(params.rho), g)
