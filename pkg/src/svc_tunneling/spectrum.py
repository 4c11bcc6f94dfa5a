"""Sampled transmission/reflection spectra and their CSV form."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from svc_tunneling._fmt import fmt_float

__all__ = ["METHODS", "Spectrum", "read_csv"]

METHODS = ("closed_form", "oracle")


@dataclass
class Spectrum:
    """``T(k)`` and ``R(k) = 1 - T(k)`` on a grid of wavenumbers."""

    k: np.ndarray
    t: np.ndarray
    params: object = None
    method: str = "closed_form"
    r: np.ndarray = field(default=None)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.k = np.asarray(self.k, dtype=float)
        self.t = np.asarray(self.t, dtype=float)
        if self.r is None:
            self.r = 1.0 - self.t
        self.r = np.asarray(self.r, dtype=float)
        if not (self.k.shape == self.t.shape == self.r.shape):
            raise ValueError("k, T and R must have equal lengths")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")

    def __len__(self):
        return self.k.size

    def to_csv(self, path: str | PathLike | None = None) -> str:
        """``k,T,R`` rows with 17 significant digits, LF endings, no trailing blank line."""
        lines = ["k,T,R"]
        lines += [f"{fmt_float(k)},{fmt_float(t)},{fmt_float(r)}"
                  for k, t, r in zip(self.k, self.t, self.r)]
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return text


def read_csv(source) -> Spectrum:
    """Parse a ``k,T,R`` CSV (path or text) back into a :class:`Spectrum`."""
    if isinstance(source, str) and "\n" in source:
        fh = io.StringIO(source)
    else:
        fh = open(source, encoding="utf-8", newline="")
    with fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["k", "T", "R"]:
            raise ValueError(f"unexpected CSV header {header}")
        rows = np.array([[float(v) for v in row] for row in reader], dtype=float).reshape(-1, 3)
    return Spectrum(rows[:, 0], rows[:, 1], r=rows[:, 2])
