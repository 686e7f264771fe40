"""Perturbation and translation scans of the deficit, and the two-ball separation threshold."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import NotFoundError, PreconditionError
from .geometry import Disk, FourierStar, Union, area
from .measures import DeficitReport, deficit
from .reporting import to_csv


@dataclass
class ScanResult:
    grid: dict
    params: list
    reports: list = field(repr=False)
    seed: int | None = None
    tol: float = 1e-9

    @property
    def deficits(self) -> np.ndarray:
        return np.array([r.deficit for r in self.reports])

    @property
    def min_deficit(self) -> float:
        return float(self.deficits.min())

    @property
    def argmin(self):
        return self.params[int(np.argmin(self.deficits))]

    @property
    def crossings(self) -> list[float]:
        """Parameter values where the deficit changes sign, linearly interpolated.

        Only defined for scalar parameter grids; otherwise empty.
        """
        if not all(isinstance(v, (int, float)) for v in self.params):
            return []
        x = np.asarray(self.params, dtype=float)
        d = self.deficits
        out = []
        for i in range(len(d) - 1):
            if d[i] * d[i + 1] < 0:
                out.append(float(x[i] - d[i] * (x[i + 1] - x[i]) / (d[i + 1] - d[i])))
        return out

    @property
    def violations(self) -> list[int]:
        """Indices of in-hypothesis points whose deficit is below ``-tol``."""
        return [i for i, r in enumerate(self.reports) if r.verdict == "fails"]

    def rows(self):
        for par, rep in zip(self.params, self.reports):
            yield [par, rep.lhs, rep.rhs, rep.deficit, rep.verdict]

    def to_csv(self) -> str:
        return to_csv([self.grid.get("parameter", "param"), "lhs", "rhs", "deficit", "verdict"],
                      self.rows())

    def summary(self) -> dict:
        return {
            "grid": self.grid,
            "n": len(self.reports),
            "min_deficit": self.min_deficit,
            "argmin": self.argmin,
            "thresholds": self.crossings,
            "violations": len(self.violations),
            "seed": self.seed,
        }


def _perturbed_disk(rng: np.random.Generator, K: int, amp: float) -> FourierStar:
    k = np.arange(1, K + 1)
    c = amp * rng.uniform(-1, 1, K) / k
    s = amp * rng.uniform(-1, 1, K) / k
    star = FourierStar(0j, 1.0, c, s)
    theta = np.linspace(0, 2 * np.pi, 64 * K + 64, endpoint=False)
    if star.radius_at(theta).min() <= 0:
        raise PreconditionError(f"amplitude {amp} gives a nonpositive radius")
    return star.scaled(1 / math.sqrt(area(star) / math.pi))


def perturbation_scan(p: float, K: int = 6, amp: float = 0.1, n: int = 100, seed: int = 0,
                      order: int = 256, tol: float = 1e-9) -> ScanResult:
    """Deficits of ``n`` random Fourier perturbations of the unit disk at area pi."""
    if K < 1 or n < 1:
        raise PreconditionError("K and n must be positive")
    rng = np.random.default_rng(seed)
    reports = [deficit(_perturbed_disk(rng, K, amp), p, tol, order) for _ in range(n)]
    grid = {"kind": "perturbation", "parameter": "sample", "p": p, "K": K, "amp": amp, "n": n}
    return ScanResult(grid, list(range(n)), reports, seed, tol)


def translate_scan(R: float, p: float, offsets, order: int = 256, tol: float = 1e-9) -> ScanResult:
    """Deficit of the disk ``B_R((c, 0))`` for each offset ``c``."""
    offsets = [float(c) for c in offsets]
    if any(c < 0 for c in offsets):
        raise PreconditionError("offsets must be nonnegative")
    if p < 0 and any(c >= R for c in offsets):
        raise PreconditionError("for p < 0 every offset must keep the origin inside (c < R)")
    reports = [deficit(Disk(complex(c, 0), R), p, tol, order) for c in offsets]
    grid = {"kind": "translate", "parameter": "offset", "p": p, "R": R}
    return ScanResult(grid, offsets, reports, None, tol)


class TwoBallThreshold(NamedTuple):
    separation: float
    lower: float
    upper: float
    evaluations: int


def two_ball_deficit(r: float, s: float, p: float, order: int = 256) -> DeficitReport:
    return deficit(Union([Disk(0j, r), Disk(complex(s, 0), r)]), p, order=order)


def two_ball_threshold(r: float, p: float, order: int = 256, rtol: float = 1e-6,
                       max_ratio: float = 1e6) -> TwoBallThreshold:
    """Separation at which two disjoint radius-``r`` disks stop satisfying the inequality.

    The bracket starts at ``s = 2.5 r`` and doubles until the deficit turns
    negative, then bisects to a width below ``rtol * r``.
    """
    if not -1 <= p < 0:
        raise PreconditionError(f"p must lie in [-1, 0), got {p}")
    if r <= 0:
        raise PreconditionError("radius must be positive")
    evals = 0

    def f(s):
        nonlocal evals
        evals += 1
        return two_ball_deficit(r, s, p, order).deficit

    lo = 2.5 * r
    f_lo = f(lo)
    if f_lo < 0:
        raise NotFoundError(f"deficit already negative at s = {lo}")
    hi = lo
    while True:
        hi = 2 * lo
        if hi > max_ratio * r:
            raise NotFoundError(f"no sign change of the deficit for s <= {max_ratio:g} r")
        if f(hi) < 0:
            break
        lo = hi
    while hi - lo >= rtol * r:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            hi = mid
        else:
            lo = mid
    return TwoBallThreshold(0.5 * (lo + hi), lo, hi, evals)
