"""Caffarelli-Kohn-Nirenberg exponents and the weighted Sobolev ratio on gauge profiles.

Test functions are ``u(x) = eta(sigma(x))`` with ``sigma`` the gauge of a
star domain about the origin and ``eta`` a decreasing piecewise-linear
profile. Every superlevel set ``{u > t}`` is the base scaled by
``eta^{-1}(t)``, so all layer-cake quantities reduce to one-dimensional
integrals in the gauge variable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.special import roots_jacobi

from .exceptions import PreconditionError
from .geometry import Disk, Domain, FourierStar, _gl_nodes, area, domain_from_dict
from .measures import weighted_perimeter


class ExponentTriple(NamedTuple):
    alpha: Fraction
    gamma: Fraction
    r: Fraction


def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def ckn_admissible(e: ExponentTriple) -> bool:
    """r > 0, 0 <= alpha - gamma <= 1 and 1/r + gamma/2 = (alpha + 1)/2, in exact arithmetic."""
    alpha, gamma, r = (_exact(v) for v in e)
    if r <= 0:
        return False
    return 0 <= alpha - gamma <= 1 and 1 / r + gamma / 2 == (alpha + 1) / 2


def exponent_map(p, q) -> ExponentTriple:
    """(p, q) -> (alpha, gamma, r) = (p, q/r, (q + 2)/(p + 1)); needs r >= 1."""
    p, q = _exact(p), _exact(q)
    if p <= -1 or q <= -2:
        raise PreconditionError("need p > -1 and q > -2")
    r = (q + 2) / (p + 1)
    if r < 1:
        raise PreconditionError(f"r = (q+2)/(p+1) = {float(r):.6g} < 1")
    return ExponentTriple(p, q / r, r)


# --------------------------------------------------------------------------
# Test functions
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """``u = eta(sigma(x))`` for a star base about the origin and a piecewise-linear ``eta``."""

    __test__ = False  # keep pytest from collecting this class

    base: Domain
    breakpoints: tuple

    def __post_init__(self):
        base = self.base
        if isinstance(base, Disk) and base.center == 0:
            base = FourierStar(0j, base.radius)
        if not (isinstance(base, FourierStar) and base.center == 0):
            raise PreconditionError("test function base must be star-shaped about the origin")
        object.__setattr__(self, "base", base)
        pts = tuple((float(s), float(v)) for s, v in self.breakpoints)
        s = np.array([b[0] for b in pts])
        v = np.array([b[1] for b in pts])
        if len(pts) < 2 or s[0] != 0 or np.any(np.diff(s) <= 0):
            raise PreconditionError("breakpoints must start at s=0 and increase strictly")
        if v[0] <= 0 or v[-1] != 0 or np.any(np.diff(v) > 0) or np.any(v < 0):
            raise PreconditionError("profile must be nonincreasing from eta(0) > 0 down to 0")
        object.__setattr__(self, "breakpoints", pts)

    @property
    def s(self) -> np.ndarray:
        return np.array([b[0] for b in self.breakpoints])

    @property
    def eta(self) -> np.ndarray:
        return np.array([b[1] for b in self.breakpoints])

    @property
    def max_value(self) -> float:
        return float(self.eta[0])

    def gauge(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        return np.abs(x) / self.base.radius_at(np.angle(x))

    def __call__(self, x) -> np.ndarray:
        return np.interp(self.gauge(x), self.s, self.eta, right=0.0)

    def level_scale(self, t) -> np.ndarray:
        """Scale factor s(t) with {u > t} = s(t) * base, for 0 < t < max."""
        # eta decreasing -> interpolate the reversed arrays
        return np.interp(np.asarray(t), self.eta[::-1], self.s[::-1])

    def scaled(self, factor: float) -> "TestFunction":
        """u(x / factor): same profile over the base scaled by ``factor``."""
        return TestFunction(self.base.scaled(factor), self.breakpoints)

    def to_dict(self) -> dict:
        return {"base": self.base.to_dict(),
                "profile": {"breakpoints": [list(b) for b in self.breakpoints]}}

    @classmethod
    def from_dict(cls, obj: dict) -> "TestFunction":
        return cls(domain_from_dict(obj["base"]), obj["profile"]["breakpoints"])


def tent(base: Domain, height: float = 1.0) -> TestFunction:
    return TestFunction(base, [(0.0, height), (1.0, 0.0)])


def annular_ramp(base: Domain, eps: float) -> TestFunction:
    """1 on [0, 1 - eps], linear down to 0 at 1 (a smoothed indicator of the base)."""
    if not 0 < eps < 1:
        raise PreconditionError("eps must lie in (0, 1)")
    return TestFunction(base, [(0.0, 1.0), (1.0 - eps, 1.0), (1.0, 0.0)])


# --------------------------------------------------------------------------
# One-dimensional pieces
# --------------------------------------------------------------------------


def _radial_moment(u: TestFunction, r: float) -> float:
    """Exact int_0^inf eta(s)^r s ds for the piecewise-linear profile."""
    total = 0.0
    for (s0, e0), (s1, e1) in zip(u.breakpoints, u.breakpoints[1:]):
        if e0 == e1:
            total += e0 ** r * (s1 ** 2 - s0 ** 2) / 2
            continue
        m = (e1 - e0) / (s1 - s0)
        # s = s0 + (e - e0)/m, ds = de/m
        def prim(e):
            return (e ** (r + 1) / (r + 1) * (s0 - e0 / m) + e ** (r + 2) / ((r + 2) * m)) / m
        total += prim(e1) - prim(e0)
    return total


def _shell_moment(u: TestFunction, p: float) -> float:
    """Exact int_0^inf |eta'(s)| s^(p+1) ds."""
    total = 0.0
    for (s0, e0), (s1, e1) in zip(u.breakpoints, u.breakpoints[1:]):
        slope = abs(e1 - e0) / (s1 - s0)
        total += slope * (s1 ** (p + 2) - s0 ** (p + 2)) / (p + 2)
    return total


def _gauge_perimeter(base: FourierStar, p: float, n: int = 4096) -> float:
    """int rho^p sqrt(rho^2 + rho'^2) dtheta by the periodic trapezoid rule."""
    n = max(n, 128 * base.order)
    theta = 2 * np.pi * np.arange(n) / n
    rho = base.radius_at(theta)
    return float(2 * np.pi * np.mean(rho ** p * np.hypot(rho, base.radius_derivative(theta))))


def _check_p(p: float) -> None:
    if not -1 < p <= 1:
        raise PreconditionError(f"p must lie in (-1, 1], got {p}")


class HSRatio(NamedTuple):
    lhs: float
    rhs: float
    ratio: float


def lr_norm(u: TestFunction, p: float) -> float:
    """||u||_{L^r} with r = 2/(p+1), by exact radial integration (layer cake per angle)."""
    r = 2 / (p + 1)
    return (2 * area(u.base) * _radial_moment(u, r)) ** (1 / r)


def gradient_integral(u: TestFunction, p: float) -> float:
    """int |grad u| |x|^p dx integrated shell by shell in the gauge variable."""
    return _gauge_perimeter(u.base, p) * _shell_moment(u, p)


def hs_ratio(u: TestFunction, p: float) -> HSRatio:
    """``||u||_r`` against ``pi^(1/r)/(2 pi) int |grad u| |x|^p dx`` with r = 2/(p+1)."""
    _check_p(p)
    r = 2 / (p + 1)
    lhs = lr_norm(u, p)
    rhs = math.pi ** (1 / r) / (2 * math.pi) * gradient_integral(u, p)
    return HSRatio(lhs, rhs, lhs / rhs)


class LayerCake(NamedTuple):
    lhs: float
    minkowski_bound: float
    perimeter_bound: float


def layer_cake_check(u: TestFunction, p: float, levels: int = 64, order: int = 256) -> LayerCake:
    """The chain ||u||_r <= int_0^M |Omega(t)|^(1/r) dt <= C int_0^M P_p(Omega(t)) dt, q = 0."""
    _check_p(p)
    if levels < 64:
        raise PreconditionError("levels must be >= 64")
    r = 2 / (p + 1)
    base_area = area(u.base)
    middle = _level_integral(u, lambda t: (u.level_scale(t) ** 2 * base_area) ** (1 / r),
                             levels, p + 1)
    per = weighted_perimeter(u.base, p, order)
    outer = math.pi ** (1 / r) / (2 * math.pi) * _level_integral(
        u, lambda t: u.level_scale(t) ** (p + 1) * per, levels, p + 1)
    return LayerCake(lr_norm(u, p), middle, outer)


def _level_integral(u: TestFunction, f, levels: int, expo: float) -> float:
    """int_0^M f(t) dt by composite Gauss rules split at profile breakpoint levels.

    Near the top level the integrand behaves like s(t)^expo with s -> 0; when the
    profile starts with a decreasing segment the last panel uses Gauss-Jacobi
    with weight (M - t)^expo.
    """
    vals = np.unique(u.eta)
    per_panel = max(1, -(-levels // (16 * (len(vals) - 1))))
    edges = np.concatenate([np.linspace(a, b, per_panel + 1)[:-1]
                            for a, b in zip(vals[:-1], vals[1:])] + [vals[-1:]])
    top = u.max_value
    singular = u.eta[1] < u.eta[0] and expo != 0
    if singular:
        edges, (a, b) = edges[:-1], edges[-2:]
    t, w = _gl_nodes(edges[:-1], edges[1:])
    total = float(np.sum(f(t.ravel()) * w.ravel()))
    if singular:
        x, wj = roots_jacobi(32, expo, 0.0)
        half = (b - a) / 2
        tj = a + half * (x + 1)
        total += float(np.sum(wj * half ** (expo + 1) * f(tj) / (top - tj) ** expo))
    return total


class Coarea(NamedTuple):
    lhs: float
    rhs: float


def coarea_check(u: TestFunction, p: float, levels: int = 64, order: int = 256) -> Coarea:
    """int_0^M (int_{u=t} |x|^p dsigma) dt against the shell integral of |grad u| |x|^p."""
    if levels < 64:
        raise PreconditionError("levels must be >= 64")
    # level curves are scaled copies of the base boundary
    per = weighted_perimeter(u.base, p, order)
    lhs = _level_integral(u, lambda t: u.level_scale(t) ** (p + 1) * per, levels, p + 1)
    return Coarea(lhs, gradient_integral(u, p))


def extremal_sequence(R: float, eps_list, p: float = 0.0) -> list[tuple[float, float]]:
    """hs_ratio of annular ramps approximating the indicator of B_R(0)."""
    base = Disk(0j, R)
    return [(float(eps), hs_ratio(annular_ramp(base, eps), p).ratio) for eps in eps_list]


def random_test_function(rng: np.random.Generator, K: int = 4, n_breaks: int = 3,
                         spread: float = 0.3) -> TestFunction:
    """Random star base with a random decreasing profile of ``n_breaks`` interior breakpoints."""
    from .geometry import random_star

    base = random_star(rng, K=K, a0=float(rng.uniform(0.5, 2.0)), spread=spread)
    s = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 1.0, n_breaks)), [float(rng.uniform(1.0, 2.0))]])
    s = np.unique(s)
    heights = np.concatenate([np.sort(rng.uniform(0.0, 1.0, len(s) - 2))[::-1], [0.0]])
    eta = np.concatenate([[float(rng.uniform(1.0, 3.0))], heights])
    return TestFunction(base, list(zip(s, eta)))
