"""Riemann maps of star domains and a numerical replay of the conformal proof.

For a domain Omega containing the origin, D is the inverted complement
(``geometry.invert_complement``) and ``h: B_1 -> D`` its Riemann map with
``h(0) = 0``, ``h'(0) > 0``. Writing ``h = z G`` and ``Q = 1/G`` gives
``g = 1/h = lambda/z + sum_n a_n z^n`` with ``lambda = Q(0)``, ``a_n = Q_{n+1}``.
``g`` maps the punctured disk onto the exterior of Omega.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from .exceptions import (
    ConvergenceError,
    DegeneracyError,
    PreconditionError,
    TruncationError,
)
from .geometry import Domain, invert_complement, radial_function

R_LADDER = tuple(1 - 2.0 ** -k for k in range(4, 13))


@dataclass(frozen=True)
class ConformalData:
    N: int
    G_coeffs: np.ndarray
    Q_coeffs: np.ndarray
    theodorsen_residual: float
    iterations: int
    t_grid: np.ndarray = field(repr=False)
    theta_grid: np.ndarray = field(repr=False)

    @property
    def h_coeffs(self) -> np.ndarray:
        """Taylor coefficients of h, index n for z**n (h_0 = 0)."""
        return np.concatenate([[0j], self.G_coeffs])

    @property
    def lam(self) -> complex:
        return complex(self.Q_coeffs[0])

    @property
    def a(self) -> np.ndarray:
        """Laurent tail a_n = Q_{n+1}, n = 0 .. N-1."""
        return self.Q_coeffs[1:]

    @property
    def tail_energy(self) -> float:
        n = np.arange(len(self.a))
        return float(np.sum(n * np.abs(self.a) ** 2))

    def h(self, w):
        return P.polyval(w, self.h_coeffs)

    def dh(self, w):
        return P.polyval(w, P.polyder(self.h_coeffs))

    def g(self, w):
        return self.lam / w + P.polyval(w, self.a)

    def dg(self, w):
        return -self.lam / w ** 2 + P.polyval(w, P.polyder(self.a))

    def inverse(self, y, tol: float = 1e-14, max_iter: int = 60):
        """Preimage under h of points ``y`` in the closed image domain (Newton)."""
        y = np.atleast_1d(np.asarray(y, dtype=complex))
        phi = np.angle(y)
        # boundary correspondence theta(t) is increasing; invert it for a start value
        theta = np.concatenate([self.theta_grid, self.theta_grid[:1] + 2 * np.pi])
        tt = np.concatenate([self.t_grid, self.t_grid[:1] + 2 * np.pi])
        t0 = np.interp(np.mod(phi - theta[0], 2 * np.pi) + theta[0], theta, tt)
        radius = np.abs(self.h(np.exp(1j * t0)))
        w = np.where(np.abs(y) > 0, np.abs(y) / radius, 0) * np.exp(1j * t0)
        for _ in range(max_iter):
            step = (self.h(w) - y) / self.dh(w)
            w = w - step
            if np.max(np.abs(step)) < tol:
                break
        return w


def series_reciprocal(c: np.ndarray) -> np.ndarray:
    """Power series of 1/c(z) truncated to the length of ``c`` (recursive convolution)."""
    c = np.asarray(c, dtype=complex)
    if c[0] == 0:
        raise DegeneracyError("series reciprocal needs a nonzero constant term")
    out = np.zeros_like(c)
    out[0] = 1 / c[0]
    for n in range(1, len(c)):
        out[n] = -np.dot(c[1:n + 1], out[n - 1::-1]) / c[0]
        if not np.isfinite(out[n]):
            raise DegeneracyError(f"series reciprocal overflowed at order {n}")
    return out


def circle_conjugate(f: np.ndarray) -> np.ndarray:
    """Conjugate function (circle Hilbert transform) of real samples on a uniform grid."""
    m = len(f)
    spec = np.fft.fft(f)
    k = np.fft.fftfreq(m, 1.0 / m)
    spec *= -1j * np.sign(k)
    if m % 2 == 0:
        spec[m // 2] = 0
    return np.fft.ifft(spec).real


def riemann_map(D: Domain, N: int = 256, tol: float = 1e-12, max_iter: int = 200,
                relax: float = 1.0) -> ConformalData:
    """Riemann map of a domain that is star-shaped about the origin.

    Theodorsen iteration ``theta <- t + K[log rho(theta)]`` on 4N points gives
    the boundary correspondence; the coefficients of ``G = h/z`` follow from
    the FFT of its boundary values ``rho(theta) e^{i(theta - t)}``.
    """
    if N < 64 or N & (N - 1):
        raise PreconditionError(f"series order must be a power of two >= 64, got {N}")
    rho = radial_function(D)
    m = 4 * N
    t = 2 * np.pi * np.arange(m) / m
    theta = t.copy()
    change = math.inf
    for it in range(1, max_iter + 1):
        target = t + circle_conjugate(np.log(rho(theta)))
        change = float(np.max(np.abs(target - theta)))
        theta = theta + relax * (target - theta)
        if change < tol:
            break
    else:
        raise ConvergenceError(
            f"Theodorsen iteration did not converge in {max_iter} steps "
            f"(last change {change:.3e})", residual=change)

    boundary = rho(theta) * np.exp(1j * (theta - t))
    spec = np.fft.fft(boundary) / m
    G = spec[:N + 1].copy()
    # gauge: h'(0) = G_0 real and positive
    alpha = -np.angle(G[0])
    G = G * np.exp(1j * alpha * np.arange(1, N + 2))
    t_grid = np.mod(t - alpha, 2 * np.pi)
    order = np.argsort(t_grid)
    t_grid, theta = t_grid[order], np.unwrap(theta[order])

    w = np.exp(1j * (t + np.pi / m))
    g_vals = P.polyval(w, G)
    if np.abs(g_vals).min() < 1e-8:
        raise DegeneracyError("h(z)/z nearly vanishes on the unit circle")
    h_vals = w * g_vals
    residual = float(np.max(np.abs(np.abs(h_vals) - rho(np.angle(h_vals)))))
    Q = series_reciprocal(G)
    return ConformalData(N, G, Q, residual, it, t_grid, theta)


def richardson(h: np.ndarray, values: np.ndarray) -> float:
    """Extrapolate ``values(h)`` to h = 0 for a ladder with ratio 1/2."""
    table = [np.asarray(values, dtype=float)]
    best, best_err = float(values[-1]), math.inf
    for j in range(1, len(values)):
        prev = table[-1]
        nxt = prev[1:] + (prev[1:] - prev[:-1]) / (2 ** j - 1)
        table.append(nxt)
        err = abs(nxt[-1] - prev[-1])
        if err < best_err:
            best, best_err = float(nxt[-1]), err
    return best


def area_series(cd: ConformalData, r: float) -> float:
    """Signed area enclosed by g(|z| = r): pi(|lambda|^2/r^2 - sum n |a_n|^2 r^(2n))."""
    if not 0 < r < 1:
        raise PreconditionError("r must lie in (0, 1)")
    n = np.arange(len(cd.a))
    return float(math.pi * (abs(cd.lam) ** 2 / r ** 2 - np.sum(n * np.abs(cd.a) ** 2 * r ** (2 * n))))


def _circle(cd: ConformalData, r: float, m: int | None):
    m = m or max(4 * cd.N, 1024)
    return r * np.exp(2j * np.pi * np.arange(m) / m)


def weighted_perimeter_series(cd: ConformalData, p: float, r: float, m: int | None = None) -> float:
    """S_r = r * int_0^2pi |g'(r e^{it})| |g(r e^{it})|^p dt by the trapezoid rule."""
    if not 0 < r < 1:
        raise PreconditionError("r must lie in (0, 1)")
    z = _circle(cd, r, m)
    return float(r * 2 * np.pi * np.mean(np.abs(cd.dg(z)) * np.abs(cd.g(z)) ** p))


class CauchyBound(NamedTuple):
    lambda_power: float
    bound: float


def cauchy_lambda_bound(cd: ConformalData, p: float, r: float, m: int | None = None,
                        rtol: float = 1e-8) -> CauchyBound:
    """Mean-value bound |lambda|^(p+1) <= r^(p+1) S_r / 2pi through tau = u exp(p phi).

    ``phi`` is the holomorphic logarithm of Q built from the series of Q'/Q,
    ``u = z Q' - Q``; the mean of tau over |z| = r must reproduce tau(0).
    """
    z = _circle(cd, r, m)
    Q = cd.Q_coeffs
    q_vals = P.polyval(z, Q)
    winding = np.sum(np.angle(np.roll(q_vals, -1) / q_vals)) / (2 * np.pi)
    if np.abs(q_vals).min() == 0 or round(winding) != 0:
        raise DegeneracyError(f"Q winds {winding:.3f} times on |z|={r}; no logarithm")
    dQ = P.polyder(Q)
    dlog = P.polymul(dQ, cd.G_coeffs)[:len(Q) - 1]
    phi = np.concatenate([[np.log(cd.lam)], dlog / np.arange(1, len(Q))])
    u = (np.arange(len(Q)) - 1) * Q
    tau = P.polyval(z, u) * np.exp(p * P.polyval(z, phi))
    lam_pow = abs(cd.lam) ** (p + 1)
    if abs(abs(np.mean(tau)) - lam_pow) > rtol * lam_pow:
        raise TruncationError(
            f"mean of tau {abs(np.mean(tau)):.12g} differs from |lambda|^(p+1) {lam_pow:.12g}",
            residual=abs(abs(np.mean(tau)) - lam_pow))
    bound = r ** (p + 1) / (2 * np.pi) * weighted_perimeter_series(cd, p, r, m)
    return CauchyBound(lam_pow, bound)


@dataclass
class ProofReplayReport:
    p: float
    lam: complex
    a0: complex
    r_values: list
    A_r: list
    S_r: list
    area_limit: float
    perimeter_limit: float
    chain: tuple
    tail_energy: float
    residual: float

    @property
    def chain_monotone(self) -> bool:
        return self.chain[0] <= self.chain[1] + 1e-6 and self.chain[1] <= self.chain[2] + 1e-6

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "lambda": [self.lam.real, self.lam.imag],
            "tail_energy": self.tail_energy,
            "chain": list(self.chain),
            "r_grid": list(self.r_values),
            "A_r": list(self.A_r),
            "S_r": list(self.S_r),
            "residual": self.residual,
        }


def replay_proof(omega: Domain, p: float, N: int = 256) -> ProofReplayReport:
    """Invert, map, and evaluate the area and perimeter series along r -> 1."""
    cd = riemann_map(invert_complement(omega), N)
    r = np.array(R_LADDER)
    A = [area_series(cd, ri) for ri in r]
    S = [weighted_perimeter_series(cd, p, ri) for ri in r]
    A_lim = richardson(1 - r, A)
    S_lim = richardson(1 - r, S)
    lhs = 1.0 if p == -1 else (A_lim / math.pi) ** ((p + 1) / 2)
    chain = (lhs, abs(cd.lam) ** (p + 1), S_lim / (2 * math.pi))
    return ProofReplayReport(p, cd.lam, complex(cd.a[0]), list(r), A, S, A_lim, S_lim,
                             chain, cd.tail_energy, cd.theodorsen_residual)
