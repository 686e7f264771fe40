"""Green's functions of disks and star domains and the weighted Flucher bound.

Both representations carry a conformal map ``f: B_1 -> Omega`` with
``f(0) = x`` so that ``G(f(w)) = -log|w| / 2pi``. Level sets ``{G = t}`` are
images of the circles ``|w| = exp(-2 pi t)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .conformal import ConformalData, riemann_map
from .exceptions import PreconditionError
from .geometry import Disk, Domain, _as_complex, _gl_nodes, area, contains_origin, is_connected


class GreenFunction:
    representation = ""

    def __init__(self, domain: Domain, x: complex):
        self.domain = domain
        self.x = x

    def map(self, w):
        raise NotImplementedError

    def preimage(self, y):
        raise NotImplementedError

    def grad_norm(self, y, w):
        """|grad G| at the physical point y = map(w)."""
        raise NotImplementedError

    def __call__(self, y):
        return -np.log(np.abs(self.preimage(y))) / (2 * np.pi)

    def boundary(self, m: int = 1024):
        """Boundary points, |grad G| and arc-length weights from the preimage circle."""
        w = np.exp(2j * np.pi * np.arange(m) / m)
        y = self.map(w)
        speed = np.abs(_spectral_derivative(y))
        return y, self.grad_norm(y, w), speed * 2 * np.pi / m


class DiskGreen(GreenFunction):
    representation = "disk"

    def __init__(self, R: float, x):
        x = _as_complex(x)
        if not abs(x) < R:
            raise PreconditionError("singularity must lie inside the disk")
        super().__init__(Disk(0j, R), x)
        self.R = float(R)

    def map(self, w):
        a = self.x / self.R
        return self.R * (w + a) / (1 + np.conjugate(a) * w)

    def preimage(self, y):
        a = self.x / self.R
        v = np.asarray(y) / self.R
        return (v - a) / (1 - np.conjugate(a) * v)

    def __call__(self, y):
        y = np.asarray(y, dtype=complex)
        num = np.abs(self.R ** 2 - np.conjugate(y) * self.x)
        return np.log(num / (self.R * np.abs(y - self.x))) / (2 * np.pi)

    def grad_norm(self, y, w=None):
        y = np.asarray(y, dtype=complex)
        # grad of log|y - x| minus the image-charge term at R^2 / conj(x)
        grad = -(y - self.x) / np.abs(y - self.x) ** 2
        if self.x != 0:
            img = self.R ** 2 / np.conjugate(self.x)
            grad = grad + (y - img) / np.abs(y - img) ** 2
        return np.abs(grad) / (2 * np.pi)

    def boundary_gradient(self, y):
        """Closed form (R^2 - |x|^2) / (2 pi R |y - x|^2) for |y| = R."""
        y = np.asarray(y, dtype=complex)
        return (self.R ** 2 - abs(self.x) ** 2) / (2 * np.pi * self.R * np.abs(y - self.x) ** 2)


class ConformalGreen(GreenFunction):
    representation = "conformal"

    def __init__(self, domain: Domain, cd: ConformalData):
        super().__init__(domain, 0j)
        self.cd = cd

    def map(self, w):
        return self.cd.h(w)

    def preimage(self, y):
        return self.cd.inverse(y)

    def grad_norm(self, y, w):
        return 1.0 / (2 * np.pi * np.abs(w) * np.abs(self.cd.dh(w)))


def _spectral_derivative(y: np.ndarray) -> np.ndarray:
    """d/dphi of periodic samples y(phi_j) by FFT."""
    m = len(y)
    k = np.fft.fftfreq(m, 1.0 / m)
    spec = np.fft.fft(y) * 1j * k
    if m % 2 == 0:
        spec[m // 2] = 0
    return np.fft.ifft(spec)


def disk_green(R: float, x=0j) -> DiskGreen:
    return DiskGreen(R, x)


def star_green(omega: Domain, N: int = 256) -> ConformalGreen:
    """Green's function with singularity at the origin via the Riemann map of ``omega``."""
    return ConformalGreen(omega, riemann_map(omega, N))


class LevelIdentity(NamedTuple):
    t: float
    energy: float
    flux: float


def level_identities(g: GreenFunction, t_list, n_radial: int = 64, n_angle: int = 256,
                     m_flux: int = 1024) -> list[LevelIdentity]:
    """Dirichlet energy of G below level t and flux of |grad G| through {G = t}.

    Both are computed in the preimage disk: the flux on the circle
    |w| = exp(-2 pi t), the energy with a tensor Gauss grid in (log|w|, arg w)
    over the annulus between that circle and the unit circle.
    """
    out = []
    phi = 2 * np.pi * np.arange(m_flux) / m_flux
    phi_e = 2 * np.pi * np.arange(n_angle) / n_angle
    for t in t_list:
        if t < 0:
            raise PreconditionError("level t must be nonnegative")
        rho = math.exp(-2 * math.pi * t)
        w = rho * np.exp(1j * phi)
        y = g.map(w)
        dsig = np.abs(_spectral_derivative(y)) * 2 * np.pi / m_flux
        flux = float(np.sum(g.grad_norm(y, w) * dsig))

        if t == 0:
            energy = 0.0
        else:
            lr, lw = _gl_nodes(np.array([math.log(rho)]), np.array([0.0]))
            s = np.exp(lr.ravel())
            ww = s[:, None] * np.exp(1j * phi_e)[None, :]
            yy = g.map(ww)
            # conformal Jacobian |f'|^2 = |dy/dphi|^2 / s^2 ; area element s^2 dlog(s) dphi
            dy = np.array([_spectral_derivative(row) for row in yy])
            jac = np.abs(dy) ** 2 / s[:, None] ** 2
            integrand = g.grad_norm(yy, ww) ** 2 * jac * s[:, None] ** 2
            energy = float(np.sum(integrand * lw.ravel()[:, None]) * 2 * np.pi / n_angle)
        out.append(LevelIdentity(float(t), energy, flux))
    return out


@dataclass
class FlucherReport:
    beta: float
    lhs: float
    rhs: float
    x: complex
    representation: str

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 1e-7

    def to_dict(self) -> dict:
        return {"beta": self.beta, "lhs": self.lhs, "rhs": self.rhs,
                "x": [self.x.real, self.x.imag], "representation": self.representation}


def _check_beta(g: GreenFunction, beta: float) -> None:
    if beta > 2:
        raise PreconditionError(f"beta must be <= 2, got {beta}")
    if beta > 0:
        where = contains_origin(g.domain)
        if where != "inside" or not is_connected(g.domain):
            raise PreconditionError(
                f"beta={beta} > 0 needs a connected domain containing the origin (origin {where})")


def boundary_weight_integral(g: GreenFunction, beta: float, m: int = 2048) -> float:
    """int over the boundary of 1 / (|y|^beta |grad G(y)|) dsigma."""
    if isinstance(g, ConformalGreen):
        # |grad G| = 1/(2 pi |h'|), dsigma = |h'| dt
        w = np.exp(2j * np.pi * np.arange(m) / m)
        dh = np.abs(g.cd.dh(w))
        return float(np.mean(2 * np.pi * dh ** 2 / np.abs(g.cd.h(w)) ** beta) * 2 * np.pi)
    from .geometry import boundary_nodes
    bq = boundary_nodes(g.domain, m)
    return float(np.sum(bq.weights / (np.abs(bq.points) ** beta * g.boundary_gradient(bq.points))))


def flucher_bound(g: GreenFunction, beta: float, m: int = 2048) -> FlucherReport:
    """|Omega|^(1 - beta/2) against (1 / 4 pi^(1 + beta/2)) int 1/(|y|^beta |grad G|) dsigma."""
    _check_beta(g, beta)
    lhs = area(g.domain) ** (1 - beta / 2)
    rhs = boundary_weight_integral(g, beta, m) / (4 * math.pi ** (1 + beta / 2))
    return FlucherReport(float(beta), float(lhs), float(rhs), g.x, g.representation)


class HolderStep(NamedTuple):
    lhs: float
    rhs: float


def holder_step(g: GreenFunction, beta: float, m: int = 2048) -> HolderStep:
    """(2 pi R^(1+p))^2 <= flux * int 1/(|y|^beta |grad G|) with p = -beta/2."""
    _check_beta(g, beta)
    p = -beta / 2
    R = math.sqrt(area(g.domain) / math.pi)
    flux = level_identities(g, [0.0])[0].flux
    return HolderStep((2 * math.pi * R ** (1 + p)) ** 2, flux * boundary_weight_integral(g, beta, m))
