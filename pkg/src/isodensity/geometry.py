"""Planar domains: disks, Fourier star domains, polygons and disjoint unions.

Points are handled as complex numbers internally; ``x + iy`` for ``(x, y)``.
Every domain is immutable. Boundaries are oriented counterclockwise so the
outward normal at a node with unit tangent ``T`` is ``-1j * T``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import PreconditionError, TruncationError

GL_POINTS = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_POINTS)
_STAR_CHECK_SAMPLES = 4096


def _as_complex(pt) -> complex:
    if isinstance(pt, complex):
        return pt
    if np.ndim(pt) == 0:
        return complex(pt)
    x, y = pt
    return complex(float(x), float(y))


# --------------------------------------------------------------------------
# Domain variants
# --------------------------------------------------------------------------


class Domain:
    """Base class for the four domain variants."""

    kind: str = ""

    @property
    def parts(self) -> tuple["Domain", ...]:
        return (self,)

    def scaled(self, factor: float) -> "Domain":
        raise NotImplementedError

    def rotated(self, angle: float) -> "Domain":
        raise NotImplementedError

    def translated(self, shift) -> "Domain":
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def _pieces(self) -> list["BoundaryPiece"]:
        raise NotImplementedError

    def _contains(self, z: np.ndarray) -> np.ndarray:
        """Strict-interior test for an array of complex points."""
        raise NotImplementedError

    def _bounding_disk(self) -> tuple[complex, float]:
        raise NotImplementedError


@dataclass(frozen=True)
class Disk(Domain):
    center: complex
    radius: float
    kind: str = field(default="disk", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", _as_complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise PreconditionError(f"disk radius must be positive, got {self.radius}")

    def scaled(self, factor):
        return Disk(self.center * factor, self.radius * factor)

    def rotated(self, angle):
        return Disk(self.center * complex(math.cos(angle), math.sin(angle)), self.radius)

    def translated(self, shift):
        return Disk(self.center + _as_complex(shift), self.radius)

    def to_dict(self):
        return {"kind": "disk", "center": [self.center.real, self.center.imag],
                "radius": self.radius}

    def _pieces(self):
        c, r = self.center, self.radius
        return [BoundaryPiece(
            lambda t: c + r * np.exp(1j * t),
            lambda t: 1j * r * np.exp(1j * t),
            0.0, 2 * math.pi, closed=True)]

    def _contains(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def _bounding_disk(self):
        return self.center, self.radius


@dataclass(frozen=True)
class FourierStar(Domain):
    """Star domain ``center + rho(theta) e^{i theta}`` with a trigonometric ``rho``.

    ``rho(theta) = a0 + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta)``.
    """

    center: complex
    a0: float
    cos: tuple = ()
    sin: tuple = ()
    kind: str = field(default="fourier_star", init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "center", _as_complex(self.center))
        object.__setattr__(self, "a0", float(self.a0))
        c = tuple(float(v) for v in self.cos)
        s = tuple(float(v) for v in self.sin)
        K = max(len(c), len(s))
        c += (0.0,) * (K - len(c))
        s += (0.0,) * (K - len(s))
        object.__setattr__(self, "cos", c)
        object.__setattr__(self, "sin", s)
        theta = np.linspace(0, 2 * np.pi, max(_STAR_CHECK_SAMPLES, 64 * K), endpoint=False)
        if not np.all(np.isfinite(self.radius_at(theta))) or self.radius_at(theta).min() <= 0:
            raise PreconditionError("fourier_star radius function must stay positive")

    @property
    def order(self) -> int:
        return len(self.cos)

    def radius_at(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.a0)
        for k, (ck, sk) in enumerate(zip(self.cos, self.sin), start=1):
            out = out + ck * np.cos(k * theta) + sk * np.sin(k * theta)
        return out

    def radius_derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for k, (ck, sk) in enumerate(zip(self.cos, self.sin), start=1):
            out = out + k * (sk * np.cos(k * theta) - ck * np.sin(k * theta))
        return out

    def scaled(self, factor):
        return FourierStar(self.center * factor, self.a0 * factor,
                           [v * factor for v in self.cos], [v * factor for v in self.sin])

    def rotated(self, angle):
        cs, ss = [], []
        for k, (ck, sk) in enumerate(zip(self.cos, self.sin), start=1):
            ca, sa = math.cos(k * angle), math.sin(k * angle)
            cs.append(ck * ca - sk * sa)
            ss.append(ck * sa + sk * ca)
        rot = complex(math.cos(angle), math.sin(angle))
        return FourierStar(self.center * rot, self.a0, cs, ss)

    def translated(self, shift):
        return FourierStar(self.center + _as_complex(shift), self.a0, self.cos, self.sin)

    def to_dict(self):
        return {"kind": "fourier_star", "center": [self.center.real, self.center.imag],
                "a0": self.a0, "cos": list(self.cos), "sin": list(self.sin)}

    def _pieces(self):
        c = self.center

        def point(t):
            return c + self.radius_at(t) * np.exp(1j * t)

        def deriv(t):
            return (self.radius_derivative(t) + 1j * self.radius_at(t)) * np.exp(1j * t)

        return [BoundaryPiece(point, deriv, 0.0, 2 * math.pi, closed=True)]

    def _contains(self, z):
        rel = np.asarray(z) - self.center
        return np.abs(rel) < self.radius_at(np.angle(rel))

    def _bounding_disk(self):
        theta = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
        return self.center, float(self.radius_at(theta).max()) * (1 + 1e-3)


@dataclass(frozen=True)
class Polygon(Domain):
    """Simple polygon; vertices are reordered counterclockwise if necessary."""

    vertices: tuple
    kind: str = field(default="polygon", init=False, repr=False)

    def __post_init__(self):
        verts = [_as_complex(v) for v in self.vertices]
        if len(verts) < 3:
            raise PreconditionError("polygon needs at least 3 vertices")
        if _signed_area(verts) < 0:
            verts = verts[::-1]
        if _signed_area(verts) == 0:
            raise PreconditionError("degenerate polygon with zero area")
        if _self_intersects(verts):
            raise PreconditionError("polygon is not simple")
        object.__setattr__(self, "vertices", tuple(verts))

    def scaled(self, factor):
        return Polygon([v * factor for v in self.vertices])

    def rotated(self, angle):
        rot = complex(math.cos(angle), math.sin(angle))
        return Polygon([v * rot for v in self.vertices])

    def translated(self, shift):
        s = _as_complex(shift)
        return Polygon([v + s for v in self.vertices])

    def to_dict(self):
        return {"kind": "polygon", "vertices": [[v.real, v.imag] for v in self.vertices]}

    def _pieces(self):
        verts = self.vertices
        pieces = []
        for a, b in zip(verts, verts[1:] + verts[:1]):
            pieces.append(BoundaryPiece(
                lambda t, a=a, b=b: a + t * (b - a),
                lambda t, a=a, b=b: np.full(np.shape(t), b - a, dtype=complex),
                0.0, 1.0, closed=False))
        return pieces

    def _contains(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        verts = np.array(self.vertices)
        a, b = verts, np.roll(verts, -1)
        # winding number by signed angle sum
        da = a[None, :] - z[:, None]
        db = b[None, :] - z[:, None]
        with np.errstate(invalid="ignore", divide="ignore"):
            wind = np.angle(db / da).sum(axis=1) / (2 * np.pi)
        return np.abs(wind) > 0.5

    def _bounding_disk(self):
        verts = np.array(self.vertices)
        c = verts.mean()
        return complex(c), float(np.abs(verts - c).max())


@dataclass(frozen=True)
class Union(Domain):
    """Disjoint union of domains with pairwise disjoint closures."""

    components: tuple
    eps: float = 1e-9
    kind: str = field(default="union", init=False, repr=False)

    def __post_init__(self):
        flat = []
        for comp in self.components:
            flat.extend(comp.parts)
        if not flat:
            raise PreconditionError("union needs at least one component")
        object.__setattr__(self, "components", tuple(flat))
        _check_disjoint(flat, self.eps)

    @property
    def parts(self):
        return self.components

    def scaled(self, factor):
        return Union([c.scaled(factor) for c in self.components], self.eps)

    def rotated(self, angle):
        return Union([c.rotated(angle) for c in self.components], self.eps)

    def translated(self, shift):
        return Union([c.translated(shift) for c in self.components], self.eps)

    def to_dict(self):
        return {"kind": "union", "parts": [c.to_dict() for c in self.components]}

    def _pieces(self):
        return [p for c in self.components for p in c._pieces()]

    def _contains(self, z):
        out = np.zeros(np.shape(np.atleast_1d(z)), dtype=bool)
        for c in self.components:
            out |= c._contains(np.atleast_1d(z))
        return out


def _signed_area(verts: Sequence[complex]) -> float:
    total = 0.0
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        total += a.real * b.imag - b.real * a.imag
    return 0.5 * total


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        v = (b - a).real * (c - a).imag - (b - a).imag * (c - a).real
        return 0 if abs(v) < 1e-15 else (1 if v > 0 else -1)

    def on_seg(a, b, c):
        return (min(a.real, b.real) - 1e-15 <= c.real <= max(a.real, b.real) + 1e-15
                and min(a.imag, b.imag) - 1e-15 <= c.imag <= max(a.imag, b.imag) + 1e-15)

    o1, o2 = orient(p1, p2, q1), orient(p1, p2, q2)
    o3, o4 = orient(q1, q2, p1), orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and on_seg(p1, p2, q1)) or (o2 == 0 and on_seg(p1, p2, q2))
            or (o3 == 0 and on_seg(q1, q2, p1)) or (o4 == 0 and on_seg(q1, q2, p2)))


def _self_intersects(verts: Sequence[complex]) -> bool:
    n = len(verts)
    edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(*edges[i], *edges[j]):
                return True
    return False


def _check_disjoint(parts: Sequence[Domain], eps: float) -> None:
    samples = [boundary_nodes(p, 256).points for p in parts]
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            ci, ri = parts[i]._bounding_disk()
            cj, rj = parts[j]._bounding_disk()
            if abs(ci - cj) > ri + rj + eps:
                continue
            gap = np.abs(samples[i][:, None] - samples[j][None, :]).min()
            if gap <= eps or parts[j]._contains(samples[i][:1]).any() \
                    or parts[i]._contains(samples[j][:1]).any():
                raise PreconditionError("union components must have disjoint closures")


# --------------------------------------------------------------------------
# Boundary quadrature
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPiece:
    point: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    t0: float
    t1: float
    closed: bool


@dataclass(frozen=True)
class BoundaryQuadrature:
    points: np.ndarray      # complex nodes
    weights: np.ndarray     # arc-length weights
    normals: np.ndarray     # complex outward unit normals
    piece: np.ndarray       # index of the boundary piece each node samples

    @property
    def xy(self) -> np.ndarray:
        return np.column_stack([self.points.real, self.points.imag])

    @property
    def length(self) -> float:
        return float(self.weights.sum())


def _panels(piece: BoundaryPiece, order: int) -> np.ndarray:
    n_panels = max(1, order // GL_POINTS)
    return np.linspace(piece.t0, piece.t1, n_panels + 1)


def _gl_nodes(a: np.ndarray, b: np.ndarray):
    """Gauss-Legendre nodes/weights on each interval [a_i, b_i]; shape (n, GL_POINTS)."""
    a = np.asarray(a, dtype=float)[..., None]
    b = np.asarray(b, dtype=float)[..., None]
    t = 0.5 * (a + b) + 0.5 * (b - a) * _GL_X
    w = 0.5 * (b - a) * _GL_W
    return t, w


def boundary_nodes(d: Domain, order: int = 256) -> BoundaryQuadrature:
    """Composite Gauss-Legendre nodes on every smooth boundary piece.

    ``order`` is the node budget per piece (a closed curve or a polygon edge),
    split into panels of 16 points.
    """
    if order < GL_POINTS:
        raise PreconditionError(f"quadrature order must be >= {GL_POINTS}")
    pts, wts, nrm, idx = [], [], [], []
    for k, piece in enumerate(d._pieces()):
        edges = _panels(piece, order)
        t, w = _gl_nodes(edges[:-1], edges[1:])
        t, w = t.ravel(), w.ravel()
        dz = piece.deriv(t)
        speed = np.abs(dz)
        pts.append(piece.point(t))
        wts.append(w * speed)
        nrm.append(-1j * dz / speed)
        idx.append(np.full(t.shape, k))
    return BoundaryQuadrature(np.concatenate(pts), np.concatenate(wts),
                              np.concatenate(nrm), np.concatenate(idx))


# --------------------------------------------------------------------------
# Scalar geometry
# --------------------------------------------------------------------------


def area(d: Domain) -> float:
    if isinstance(d, Disk):
        return math.pi * d.radius ** 2
    if isinstance(d, FourierStar):
        harmonics = sum(c * c + s * s for c, s in zip(d.cos, d.sin))
        return math.pi * (d.a0 ** 2 + 0.5 * harmonics)
    if isinstance(d, Polygon):
        return _signed_area(d.vertices)
    if isinstance(d, Union):
        return math.fsum(area(c) for c in d.components)
    raise TypeError(f"unknown domain {d!r}")


def equivalent_radius(d: Domain) -> float:
    """Radius of the origin-centred disk with the same area as ``d``."""
    return math.sqrt(area(d) / math.pi)


def perimeter(d: Domain, order: int = 256) -> float:
    if isinstance(d, Disk):
        return 2 * math.pi * d.radius
    return boundary_nodes(d, order).length


def boundary_distance(d: Domain, z0: complex = 0j, order: int = 256) -> float:
    """Distance from ``z0`` to the boundary of ``d``."""
    z0 = _as_complex(z0)
    if isinstance(d, Disk):
        return abs(abs(z0 - d.center) - d.radius)
    if isinstance(d, Union):
        return min(boundary_distance(c, z0, order) for c in d.components)
    if isinstance(d, Polygon):
        verts = np.array(d.vertices)
        a, b = verts, np.roll(verts, -1)
        e = b - a
        t = np.clip(((z0 - a) * e.conjugate()).real / np.abs(e) ** 2, 0.0, 1.0)
        return float(np.abs(a + t * e - z0).min())
    from scipy.optimize import minimize_scalar
    piece = d._pieces()[0]
    t = np.linspace(0, 2 * np.pi, max(order, 1024), endpoint=False)
    dist = np.abs(piece.point(t) - z0)
    k = int(np.argmin(dist))
    h = t[1] - t[0]
    res = minimize_scalar(lambda s: abs(complex(piece.point(np.array([s]))[0]) - z0),
                          bounds=(t[k] - h, t[k] + h), method="bounded",
                          options={"xatol": 1e-14})
    return float(min(res.fun, dist[k]))


def contains_origin(d: Domain, eps: float | None = None) -> str:
    """Classify the origin as ``"inside"``, ``"on_boundary"`` or ``"outside"``."""
    if eps is None:
        eps = 1e-9 * equivalent_radius(d)
    if boundary_distance(d, 0j) <= eps:
        return "on_boundary"
    return "inside" if bool(d._contains(np.array([0j]))[0]) else "outside"


def is_connected(d: Domain) -> bool:
    return len(d.parts) == 1


# --------------------------------------------------------------------------
# Radial description about the origin and complement inversion
# --------------------------------------------------------------------------


def radial_function(d: Domain) -> Callable[[np.ndarray], np.ndarray]:
    """Return ``rho(theta)`` with boundary ``rho(theta) e^{i theta}`` about the origin.

    Defined for disks containing the origin and origin-centred Fourier stars.
    """
    if isinstance(d, Disk):
        if abs(d.center) >= d.radius:
            raise PreconditionError("disk must contain the origin")
        c, r = d.center, d.radius

        def rho(theta):
            proj = (c.conjugate() * np.exp(1j * np.asarray(theta)))
            return proj.real + np.sqrt(r * r - proj.imag ** 2)

        return rho
    if isinstance(d, FourierStar):
        if abs(d.center) > 0:
            raise PreconditionError("fourier_star must be centred at the origin")
        return d.radius_at
    raise PreconditionError(f"no radial description for {d.kind}")


def fourier_fit(values: np.ndarray, K: int) -> tuple[float, np.ndarray, np.ndarray]:
    """Trigonometric coefficients (a0, cos, sin) of order K from uniform samples."""
    n = len(values)
    spec = np.fft.rfft(values) / n
    a0 = spec[0].real
    c = 2 * spec[1:K + 1].real
    s = -2 * spec[1:K + 1].imag
    return float(a0), c, s


def invert_complement(d: Domain, tol: float = 1e-12, max_order: int = 2048) -> Domain:
    """Image of the exterior of ``d`` under ``z -> 1/z``, together with 0.

    A disk maps to a disk in closed form. A star maps to the star with radius
    ``1/rho(-theta)``, refit by FFT; the truncation order starts at the input
    order and doubles until the sup-norm residual drops below ``tol``.
    """
    where = contains_origin(d)
    if where != "inside":
        raise PreconditionError(f"origin must lie inside the domain (found {where})")
    if isinstance(d, Disk):
        c, r = d.center, d.radius
        denom = abs(c) ** 2 - r * r
        return Disk(c.conjugate() / denom, r / abs(denom))
    if not isinstance(d, FourierStar):
        raise PreconditionError("invert_complement needs a disk or fourier_star")
    if abs(d.center) > 0:
        raise PreconditionError("fourier_star must be centred at the origin")

    def target(theta):
        return 1.0 / d.radius_at(-theta)

    K = max(d.order, 1)
    residual = math.inf
    while K <= max_order:
        n = 4 * K
        theta = 2 * np.pi * np.arange(n) / n
        a0, c, s = fourier_fit(target(theta), K)
        check = np.linspace(0, 2 * np.pi, 8 * K + 7, endpoint=False)
        try:
            inv = FourierStar(0j, a0, c, s)
        except PreconditionError:
            K *= 2
            continue
        residual = float(np.abs(inv.radius_at(check) - target(check)).max())
        if residual <= tol:
            return inv
        K *= 2
    raise TruncationError(f"inversion refit residual {residual:.3e} exceeds {tol:.1e}",
                          residual=residual)


# --------------------------------------------------------------------------
# JSON I/O
# --------------------------------------------------------------------------


def domain_from_dict(obj: dict) -> Domain:
    kind = obj.get("kind")
    if kind == "disk":
        return Disk(obj["center"], obj["radius"])
    if kind == "fourier_star":
        return FourierStar(obj["center"], obj["a0"], obj.get("cos", []), obj.get("sin", []))
    if kind == "polygon":
        return Polygon(obj["vertices"])
    if kind == "union":
        return Union([domain_from_dict(p) for p in obj["parts"]])
    raise PreconditionError(f"unknown domain kind {kind!r}")


def load_domain(path) -> Domain:
    with open(path, encoding="utf-8") as fh:
        return domain_from_dict(json.load(fh))


def dump_domain(d: Domain) -> str:
    return json.dumps(d.to_dict())


# --------------------------------------------------------------------------
# Random domains
# --------------------------------------------------------------------------


def random_star(rng: np.random.Generator, K: int = 6, a0: float = 1.0,
                spread: float = 0.4, min_ratio: float = 0.2, center=0j) -> FourierStar:
    """Random trigonometric star; harmonic k drawn uniformly from +-spread*a0/k.

    Rejection-sampled until ``min rho > min_ratio * a0``.
    """
    theta = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
    k = np.arange(1, K + 1)
    while True:
        c = rng.uniform(-1, 1, K) * spread * a0 / k
        s = rng.uniform(-1, 1, K) * spread * a0 / k
        rho = a0 + np.cos(np.outer(theta, k)) @ c + np.sin(np.outer(theta, k)) @ s
        if rho.min() > min_ratio * a0:
            return FourierStar(center, a0, c, s)


def random_polygon(rng: np.random.Generator, n_vertices: int = 7, center=0j,
                   scale: float = 1.0) -> Polygon:
    """Random polygon, star-shaped about ``center`` (hence simple)."""
    angles = np.sort(rng.uniform(0, 2 * np.pi, n_vertices))
    # keep every angular gap below pi so the centre is interior
    while np.diff(np.concatenate([angles, angles[:1] + 2 * np.pi])).max() >= np.pi:
        angles = np.sort(rng.uniform(0, 2 * np.pi, n_vertices))
    radii = scale * rng.uniform(0.4, 1.0, n_vertices)
    c = _as_complex(center)
    return Polygon([c + r * np.exp(1j * a) for r, a in zip(radii, angles)])
