"""Latent space descriptors and i.i.d. samplers.

Four families of latent space are supported: a finite set of atoms with
arbitrary probabilities, a torus embedded in R^3, the unit sphere, and
planar regions (annulus or simple polygon) sampled by rejection.  All
samplers are uniform with respect to the natural measure of the space
(surface area for the torus, area for planar regions) and are deterministic
given a seed.
"""

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .rng import substream


@dataclass(frozen=True)
class Discrete:
    """Finite latent space {0, ..., m-1} with sampling weights."""

    m: int
    probs: tuple = None  # uniform when omitted

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one atom")
        if self.probs is not None:
            p = np.asarray(self.probs, dtype=np.float64)
            if p.shape != (self.m,) or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
                raise ValueError("probs must be a length-m simplex vector")
            object.__setattr__(self, "probs", tuple(float(x) for x in p))

    def weights(self) -> np.ndarray:
        if self.probs is None:
            return np.full(self.m, 1.0 / self.m)
        return np.asarray(self.probs)


@dataclass(frozen=True)
class TorusR3:
    """Torus in R^3: circle of radius ``minor`` swept around radius ``major``."""

    major_radius: float
    minor_radius: float

    def __post_init__(self):
        if not (self.major_radius > 0 and self.minor_radius > 0):
            raise ValueError("torus radii must be positive")


@dataclass(frozen=True)
class Sphere:
    """Unit sphere in R^ambient_dim."""

    ambient_dim: int

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise ValueError("ambient dimension must be >= 1")


@dataclass(frozen=True)
class Annulus:
    """Planar ring ``inner <= ||z - center|| <= outer``."""

    inner: float
    outer: float
    center: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not 0 <= self.inner < self.outer:
            raise ValueError("need 0 <= inner < outer")


@dataclass(frozen=True)
class Polygon:
    """Simple polygon given by its vertices, counter-clockwise or clockwise."""

    vertices: tuple

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValueError("polygon needs >= 3 planar vertices")
        # degenerate polygons (zero area) are rejected
        x, y = v[:, 0], v[:, 1]
        area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if abs(area2) < 1e-12:
            raise ValueError("polygon is degenerate")
        object.__setattr__(self, "vertices", tuple(map(tuple, v)))

    def array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=np.float64)


LatentSpace = Union[Discrete, TorusR3, Sphere, Annulus, Polygon]


@dataclass(frozen=True)
class LatentSample:
    """Latent points plus the space they were drawn from.

    ``points`` is an int array of atom indices for Discrete spaces and an
    (n, d) float array of ambient coordinates otherwise.
    """

    points: np.ndarray
    space: LatentSpace
    seed: int = field(default=0)

    def __len__(self) -> int:
        return len(self.points)

    def coords(self) -> np.ndarray:
        """Points as a 2-d float array (atoms become a column of indices)."""
        p = np.asarray(self.points)
        if p.ndim == 1:
            return p.astype(np.float64)[:, None]
        return p

    def to_csv(self, path) -> None:
        """One row per point; columns ``z1..zd`` (``atom`` for Discrete)."""
        p = np.asarray(self.points)
        if isinstance(self.space, Discrete):
            header = "atom"
            np.savetxt(path, p[:, None], fmt="%d", delimiter=",", header=header, comments="")
        else:
            header = ",".join(f"z{i + 1}" for i in range(p.shape[1]))
            np.savetxt(path, p, delimiter=",", header=header, comments="")


def _sample_torus(space: TorusR3, n: int, rng: np.random.Generator) -> np.ndarray:
    major, minor = space.major_radius, space.minor_radius
    ratio = minor / major
    azim = np.empty(n)
    elev = np.empty(n)
    got = 0
    while got < n:
        m = max(n - got, 64)
        u = rng.uniform(0.0, 2.0 * np.pi, size=m)
        v = rng.uniform(0.0, 2.0 * np.pi, size=m)
        # area element on the torus is proportional to 1 + (minor/major) cos v,
        # so the minor angle is rejection-sampled against that density
        accept = rng.uniform(0.0, 1.0 + ratio, size=m) < 1.0 + ratio * np.cos(v)
        k = min(int(accept.sum()), n - got)
        azim[got : got + k] = u[accept][:k]
        elev[got : got + k] = v[accept][:k]
        got += k
    ring = major + minor * np.cos(elev)
    return np.column_stack((ring * np.cos(azim), ring * np.sin(azim), minor * np.sin(elev)))


def _point_in_polygon(pts: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Even-odd crossing test, vectorised over query points."""
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    nv = len(verts)
    j = nv - 1
    for i in range(nv):
        xi, yi = verts[i]
        xj, yj = verts[j]
        crosses = ((yi > y) != (yj > y)) & (x < (xj - xi) * (y - yi) / (yj - yi) + xi)
        inside ^= crosses
        j = i
    return inside


def _sample_planar(space, n: int, rng: np.random.Generator) -> np.ndarray:
    if isinstance(space, Annulus):
        lo = np.array(space.center) - space.outer
        hi = np.array(space.center) + space.outer

        def member(p):
            d = np.linalg.norm(p - np.array(space.center), axis=1)
            return (d >= space.inner) & (d <= space.outer)

    else:
        verts = space.array()
        lo = verts.min(axis=0)
        hi = verts.max(axis=0)

        def member(p):
            return _point_in_polygon(p, verts)

    out = np.empty((n, 2))
    got = 0
    while got < n:
        m = max(2 * (n - got), 64)
        cand = rng.uniform(lo, hi, size=(m, 2))
        keep = cand[member(cand)]
        k = min(len(keep), n - got)
        out[got : got + k] = keep[:k]
        got += k
    return out


def sample(space: LatentSpace, n: int, seed: int) -> LatentSample:
    """Draw ``n`` i.i.d. points from the uniform (or given discrete) law."""
    if n < 1:
        raise ValueError("need n >= 1")
    rng = substream(seed)
    if isinstance(space, Discrete):
        pts = rng.choice(space.m, size=n, p=space.weights())
        return LatentSample(points=pts.astype(np.int64), space=space, seed=seed)
    if isinstance(space, TorusR3):
        pts = _sample_torus(space, n, rng)
    elif isinstance(space, Sphere):
        g = rng.standard_normal((n, space.ambient_dim))
        pts = g / np.linalg.norm(g, axis=1, keepdims=True)
    elif isinstance(space, (Annulus, Polygon)):
        pts = _sample_planar(space, n, rng)
    else:
        raise ValueError(f"unsupported latent space: {space!r}")
    return LatentSample(points=pts, space=space, seed=seed)


def torus_angles(sample_: LatentSample) -> tuple[np.ndarray, np.ndarray]:
    """Azimuth and elevation angles of torus points, both in [0, 2pi).

    Reconstructing ambient coordinates from (radii, azimuth, elevation)
    reproduces the points to within 1e-9.
    """
    if not isinstance(sample_.space, TorusR3):
        raise ValueError("torus_angles requires a TorusR3 sample")
    p = np.asarray(sample_.points, dtype=np.float64)
    major = sample_.space.major_radius
    azimuth = np.mod(np.arctan2(p[:, 1], p[:, 0]), 2.0 * np.pi)
    ring = np.hypot(p[:, 0], p[:, 1])
    elevation = np.mod(np.arctan2(p[:, 2], ring - major), 2.0 * np.pi)
    return azimuth, elevation


def torus_constraint_residual(sample_: LatentSample) -> np.ndarray:
    """|(sqrt(x^2+y^2) - R)^2 + z^2 - r^2| per point."""
    p = np.asarray(sample_.points, dtype=np.float64)
    major = sample_.space.major_radius
    minor = sample_.space.minor_radius
    ring = np.hypot(p[:, 0], p[:, 1])
    return np.abs((ring - major) ** 2 + p[:, 2] ** 2 - minor**2)


def discrete_metric(i: int, j: int) -> float:
    """0 if the atoms are equal, 1 otherwise."""
    return 0.0 if i == j else 1.0
