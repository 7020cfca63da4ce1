"""Kernel families, Gram matrices, empirical feature maps and local metrics.

A kernel here is the mean correlation function of the random fields that
generate the data.  Besides evaluation and Gram assembly this module builds
empirical (Nystrom-style) feature maps realising the kernel as an inner
product, computes the local metric tensor of second mixed partials used for
curve-length comparisons, and provides the testable forms of the rank and
injectivity assumptions.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import tolerances as tol
from .linalg import sym_eig_top
from .spaces import Discrete, LatentSample


@dataclass(frozen=True)
class DiscreteMatrix:
    """Kernel on m atoms given by a symmetric PSD matrix."""

    matrix: tuple

    def __post_init__(self):
        f = np.asarray(self.matrix, dtype=np.float64)
        if f.ndim != 2 or f.shape[0] != f.shape[1]:
            raise ValueError("kernel matrix must be square")
        if np.max(np.abs(f - f.T)) > tol.SYMMETRY_ATOL:
            raise ValueError("kernel matrix must be symmetric")
        if np.linalg.eigvalsh(f).min() < -1e-10:
            raise ValueError("kernel matrix must be PSD within 1e-10")
        object.__setattr__(self, "matrix", tuple(map(tuple, f)))

    def array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=np.float64)

    @property
    def m(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class RBF:
    """f(z, z') = exp(-||z - z'||^2 / scale)."""

    scale: float = 1.0

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")


@dataclass(frozen=True)
class Polynomial:
    """f(z, z') = (<z, z'> + a)^b with a >= 0 and integer b >= 1."""

    a: float
    b: int

    def __post_init__(self):
        if self.a < 0 or int(self.b) != self.b or self.b < 1:
            raise ValueError("need a >= 0 and integer b >= 1")


@dataclass(frozen=True)
class CosineSum:
    """f(z, z') = sum_k cos(z_k - z'_k) + offset.

    PSD requires the offset to be at least the number of summed coordinates.
    """

    offset: float


@dataclass(frozen=True)
class TranslationInvariant:
    """f(z, z') = g(z - z') for a twice-differentiable even ``g``.

    ``hess0`` may supply the Hessian of g at the origin in closed form;
    otherwise the metric tensor falls back to central differences on g.
    """

    g: Callable[[np.ndarray], float]
    hess0: Optional[tuple] = None


@dataclass(frozen=True)
class InnerProductAnalytic:
    """f(z, z') = g(<z, z'>) with g given by power-series coefficients."""

    coefficients: tuple

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.float64)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("need a non-empty coefficient vector")
        object.__setattr__(self, "coefficients", tuple(float(x) for x in c))

    def g(self, t: float) -> float:
        return float(np.polyval(self.coefficients[::-1], t))

    def g1(self, t: float) -> float:
        c = np.arange(1, len(self.coefficients)) * np.asarray(self.coefficients[1:])
        return float(np.polyval(c[::-1], t)) if len(c) else 0.0

    def g2(self, t: float) -> float:
        k = np.arange(2, len(self.coefficients))
        c = k * (k - 1) * np.asarray(self.coefficients[2:])
        return float(np.polyval(c[::-1], t)) if len(c) else 0.0


KernelSpec = Union[DiscreteMatrix, RBF, Polynomial, CosineSum, TranslationInvariant, InnerProductAnalytic]

FINITE_RANK_FAMILIES = (DiscreteMatrix, Polynomial, CosineSum)


def _as_points(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    return z[None, :] if z.ndim == 1 else z


def kernel_eval(spec: KernelSpec, z, zp) -> float:
    """Evaluate f(z, z'); exactly symmetric in its arguments."""
    if isinstance(spec, DiscreteMatrix):
        i, j = int(z), int(zp)
        if not (0 <= i < spec.m and 0 <= j < spec.m):
            raise ValueError("atom index out of range")
        return float(spec.array()[i, j])
    a = np.asarray(z, dtype=np.float64).ravel()
    b = np.asarray(zp, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise ValueError("dimension mismatch between the two points")
    if isinstance(spec, RBF):
        d = a - b
        return float(np.exp(-np.dot(d, d) / spec.scale))
    if isinstance(spec, Polynomial):
        return float((np.dot(a, b) + spec.a) ** spec.b)
    if isinstance(spec, CosineSum):
        return float(np.sum(np.cos(a - b)) + spec.offset)
    if isinstance(spec, TranslationInvariant):
        u = a - b
        # symmetrised so eval(z, z') == eval(z', z) bit-for-bit even if the
        # supplied g is not exactly even in floating point
        return 0.5 * (float(spec.g(u)) + float(spec.g(-u)))
    if isinstance(spec, InnerProductAnalytic):
        return spec.g(float(np.dot(a, b)))
    raise ValueError(f"unsupported kernel: {spec!r}")


def _pairwise_sq_dists(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    sq = np.sum(x**2, axis=1)[:, None] + np.sum(y**2, axis=1)[None, :] - 2.0 * (x @ y.T)
    return np.maximum(sq, 0.0)


def kernel_cross(spec: KernelSpec, x, y) -> np.ndarray:
    """Kernel matrix f(x_i, y_j) for two point arrays."""
    if isinstance(spec, DiscreteMatrix):
        f = spec.array()
        xi = np.asarray(x, dtype=np.int64)
        yj = np.asarray(y, dtype=np.int64)
        return f[np.ix_(xi, yj)]
    x = _as_points(x)
    y = _as_points(y)
    if isinstance(spec, RBF):
        return np.exp(-_pairwise_sq_dists(x, y) / spec.scale)
    if isinstance(spec, Polynomial):
        return (x @ y.T + spec.a) ** spec.b
    if isinstance(spec, CosineSum):
        out = np.zeros((len(x), len(y)))
        for k in range(x.shape[1]):
            out += np.cos(x[:, k][:, None] - y[:, k][None, :])
        return out + spec.offset
    out = np.empty((len(x), len(y)))
    for i in range(len(x)):
        for j in range(len(y)):
            out[i, j] = kernel_eval(spec, x[i], y[j])
    return out


def _points_of(points) -> np.ndarray:
    if isinstance(points, LatentSample):
        return np.asarray(points.points)
    return np.asarray(points)


def gram(spec: KernelSpec, points) -> np.ndarray:
    """Symmetric kernel Gram matrix at the given latent positions."""
    pts = _points_of(points)
    g = kernel_cross(spec, pts, pts)
    # mirror the upper triangle so symmetry holds exactly in floating point
    g = np.triu(g) + np.triu(g, 1).T
    if len(g) > 1:
        lam = np.linalg.eigvalsh(g)
        if lam.min() < -tol.PSD_RTOL * max(lam.max(), 1.0):
            raise ValueError("Gram matrix is not PSD within tolerance")
    return g


def numerical_rank(m: np.ndarray, rel_tol: float = tol.RANK_RTOL) -> int:
    """Number of eigenvalues above ``rel_tol`` times the largest."""
    m = np.asarray(m, dtype=np.float64)
    lam = np.linalg.eigvalsh(m)
    top = lam.max(initial=0.0)
    if top <= 0:
        return 0
    if lam.min() < -tol.PSD_RTOL * top:
        raise ValueError("matrix is not PSD within tolerance")
    return int(np.sum(lam > rel_tol * top))


@dataclass(frozen=True)
class FeatureMap:
    """Empirical feature map realising a kernel as an inner product.

    For Discrete kernels the map stores one vector per atom; otherwise it
    stores anchor points and extension weights so that
    ``f(z, z') ~= <embed(z), embed(z')>``, exactly for finite-rank kernels
    once the anchors span the feature space.
    """

    kind: str  # "discrete" or "nystrom"
    rank: int
    spec: KernelSpec
    atom_vectors: Optional[np.ndarray] = None
    anchors: Optional[np.ndarray] = None
    weights: Optional[np.ndarray] = None

    def embed(self, points) -> np.ndarray:
        pts = _points_of(points)
        if self.kind == "discrete":
            return self.atom_vectors[np.asarray(pts, dtype=np.int64)]
        return kernel_cross(self.spec, pts, self.anchors) @ self.weights


def mercer_features(spec: KernelSpec, support, rank: int) -> FeatureMap:
    """Finite-rank feature map from an eigendecomposition of the kernel.

    Discrete kernels use the probability-weighted matrix
    ``diag(sqrt(p)) F diag(sqrt(p))`` so atoms embed with the correct
    sampling measure; other kernels use the Nystrom extension from anchor
    points (an i.i.d. sample from the latent distribution).
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if isinstance(spec, DiscreteMatrix):
        if isinstance(support, LatentSample):
            space = support.space
        elif isinstance(support, Discrete):
            space = support
        else:
            raise ValueError("Discrete kernels need atom weights (a Discrete space)")
        w = space.weights()
        if len(w) != spec.m:
            raise ValueError("atom count mismatch between kernel and space")
        b = np.sqrt(w)[:, None] * spec.array() * np.sqrt(w)[None, :]
        nrank = numerical_rank(b)
        if rank > nrank:
            raise ValueError(f"requested rank {rank} exceeds numerical rank {nrank}")
        eig = sym_eig_top(b, rank)
        vecs = (1.0 / np.sqrt(w))[:, None] * eig.vectors * np.sqrt(np.maximum(eig.values, 0.0))
        return FeatureMap(kind="discrete", rank=rank, spec=spec, atom_vectors=vecs)

    anchors = _points_of(support)
    g = gram(spec, anchors)
    nrank = numerical_rank(g)
    if rank > nrank:
        raise ValueError(f"requested rank {rank} exceeds numerical rank {nrank}")
    eig = sym_eig_top(g, rank)
    # columns scaled by 1/sqrt(theta) extend eigenvectors of the anchor Gram
    # to feature coordinates: embed(anchor_l) = sqrt(theta) * v_l
    weights = eig.vectors / np.sqrt(eig.values)
    return FeatureMap(kind="nystrom", rank=rank, spec=spec, anchors=anchors, weights=weights)


@dataclass(frozen=True)
class MetricTensor:
    """Local inner product on latent coordinates at the point ``at``."""

    at: np.ndarray
    h: np.ndarray


def riemannian_metric(spec: KernelSpec, xi) -> MetricTensor:
    """Matrix of second mixed partials of the kernel at (xi, xi).

    Closed forms per family; for bare translation-invariant handles the
    Hessian of g at the origin is approximated by central differences.
    """
    xi = np.asarray(xi, dtype=np.float64).ravel()
    d = len(xi)
    if isinstance(spec, RBF):
        h = (2.0 / spec.scale) * np.eye(d)
    elif isinstance(spec, Polynomial):
        s = float(np.dot(xi, xi)) + spec.a
        h = spec.b * s ** (spec.b - 1) * np.eye(d)
        if spec.b >= 2:
            h = h + spec.b * (spec.b - 1) * s ** (spec.b - 2) * np.outer(xi, xi)
    elif isinstance(spec, CosineSum):
        h = np.eye(d)
    elif isinstance(spec, TranslationInvariant):
        if spec.hess0 is not None:
            h = -np.asarray(spec.hess0, dtype=np.float64)
        else:
            h = -_hessian_at_zero(spec.g, d)
    elif isinstance(spec, InnerProductAnalytic):
        s = float(np.dot(xi, xi))
        h = spec.g1(s) * np.eye(d) + spec.g2(s) * np.outer(xi, xi)
    else:
        raise ValueError(f"no differentiable closed form for {type(spec).__name__}")
    h = 0.5 * (h + h.T)
    return MetricTensor(at=xi, h=h)


def _hessian_at_zero(g: Callable[[np.ndarray], float], d: int, step: float = 1e-5) -> np.ndarray:
    h = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            ei = np.zeros(d)
            ej = np.zeros(d)
            ei[i] = step
            ej[j] = step
            h[i, j] = (g(ei + ej) - g(ei - ej) - g(ej - ei) + g(-ei - ej)) / (4.0 * step**2)
    return 0.5 * (h + h.T)


def metric_finite_difference(spec: KernelSpec, xi, step: float = 1e-4) -> np.ndarray:
    """Central-difference estimate of the second mixed partials at (xi, xi)."""
    xi = np.asarray(xi, dtype=np.float64).ravel()
    d = len(xi)
    h = np.empty((d, d))
    for i in range(d):
        for j in range(d):
            ei = np.zeros(d)
            ej = np.zeros(d)
            ei[i] = step
            ej[j] = step
            h[i, j] = (
                kernel_eval(spec, xi + ei, xi + ej)
                - kernel_eval(spec, xi + ei, xi - ej)
                - kernel_eval(spec, xi - ei, xi + ej)
                + kernel_eval(spec, xi - ei, xi - ej)
            ) / (4.0 * step**2)
    return h


def curve_length(spec: KernelSpec, path: np.ndarray) -> float:
    """Length of a discretised latent curve under the kernel's local metric.

    ``path`` is an (m, d) array of points along the curve; each segment
    contributes sqrt(<dz, H dz>) evaluated at the segment midpoint.
    """
    path = np.asarray(path, dtype=np.float64)
    total = 0.0
    for k in range(len(path) - 1):
        mid = 0.5 * (path[k] + path[k + 1])
        dz = path[k + 1] - path[k]
        h = riemannian_metric(spec, mid).h
        total += float(np.sqrt(dz @ h @ dz))
    return total


def injectivity_check_discrete(f: np.ndarray, tol_: float = 1e-12) -> bool:
    """True iff no two rows of the kernel matrix agree within ``tol_``."""
    f = np.asarray(f, dtype=np.float64)
    m = f.shape[0]
    for i in range(m):
        for j in range(i + 1, m):
            if np.max(np.abs(f[i] - f[j])) <= tol_:
                return False
    return True
