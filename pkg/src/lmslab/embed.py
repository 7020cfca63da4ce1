"""Principal component scores and alignment error measurement.

Scores are projections of the (by default uncentered) data matrix onto the
top eigenvectors of Y^T Y.  When n <= p the same scores are obtained from
the much smaller matrix (1/p) Y Y^T: if U L U^T is its truncated
eigendecomposition then sqrt(p) U L^(1/2) equals Y V up to column signs.
Alignment against a reference configuration is by orthogonal Procrustes,
reporting both the worst per-point error and the worst pairwise-distance
discrepancy (which never exceeds twice the former).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .kernels import KernelSpec, kernel_cross, gram
from .linalg import procrustes, sym_eig_top
from .spaces import LatentSample


@dataclass(frozen=True)
class Embedding:
    """PC scores with eigenvalues reported on the (n p)^-1 Y^T Y scale."""

    scores: np.ndarray
    eigenvalues: np.ndarray
    centered: bool
    r: int
    p: int

    def scaled_scores(self) -> np.ndarray:
        """Score rows divided by sqrt(p), the scale concentration lives on."""
        return self.scores / np.sqrt(self.p)

    def to_csv(self, path, eig_path=None) -> None:
        header = ",".join(f"pc{i + 1}" for i in range(self.r))
        np.savetxt(path, self.scores, delimiter=",", header=header, comments="")
        if eig_path is not None:
            np.savetxt(eig_path, self.eigenvalues, delimiter=",", header="eigenvalue", comments="")


@dataclass(frozen=True)
class AlignmentReport:
    q: np.ndarray
    uniform_error: float
    pairwise_error: float


def pc_scores(y: np.ndarray, r: int, centered: bool = False, route: str = "auto") -> Embedding:
    """Dimension-r PC scores of an n x p data matrix.

    ``route`` picks the eigendecomposition side: "gram" works with the n x n
    matrix (1/p) Y Y^T, "cov" with the p x p matrix Y^T Y, "auto" chooses the
    smaller.  Both return scores in the Y V convention.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2:
        raise ValueError("expected a 2-d data matrix")
    n, p = y.shape
    if not 1 <= r <= min(n, p):
        raise ValueError(f"r={r} out of range for a {n}x{p} matrix")
    if centered:
        y = y - y.mean(axis=0, keepdims=True)
    if route == "auto":
        route = "gram" if n <= p else "cov"
    if route == "gram":
        g = (y @ y.T) / p
        g = 0.5 * (g + g.T)
        eig = sym_eig_top(g, r)
        lam = np.maximum(eig.values, 0.0)
        _warn_if_deficient(lam, r)
        scores = np.sqrt(p) * eig.vectors * np.sqrt(lam)
        eigenvalues = lam / n
    elif route == "cov":
        c = y.T @ y
        c = 0.5 * (c + c.T)
        eig = sym_eig_top(c, r)
        lam = np.maximum(eig.values, 0.0)
        _warn_if_deficient(lam, r)
        scores = y @ eig.vectors
        eigenvalues = lam / (n * p)
    else:
        raise ValueError(f"unknown route {route!r}")
    return Embedding(scores=scores, eigenvalues=eigenvalues, centered=centered, r=r, p=p)


def _warn_if_deficient(lam: np.ndarray, r: int) -> None:
    top = lam.max(initial=0.0)
    if top <= 0.0:
        raise ValueError("data matrix is rank deficient: no nonzero eigenvalues")
    rank = int(np.sum(lam > 1e-12 * top))
    if rank < r:
        warnings.warn(
            f"requested r={r} exceeds numerical rank {rank}; trailing score columns are ~0",
            RuntimeWarning,
            stacklevel=3,
        )


def align(embedding: Embedding, targets: np.ndarray) -> AlignmentReport:
    """Procrustes-align p^(-1/2)-scaled scores to a reference configuration.

    ``uniform_error`` is the worst per-row distance after the optimal
    orthogonal transform; ``pairwise_error`` is the worst discrepancy between
    the two pairwise-distance matrices, which needs no transform at all.
    """
    return align_scaled(embedding.scaled_scores(), targets)


def align_scaled(scaled_scores: np.ndarray, targets: np.ndarray) -> AlignmentReport:
    """Alignment report for already-scaled score rows against targets."""
    s = np.asarray(scaled_scores, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if s.shape != t.shape:
        raise ValueError(f"shape mismatch: {s.shape} vs {t.shape}")
    q = procrustes(s, t)
    uniform = float(np.max(np.linalg.norm(s @ q - t, axis=1)))
    pairwise = float(_max_pairwise_gap(s, t))
    return AlignmentReport(q=q, uniform_error=uniform, pairwise_error=pairwise)


def _max_pairwise_gap(a: np.ndarray, b: np.ndarray) -> float:
    def dists(x):
        sq = np.sum(x**2, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
        return np.sqrt(np.maximum(d2, 0.0))

    return np.max(np.abs(dists(a) - dists(b)))


def centered_kernel(kernel: KernelSpec, z: LatentSample, zq, zqp) -> float:
    """Kernel recentered by the latent sample.

    Equals f(z,z') - mean_i f(Z_i,z) - mean_i f(Z_i,z') + mean_ij f(Z_i,Z_j);
    evaluated over the sample itself this is the double-centered Gram matrix.
    """
    pts = np.asarray(z.points)
    fzz = kernel_cross(kernel, _one(zq), _one(zqp))[0, 0]
    row = kernel_cross(kernel, pts, _one(zq))[:, 0].mean()
    col = kernel_cross(kernel, pts, _one(zqp))[:, 0].mean()
    grand = kernel_cross(kernel, pts, pts).mean()
    return float(fzz - row - col + grand)


def centered_gram(kernel: KernelSpec, z: LatentSample) -> np.ndarray:
    """Matrix of the recentered kernel over the sample points."""
    k = gram(kernel, z)
    row = k.mean(axis=1)
    grand = k.mean()
    return k - row[:, None] - row[None, :] + grand


def _one(z) -> np.ndarray:
    arr = np.asarray(z)
    if arr.ndim == 0:
        return arr[None]
    return arr[None, :]
