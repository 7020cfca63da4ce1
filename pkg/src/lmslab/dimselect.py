"""PCA dimension selection.

The main method splits the rows in half, projects the first half onto its
top-r principal directions for each candidate r, and measures how close the
projected half is to the held-out half with the exact 1-Wasserstein
distance; the r with the smallest distance wins.  A profile-likelihood
elbow on the eigenvalue scree is included as a cheap baseline.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .rng import SPLIT_STREAM, substream
from .transport import WeightedCloud, wasserstein1

DEFAULT_R_CAP = 50


@dataclass(frozen=True)
class DimSelectReport:
    curve: tuple  # of (r, d_r)
    selected: int
    method: str
    r_grid: tuple

    def to_csv(self, path) -> None:
        arr = np.asarray(self.curve, dtype=np.float64)
        np.savetxt(path, arr, delimiter=",", header="r,d_r", comments="")


def wasserstein_dimension_select(
    y: np.ndarray,
    r_max: int = None,
    seed: int = 0,
    shuffle: bool = False,
) -> DimSelectReport:
    """Split-half Wasserstein selection of the PC-score dimension.

    Rows are split into the first ceil(n/2) and the rest (optionally
    pre-shuffled with ``seed`` for data with meaningful row order).  For each
    r the first half is projected onto its own top-r principal directions
    and compared with the second half as point sets in R^p.
    """
    y = np.asarray(y, dtype=np.float64)
    n, p = y.shape
    if n < 4:
        raise ValueError("need at least 4 rows to split")
    n1 = (n + 1) // 2
    cap = min(DEFAULT_R_CAP, n1, p)
    if r_max is None:
        r_max = cap
    if not 1 <= r_max <= min(n1, p):
        raise ValueError(f"r_max={r_max} out of range (max {min(n1, p)})")

    if shuffle:
        order = substream(seed, SPLIT_STREAM).permutation(n)
        y = y[order]
    y1 = y[:n1]
    y2 = y[n1:]

    # thin SVD of the first half: top-r right singular vectors span the
    # projection, so the r-th projected cloud is a rank-one update of the
    # (r-1)-th and all candidates come from a single decomposition
    u, s, _ = np.linalg.svd(y1, full_matrices=False)
    w = u.T @ y1

    costs = np.empty(r_max)
    w2 = WeightedCloud(points=y2)
    x_hat = np.zeros_like(y1)
    for r in range(1, r_max + 1):
        x_hat += np.outer(u[:, r - 1], w[r - 1])
        cost, _ = wasserstein1(WeightedCloud(points=x_hat.copy()), w2)
        costs[r - 1] = cost

    grid = tuple(range(1, r_max + 1))
    selected = int(np.argmin(costs)) + 1
    curve = tuple((r, float(c)) for r, c in zip(grid, costs))
    return DimSelectReport(curve=curve, selected=selected, method="wasserstein", r_grid=grid)


def elbow_select(eigenvalues) -> int:
    """Scree elbow via the two-segment Gaussian profile log-likelihood.

    Splitting the spectrum after position d and profiling out the two means
    and common variance, the log-likelihood is maximised exactly where the
    total within-segment sum of squares is minimised; that split index is
    returned.  A flat spectrum is flagged and maps to 1.
    """
    lam = np.asarray(eigenvalues, dtype=np.float64)
    if lam.ndim != 1 or len(lam) < 2:
        raise ValueError("need at least two eigenvalues")
    if np.any(np.diff(lam) > 1e-12 * max(abs(lam).max(), 1.0)):
        raise ValueError("eigenvalues must be non-increasing")
    if np.allclose(lam, lam[0], rtol=0.0, atol=1e-12 * max(abs(lam[0]), 1.0)):
        warnings.warn("degenerate flat spectrum; elbow defaults to 1", RuntimeWarning)
        return 1
    q = len(lam)
    best_d, best_sse = 1, np.inf
    csum = np.concatenate(([0.0], np.cumsum(lam)))
    csum2 = np.concatenate(([0.0], np.cumsum(lam**2)))
    for d in range(1, q):
        left = csum2[d] - csum[d] ** 2 / d
        right = (csum2[q] - csum2[d]) - (csum[q] - csum[d]) ** 2 / (q - d)
        sse = left + right
        if sse < best_sse - 1e-15 * max(best_sse, 1.0):
            best_sse = sse
            best_d = d
    return best_d
