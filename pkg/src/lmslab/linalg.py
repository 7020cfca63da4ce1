"""Dense real linear algebra primitives.

Symmetric eigendecomposition, thin SVD, jittered Cholesky and orthogonal
Procrustes, with the conventions the rest of the package relies on:
eigenvalues sorted non-increasing, deterministic eigenvector signs, and a
bounded jitter escalation for nearly singular covariance matrices.

Backed by LAPACK through numpy; all functions are pure and hold no state.
"""

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol


@dataclass(frozen=True)
class SymEig:
    """Top eigenpairs of a symmetric matrix.

    ``values`` is non-increasing; the columns of ``vectors`` are orthonormal
    and each has its largest-magnitude entry made positive, so repeated runs
    produce identical output despite the sign ambiguity of eigenvectors.
    """

    values: np.ndarray
    vectors: np.ndarray


def _check_finite(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _check_symmetric(a: np.ndarray) -> np.ndarray:
    a = _check_finite(a, "matrix")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.size and np.max(np.abs(a - a.T)) > tol.SYMMETRY_ATOL:
        raise ValueError("matrix is not symmetric within 1e-12")
    return a


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-absolute entry is positive."""
    v = np.array(vectors, copy=True)
    if v.size == 0:
        return v
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def sym_eig_top(a: np.ndarray, r: int) -> SymEig:
    """Largest ``r`` eigenpairs of a symmetric matrix.

    Parameters
    ----------
    a : (n, n) symmetric array
    r : number of leading eigenpairs, 1 <= r <= n

    Returns
    -------
    SymEig with ``values`` (length r, non-increasing) and ``vectors`` (n, r).
    """
    a = _check_symmetric(a)
    n = a.shape[0]
    if not 1 <= r <= n:
        raise ValueError(f"r={r} out of range for {n}x{n} matrix")
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError("eigensolver failed to converge") from exc
    order = np.argsort(w, kind="stable")[::-1]
    w = w[order][:r]
    v = fix_signs(v[:, order][:, :r])
    return SymEig(values=w, vectors=v)


def svd_thin(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``a = u @ diag(s) @ v.T`` with s non-increasing."""
    a = _check_finite(a, "matrix")
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return u, s, vt.T


def cholesky_jitter(a: np.ndarray, jitter: float = 0.0) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T = a + j * I``.

    Starts from the requested ``jitter`` and escalates by factors of 10 up
    to ``1e-4 * trace(a)/n`` before giving up, which tolerates the numerical
    rank deficiency of smooth-kernel Gram matrices at clustered points.
    """
    a = _check_symmetric(a)
    if jitter < 0:
        raise ValueError("jitter must be non-negative")
    n = a.shape[0]
    scale = max(np.trace(a) / n, 0.0)
    cap = tol.CHOL_JITTER_CAP_REL * scale
    ladder = [jitter]
    j = max(jitter, 1e-12 * scale if scale > 0 else 1e-12)
    while j <= cap:
        j *= 10.0
        ladder.append(j)
    eye = np.eye(n)
    for j in ladder:
        if j > max(cap, jitter):
            break
        try:
            return np.linalg.cholesky(a + j * eye)
        except np.linalg.LinAlgError:
            continue
    raise ValueError("matrix is not positive semi-definite within the jitter cap")


def procrustes(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Orthogonal ``q`` minimising ``||a @ q - b||_F``.

    ``q = f1 @ f2.T`` where ``f1 diag(s) f2.T`` is the full SVD of ``a.T @ b``.
    """
    a = _check_finite(a, "a")
    b = _check_finite(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    u, _, vt = np.linalg.svd(a.T @ b)
    return u @ vt
