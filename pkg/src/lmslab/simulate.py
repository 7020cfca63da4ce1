"""Simulation of noisy random-field data over a latent space.

Each of the p columns of the output is an independent zero-mean Gaussian
field with covariance given by the kernel, evaluated at the n latent
positions; independent unit-variance Gaussian noise scaled by sigma is added
entry-wise.  Sampling is column-blocked on keyed substreams, so results are
bit-identical for a given config regardless of how work is scheduled.
"""

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .kernels import DiscreteMatrix, FINITE_RANK_FAMILIES, KernelSpec, gram, numerical_rank
from .linalg import cholesky_jitter, sym_eig_top
from .rng import FIELD_STREAM, NOISE_STREAM, substream
from .spaces import Discrete, LatentSample, LatentSpace, sample

# columns are drawn in fixed-size blocks, one RNG substream per block
_COLUMN_BLOCK = 256

# default Cholesky jitter, relative to the mean diagonal of the Gram matrix
_GP_JITTER_REL = 1e-8


@dataclass(frozen=True)
class SimConfig:
    n: int
    p: int
    sigma: float
    kernel: KernelSpec
    space: LatentSpace
    seed: int
    noise: str = "gaussian"

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("need n >= 1 and p >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        if self.noise != "gaussian":
            raise ValueError("only gaussian noise is supported")


@dataclass(frozen=True)
class SimOutput:
    y: np.ndarray
    z: LatentSample
    config: SimConfig
    phi_z: Optional[np.ndarray] = field(default=None)
    x: Optional[np.ndarray] = field(default=None)

    def save(self, y_path, meta_path) -> None:
        """Write the data matrix as bare CSV plus a JSON metadata sidecar."""
        np.savetxt(y_path, self.y, delimiter=",")
        meta = {
            "n": self.config.n,
            "p": self.config.p,
            "sigma": self.config.sigma,
            "seed": self.config.seed,
            "noise": self.config.noise,
            "kernel": type(self.config.kernel).__name__,
            "space": type(self.config.space).__name__,
        }
        with open(meta_path, "w") as fh:
            json.dump(meta, fh, indent=2)


def _gaussian_columns(chol: np.ndarray, p: int, seed: int, stream: int) -> np.ndarray:
    """n x p matrix whose columns are i.i.d. N(0, chol @ chol.T)."""
    n = chol.shape[0]
    out = np.empty((n, p))
    for start in range(0, p, _COLUMN_BLOCK):
        stop = min(start + _COLUMN_BLOCK, p)
        rng = substream(seed, stream, start // _COLUMN_BLOCK)
        out[:, start:stop] = chol @ rng.standard_normal((n, stop - start))
    return out


def simulate_fields(z: LatentSample, kernel: KernelSpec, p: int, seed: int) -> np.ndarray:
    """Noise-free field matrix X with X[i, j] = (field j)(z_i).

    For discrete kernels the fields are sampled once per atom and broadcast
    to the rows that share the atom, which is distributionally identical to
    sampling the full n x n Gram and much cheaper.
    """
    if isinstance(kernel, DiscreteMatrix):
        chol = cholesky_jitter(kernel.array(), 0.0)
        atom_fields = _gaussian_columns(chol, p, seed, FIELD_STREAM)
        idx = np.asarray(z.points, dtype=np.int64)
        return atom_fields[idx]
    k = gram(kernel, z)
    jitter = _GP_JITTER_REL * float(np.mean(np.diag(k)))
    chol = cholesky_jitter(k, jitter)
    return _gaussian_columns(chol, p, seed, FIELD_STREAM)


def _finite_rank_features(z: LatentSample, kernel: KernelSpec) -> Optional[np.ndarray]:
    if isinstance(kernel, DiscreteMatrix):
        from .kernels import mercer_features

        space = z.space if isinstance(z.space, Discrete) else Discrete(kernel.m)
        fmap = mercer_features(kernel, space, numerical_rank(kernel.array()))
        return fmap.embed(z)
    if isinstance(kernel, FINITE_RANK_FAMILIES):
        # empirical feature map from the sample Gram; any rank-r map for the
        # same kernel differs only by an orthogonal transform, which the
        # alignment step absorbs
        k = gram(kernel, z)
        r = numerical_rank(k)
        eig = sym_eig_top(k, r)
        return eig.vectors * np.sqrt(np.maximum(eig.values, 0.0))
    return None


def simulate(config: SimConfig, keep_fields: bool = False, with_features: bool = True) -> SimOutput:
    """Draw latent points, evaluate random fields at them, and add noise."""
    z = sample(config.space, config.n, config.seed)
    x = simulate_fields(z, config.kernel, config.p, config.seed)
    y = x
    if config.sigma > 0:
        noise = _gaussian_columns(np.eye(config.n), config.p, config.seed, NOISE_STREAM)
        y = x + config.sigma * noise
    phi = _finite_rank_features(z, config.kernel) if with_features else None
    return SimOutput(
        y=y,
        z=z,
        config=config,
        phi_z=phi,
        x=x if keep_fields else None,
    )


def conditional_gram_expectation(z: LatentSample, kernel: KernelSpec, sigma: float) -> np.ndarray:
    """Expected value of (1/p) Y Y^T given the latent points: Gram + sigma^2 I."""
    k = gram(kernel, z)
    return k + sigma**2 * np.eye(len(k))
