"""Latent-metric-space laboratory.

Simulates high-dimensional data whose rows are random-field evaluations at
latent positions, embeds it with (uncentered) principal component scores, and
provides the downstream diagnostics that make the latent structure visible:
concentration-error measurement, split-half Wasserstein dimension selection,
graph-geodesic isometry checks, Vietoris-Rips persistence and a kNN
prediction harness.
"""

__version__ = "0.1.0"

from .linalg import sym_eig_top, svd_thin, cholesky_jitter, procrustes
from .spaces import (
    Discrete,
    TorusR3,
    Sphere,
    Annulus,
    Polygon,
    LatentSample,
    sample,
    torus_angles,
    discrete_metric,
)
from .kernels import (
    DiscreteMatrix,
    RBF,
    Polynomial,
    CosineSum,
    TranslationInvariant,
    InnerProductAnalytic,
    FeatureMap,
    kernel_eval,
    gram,
    numerical_rank,
    mercer_features,
    riemannian_metric,
    injectivity_check_discrete,
)
from .simulate import SimConfig, SimOutput, simulate, conditional_gram_expectation
from .embed import Embedding, AlignmentReport, pc_scores, align, centered_kernel
from .transport import WeightedCloud, TransportPlan, wasserstein1, bottleneck_feasible
from .dimselect import DimSelectReport, wasserstein_dimension_select, elbow_select
from .geometry import WeightedGraph, neighbor_graph, graph_geodesics, isometry_slope
from .rips import PersistenceDiagram, rips_persistence, bottleneck, count_features
from .knn import knn_predict, error_curve, ErrorCurve
