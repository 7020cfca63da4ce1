"""Numeric tolerances used across the package, fixed in one place."""

# symmetry check on eigensolver inputs (absolute, max-entry)
SYMMETRY_ATOL = 1e-12

# relative residual accepted from the dense eigensolver / SVD
EIG_RESIDUAL_RTOL = 1e-9

# Cholesky: reconstruction tolerance and the jitter escalation cap,
# relative to mean diagonal
CHOL_RTOL = 1e-8
CHOL_JITTER_CAP_REL = 1e-4

# Gram matrices are accepted as PSD down to this relative eigenvalue
PSD_RTOL = 1e-8

# numerical rank threshold (relative to the largest eigenvalue)
RANK_RTOL = 1e-8

# transport: marginal feasibility and optimality slack
FLOW_MARGINAL_TOL = 1e-9

# latent samples: ambient constraint residual (e.g. torus implicit equation)
CONSTRAINT_ATOL = 1e-9
