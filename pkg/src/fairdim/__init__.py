"""Group-fair PCA: projections trading overall reconstruction error against
the error gap between two sensitive groups."""

from .dataset import DataError, GroupedData, RawTable, balance, center_and_split, load_grouped, load_table
from .linalg import EigenPairs, LinalgError, frobenius_norm_sq, matmul, scaled_gram, sym_eig_top_r
from .metrics import (
    GroupMetrics,
    PrivilegeAssignment,
    avg_reconstruction_error,
    avg_reconstruction_error_direct,
    disparity,
    fairness_measure,
    group_metrics,
    identify_privileged,
)
from .fairpca import (
    FairFitResult,
    GoldenSectionResult,
    SearchConfig,
    c_fpca,
    classical_pca,
    fair_projection,
    golden_section,
    u_fpca,
    weighted_covariance,
)

__version__ = "0.1.0"
