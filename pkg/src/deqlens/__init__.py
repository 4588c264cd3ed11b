"""Inner-model selection and dequantizability checks for sparse Hermitian matrices."""
from .config import AnalysisConfig
from .families import (
    FamilyKind,
    FamilySpec,
    block_spectrum,
    diag_power_family,
    generate,
    identity,
    random_block_hermitian,
    random_support_hermitian,
)
from .matrix import (
    MatrixShapeSummary,
    SparseHermitianMatrix,
    adjoint,
    entrywise_power,
    from_coordinates,
    from_dense,
    shape_summary,
)
from .mmio import read_matrix_market, write_matrix_market
from .mu_pass import InnerModel, MuResult, minimize_mixed, mu, mu_objective
from .quasinorms import (
    QuasinormProfile,
    check_sp_ordering,
    frobenius_norm,
    holder_check,
    lp_monotonicity_check,
    profile,
    s_p,
    s_zero,
)
from .spectrum import (
    SpectrumSummary,
    condition_number,
    eigenvalues,
    extremal_eigenvalues_oracle,
    sparse_access_check,
    spectrum,
)
from .verdict import (
    Classification,
    VerdictReport,
    classify,
    corollary_family_check,
    intermediate_sqrt_s_bound,
    lemma_deq_sufficient,
    lemma_undeq_bound,
    theorem_form_A,
    theorem_form_B,
)

__version__ = "0.1.0"
