"""Simulator and verification library for non-destructive measurements on
quantum Gibbs states: exact detailed-balance measurement channels, warm-start
POVMs, single-trajectory estimation protocols, and an explicit-matrix
block-encoding calculus, all checked against independent brute-force oracles
at desk scale."""

from .blockenc import (
    BlockEncoding,
    be_filtered,
    be_lcu,
    be_product,
    be_taylor_sqrt,
    completion_precheck,
    dilate,
    extract,
    poly_sqrt_degree,
    quasi_local_truncate,
)
from .channels import (
    MeasurementChannel,
    SamplerSpec,
    apply_channel,
    branch_probabilities,
    build_db_channel,
    build_povm,
    build_sampler,
    channel_from_json,
    channel_to_json,
    post_select,
)
from .filters import (
    FilterSpec,
    QuadratureGrid,
    bandlimit,
    filter_fourier,
    filtered_exact,
    filtered_quadrature,
    imaginary_shift,
    l1_norm,
    quadrature_error_bound,
)
from .gibbs import (
    GibbsContext,
    Superoperator,
    chi2_divergence,
    kms_db_residual,
    kms_inner,
    make_gibbs_context,
    mixing_time_upper,
    spectral_gap,
    superop_matrix,
    trace_distance,
)
from .instrument import (
    QuantumInstrument,
    TrajectoryRecord,
    as_instrument,
    autocorrelation,
    compose_db_instrument,
    compose_remix_instrument,
    exact_trajectory_distribution,
    perturb_and_tv,
    sample_trajectory,
    stationary_stats,
    stinespring_isometry,
    t_aut,
    theta_gap_bound,
)
from .linalg import HermEig, herm_eig, matfun_herm, norm, taylor_matrix_sqrt
from .policy import DEFAULT_POLICY, NumericPolicy
from .protocols import (
    ProtocolConfig,
    ProtocolResult,
    run_db_protocol,
    run_remix_protocol,
    sample_count_azuma,
    sample_count_chebyshev,
)

__version__ = "0.1.0"
