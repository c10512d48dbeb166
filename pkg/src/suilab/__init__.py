"""suilab: Gaussian-state simulation and SNR analysis of joint quadrature measurement."""

from .circuit import Circuit, Combine, Homodyne
from .encoding import (
    ModulationSignal,
    SnrResult,
    combined_estimator,
    decode_angle,
    extract_snr,
    sql_joint,
)
from .gaussian import (
    BeamSplitter,
    GaussianState,
    LossChannel,
    MeasurementStats,
    Modulator,
    PhaseShift,
    TwoModeSqueezer,
    apply_circuit,
    apply_element,
    coherent,
    combined_stats,
    homodyne_stats,
    paired_gain,
    photon_number,
    sample_outcomes,
    vacuum,
)
from .schemes import (
    SCHEMES,
    SchemeParams,
    SchemeReport,
    build_circuit,
    evaluate_circuit,
    heisenberg_limit,
    high_gain_limit,
    optimum_g2,
    snr_beam_split,
    snr_db_dc,
    snr_dense_coding,
    snr_direct,
    snr_dual_beam,
    snr_opa_split,
    snr_post_detection,
    snr_scheme,
    snr_sui,
    snr_sui_split3,
    sui_output_noise,
)

__version__ = "0.1.0"
