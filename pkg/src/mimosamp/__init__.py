"""MIMO sampling and FFT-based reconstruction of periodic band-limited signals.

The library models periodic signals by their Fourier coefficients, simulates
multi-input multi-output LTI channel banks, and recovers the inputs from
uniform samples of the outputs through per-frequency left inverses, either
with a fast FFT pipeline or with the direct interpolation-kernel formula.
Analysis tools quantify resampling consistency and aliasing error.
"""

from .analysis import (
    ErrorReport,
    NoiseModel,
    actual_mse,
    averaged_mse_exact,
    averaged_mse_quadrature,
    consistency_test,
    error_report,
    mse_upper_bound,
    noisy_reconstruct,
)
from .errors import (
    CapacityError,
    ConfigError,
    InsufficientChannelsError,
    InvalidInverseError,
    MimoSampError,
    OutOfBandError,
    SingularSystemError,
)
from .plan import SamplingPlan, block_any, block_of, block_range, grid_instants, make_plan
from .reconstruct import (
    ReconstructionRequest,
    Reconstructor,
    direct_reconstruct,
    fft_reconstruct,
    interpolation_kernel,
    left_inverse,
    recover_coefficients,
    unstack_spectra,
)
from .spectrum import (
    AnalyticSignal,
    SpectrumSignal,
    cyclic_convolve,
    dirichlet_bandlimit,
    energy_distance,
)
from .system import (
    ChannelResponse,
    Constant,
    Derivative,
    FoldedSystemMatrix,
    LinearCombo,
    MimoSystem,
    OutputSamples,
    Tabulated,
    Translation,
    fold_system,
    rank_certificate,
    sample_outputs,
    simulate_outputs,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticSignal",
    "CapacityError",
    "ChannelResponse",
    "ConfigError",
    "Constant",
    "Derivative",
    "ErrorReport",
    "FoldedSystemMatrix",
    "InsufficientChannelsError",
    "InvalidInverseError",
    "LinearCombo",
    "MimoSampError",
    "MimoSystem",
    "NoiseModel",
    "OutOfBandError",
    "OutputSamples",
    "ReconstructionRequest",
    "Reconstructor",
    "SamplingPlan",
    "SingularSystemError",
    "SpectrumSignal",
    "Tabulated",
    "Translation",
    "actual_mse",
    "averaged_mse_exact",
    "averaged_mse_quadrature",
    "block_any",
    "block_of",
    "block_range",
    "consistency_test",
    "cyclic_convolve",
    "direct_reconstruct",
    "dirichlet_bandlimit",
    "energy_distance",
    "error_report",
    "fft_reconstruct",
    "fold_system",
    "grid_instants",
    "interpolation_kernel",
    "left_inverse",
    "make_plan",
    "mse_upper_bound",
    "noisy_reconstruct",
    "rank_certificate",
    "recover_coefficients",
    "sample_outputs",
    "simulate_outputs",
    "unstack_spectra",
]
