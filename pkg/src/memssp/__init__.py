"""Simulator of a memprocessor network that solves subset sum through its collective state."""

__version__ = "0.1.0"

from .core import (
    AliasingError,
    CountOverflowError,
    HarmonicGridError,
    InstanceSizeError,
    MachineConfig,
    SSPError,
    SubsetSumInstance,
    capacity,
    encode,
    validate,
)
from .network import (
    CollectiveState,
    collective_state_analytic,
    memprocessor_step,
    sample_collective_state,
    signal_energy,
)
from .noise import NoiseSpec, channel_capacity, noisy_cascade, snr_measured, snr_predicted
from .oracle import count_subsets_bruteforce, count_subsets_dp, full_count_table
from .readout import ReadoutResult, dc_average, frequency_shift, read_pair
from .spectrum import Spectrum, dft_spectrum, exact_spectrum, harmonic_amplitude

TABLE1_ELEMENTS = (130, -130, -146, -166, -44, 118)
