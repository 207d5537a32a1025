"""Noisy cascades, SNR measurement and the Shannon-Hartley capacity bound.

Noise realizations are arrays of shape ``(n, N)``: row ``j`` is added to the
complex input ``0.5 * (1 + exp(i w_j t))`` of memprocessor ``j`` on an
N-point grid over one period. White noise is i.i.d. complex Gaussian with
``E|eps|^2 = variance`` per sample, i.e. white within the grid band.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import MachineConfig, SubsetSumInstance, capacity, encode
from .network import CollectiveState, SampleGrid, nyquist_count, run_cascade
from .oracle import generating_counts


class NoiseKind(str, enum.Enum):
    WHITE_GAUSSIAN = "white_gaussian"
    ONE_OVER_F = "one_over_f"
    CUSTOM_PSD = "custom_psd"


@dataclass(frozen=True)
class NoiseSpec:
    kind: NoiseKind = NoiseKind.WHITE_GAUSSIAN
    variance: float = 0.0
    psd: tuple[tuple[float, float], ...] | None = None  # (normalized f, density) pairs
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if not self.variance >= 0:
            raise ValueError("variance must be >= 0")
        if self.psd is not None:
            psd = tuple((float(f), float(p)) for f, p in self.psd)
            if any(p < 0 for _, p in psd):
                raise ValueError("psd must be nonnegative")
            object.__setattr__(self, "psd", psd)
        if self.kind is NoiseKind.CUSTOM_PSD and not self.psd:
            raise ValueError("custom_psd noise needs a tabulated psd")


def noise_rng(spec: NoiseSpec, run: int | None = None) -> np.random.Generator:
    if run is None:
        return np.random.default_rng(spec.seed)
    return np.random.default_rng([spec.seed, run])


def _shape_spectrum(white: np.ndarray, density: np.ndarray) -> np.ndarray:
    # normalize so the expected per-sample power is unchanged
    gain = np.sqrt(density / density.mean())
    return np.fft.ifft(np.fft.fft(white, axis=-1) * gain, axis=-1)


def draw_noise(spec: NoiseSpec, n: int, sample_count: int, run: int | None = None) -> np.ndarray:
    """One realization for ``n`` memprocessors on ``sample_count`` points."""
    rng = noise_rng(spec, run)
    sigma = math.sqrt(spec.variance / 2.0)
    shape = (n, sample_count)
    white = rng.normal(0.0, sigma, shape) + 1j * rng.normal(0.0, sigma, shape)
    if spec.kind is NoiseKind.WHITE_GAUSSIAN or spec.variance == 0:
        return white
    f = np.fft.fftfreq(sample_count, d=1.0 / sample_count)  # signed normalized frequencies
    if spec.kind is NoiseKind.ONE_OVER_F:
        # 1/f with the low-frequency cutoff at one harmonic spacing
        density = 1.0 / np.maximum(np.abs(f), 1.0)
    else:
        fs, ps = zip(*sorted(spec.psd))
        density = np.interp(f, fs, ps)
        if not density.any():
            raise ValueError("psd is zero on every grid frequency")
    return _shape_spectrum(white, density)


def noisy_cascade(
    instance: SubsetSumInstance,
    config: MachineConfig,
    spec: NoiseSpec,
    sample_count: int | None = None,
    noise: np.ndarray | None = None,
    run: int | None = None,
) -> CollectiveState:
    """Run the full (not linearized) cascade with noise on every memprocessor input.

    ``noise`` overrides the realization drawn from ``spec``.
    """
    assignment = encode(instance, config)
    N = sample_count or nyquist_count(capacity(instance))
    if noise is None:
        noise = draw_noise(spec, instance.n, N, run)
    if noise.shape != (instance.n, N):
        raise ValueError(f"noise shape {noise.shape} != {(instance.n, N)}")
    grid = SampleGrid(N, config.f0)
    samples = run_cascade(assignment, grid, noise)
    samples.setflags(write=False)
    return CollectiveState(assignment, grid, samples)


def _factors(instance: SubsetSumInstance, grid: SampleGrid) -> np.ndarray:
    rows = []
    for a in instance.elements:
        phase = grid.phase(abs(a))
        rows.append(0.5 * (1.0 + np.exp(np.copysign(1.0, a) * 1j * phase)))
    return np.array(rows)


def lownoise_decomposition(instance: SubsetSumInstance, noise: np.ndarray, config: MachineConfig):
    """First-order split of the noisy cascade into ``(g_S, g_N)``.

    ``g_S`` is the noiseless product; ``g_N = sum_k eps_k prod_{j != k} factor_j``
    keeps only terms linear in the noise.
    """
    n, N = noise.shape
    if n != instance.n:
        raise ValueError("one noise row per memprocessor is required")
    factors = _factors(instance, SampleGrid(N, config.f0))
    # products of all factors before / after k, so zero factors need no division
    prefix = np.ones((n + 1, N), dtype=complex)
    suffix = np.ones((n + 1, N), dtype=complex)
    for j in range(n):
        prefix[j + 1] = prefix[j] * factors[j]
        suffix[n - j - 1] = suffix[n - j] * factors[n - j - 1]
    g_s = prefix[n]
    g_n = np.zeros(N, dtype=complex)
    for k in range(n):
        g_n += noise[k] * prefix[k] * suffix[k + 1]
    return g_s, g_n


def snr_predicted(n: int, variance: float) -> float:
    """Predicted total SNR, 1 / (n * variance); ``math.inf`` when noiseless."""
    if variance < 0:
        raise ValueError("variance must be >= 0")
    if variance == 0:
        return math.inf
    return 1.0 / (n * variance)


@dataclass(frozen=True)
class SnrReport:
    n: int
    variance: float
    runs: int
    predicted_snr: float
    measured_total_snr: float
    signal_power: float
    noise_power: float
    per_harmonic_snr: dict[int, float] = field(default_factory=dict)

    @property
    def per_harmonic_spread(self) -> float:
        vals = list(self.per_harmonic_snr.values())
        return max(vals) / min(vals) if vals else math.nan

    @property
    def ratio_to_predicted(self) -> float:
        return self.measured_total_snr / self.predicted_snr

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "variance": self.variance,
            "runs": self.runs,
            "snr_predicted": self.predicted_snr,
            "snr_measured": self.measured_total_snr,
            "signal_power": self.signal_power,
            "noise_power": self.noise_power,
            "per_harmonic_spread": self.per_harmonic_spread,
            "per_harmonic_snr": {str(f): v for f, v in sorted(self.per_harmonic_snr.items())},
        }


def snr_measured(
    instance: SubsetSumInstance,
    config: MachineConfig,
    spec: NoiseSpec,
    runs: int,
    sample_count: int | None = None,
) -> SnrReport:
    """Monte-Carlo SNR of the full noisy cascade against the noiseless state.

    Run ``r`` draws its noise from the seed pair ``(spec.seed, r)``, so runs are
    independent of evaluation order. Per-harmonic SNR is reported for every
    harmonic that carries at least one subset.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    A = capacity(instance)
    N = sample_count or nyquist_count(A)
    T = 1.0 / config.f0
    clean = run_cascade(encode(instance, config), SampleGrid(N, config.f0))
    signal_power = T / N * math.fsum(np.abs(clean) ** 2)

    offset, counts = generating_counts(instance)
    harmonics = [int(i) - offset for i in np.nonzero(counts)[0]]
    bins = np.array(harmonics) % N
    signal_bins = np.abs(np.fft.fft(clean)[bins] / N) ** 2

    powers = []
    bin_energy = np.zeros(len(harmonics))
    for r in range(runs):
        noisy = noisy_cascade(instance, config, spec, N, run=r).samples
        residue = noisy - clean
        powers.append(T / N * math.fsum(np.abs(residue) ** 2))
        bin_energy += np.abs(np.fft.fft(residue)[bins] / N) ** 2
    noise_power = math.fsum(powers) / runs
    bin_energy /= runs

    per_harmonic = {}
    for f, s, e in zip(harmonics, signal_bins, bin_energy):
        per_harmonic[f] = float(s / e) if e > 0 else math.inf
    measured = signal_power / noise_power if noise_power > 0 else math.inf
    return SnrReport(
        n=instance.n,
        variance=spec.variance,
        runs=runs,
        predicted_snr=snr_predicted(instance.n, spec.variance),
        measured_total_snr=measured,
        signal_power=signal_power,
        noise_power=noise_power,
        per_harmonic_snr=per_harmonic,
    )


def synthetic_instance(n: int) -> SubsetSumInstance:
    """The first ``n`` odd magnitudes with alternating sign: 1, -3, 5, -7, ..."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return SubsetSumInstance(tuple((2 * j + 1) * (-1) ** j for j in range(n)))


@dataclass(frozen=True)
class CapacityResult:
    capacity: float  # bits per second, numerical integral
    analytic_limit: float  # large-n limit
    bandwidth: float
    panels: int


def channel_capacity(b0: float, n: int, noise_psd, panels: int = 1000) -> CapacityResult:
    """Shannon-Hartley capacity with SNR(f) = 1 / (n * psd(f)) over B = b0 * n.

    The integral uses the composite trapezoid rule. ``analytic_limit`` is the
    large-n value ``b0 / (E * ln 2)`` where ``E`` is the harmonic mean of the
    psd over the band (the psd itself when it is flat).
    """
    if not b0 > 0:
        raise ValueError("b0 must be positive")
    if n < 1 or panels < 1:
        raise ValueError("n and panels must be >= 1")
    bandwidth = b0 * n
    f = np.linspace(0.0, bandwidth, panels + 1)
    psd = np.array([float(noise_psd(x)) for x in f])
    if np.any(~(psd > 0)):
        raise ValueError("noise psd must be positive on the integration band")
    integrand = np.log2(1.0 + 1.0 / (n * psd))
    cap = float(np.trapezoid(integrand, f))
    mean_inverse = float(np.trapezoid(1.0 / psd, f)) / bandwidth
    limit = b0 * mean_inverse / math.log(2.0)
    return CapacityResult(cap, limit, bandwidth, panels)
