"""The memprocessor cascade and its collective state g(t).

Two evaluation paths exist on purpose. ``collective_state_analytic`` multiplies
the closed-form factors ``0.5 * (1 + exp(i w_j t))``; ``sample_collective_state``
pushes the constant input ``(1, 0)`` through ``memprocessor_step`` once per
memprocessor, the way the hardware does, on a uniform grid over one period.

On a ``SampleGrid`` the phase of harmonic ``m`` at sample ``k`` is reduced
exactly as ``(m * k) mod N`` before the trig call, so large capacities do not
accumulate phase error.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

import numpy as np

from .core import FrequencyAssignment, SubsetSumInstance
from .oracle import generating_counts

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SampleGrid:
    """``n_samples`` uniform points ``t_k = k T / N`` over one period ``T = 1/f0``."""

    n_samples: int
    f0: float

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")

    def __len__(self):
        return self.n_samples

    @property
    def period(self) -> float:
        return 1.0 / self.f0

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) / (self.n_samples * self.f0)

    @cached_property
    def _k(self) -> np.ndarray:
        return np.arange(self.n_samples, dtype=np.int64)

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        phase = TWO_PI * self._k / self.n_samples
        return np.cos(phase), np.sin(phase)

    def residues(self, harmonic: int) -> np.ndarray:
        """``(harmonic * k) mod N`` for every sample index ``k``."""
        N = self.n_samples
        return (int(harmonic) % N) * self._k % N

    def phase(self, harmonic: int) -> np.ndarray:
        return TWO_PI * self.residues(harmonic) / self.n_samples

    def cos_sin(self, harmonic: int) -> tuple[np.ndarray, np.ndarray]:
        cos, sin = self._tables
        r = self.residues(harmonic)
        return cos[r], sin[r]


@dataclass(frozen=True, eq=False)
class TimePoints:
    """Arbitrary sample instants in seconds."""

    times: np.ndarray
    f0: float

    def __len__(self):
        return len(self.times)

    def phase(self, harmonic: int) -> np.ndarray:
        return TWO_PI * harmonic * self.f0 * np.asarray(self.times, dtype=float)


def reference_signals(grid, harmonic: int) -> tuple[np.ndarray, np.ndarray]:
    """Generator signal v = 0.5(1 + cos) and its quadrature q = 0.5 sin."""
    phase = grid.phase(abs(harmonic))
    return 0.5 * (1.0 + np.cos(phase)), 0.5 * np.sin(phase)


def _multiply_terminals(in_real, in_imag, v, q, negated: bool):
    # negative elements: swap input and output terminals
    if negated:
        in_real, in_imag = in_imag, in_real
    out_real = v * in_real - q * in_imag
    out_imag = v * in_imag + q * in_real
    if negated:
        return out_imag, out_real
    return out_real, out_imag


def memprocessor_step(in_real, in_imag, harmonic: int, grid):
    """One memprocessor: multiply the incoming complex signal by 0.5(1 + e^{i w t}).

    ``harmonic`` is the signed normalized frequency ``a_j``. Negative values
    are realized with the generator at ``|a_j|`` and the real/imaginary
    terminals swapped on both sides, which conjugates the factor.
    """
    in_real = np.asarray(in_real, dtype=float)
    in_imag = np.asarray(in_imag, dtype=float)
    if in_real.shape != in_imag.shape or in_real.shape != (len(grid),):
        raise ValueError(
            f"signal shapes {in_real.shape}/{in_imag.shape} do not match a grid of {len(grid)} points"
        )
    v, q = reference_signals(grid, harmonic)
    return _multiply_terminals(in_real, in_imag, v, q, harmonic < 0)


def run_cascade(assignment: FrequencyAssignment, grid, noise=None):
    """Push (1, 0) through every memprocessor; ``noise`` is an optional (n, N) complex array
    added to each memprocessor's complex input before its multiplication."""
    real = np.ones(len(grid))
    imag = np.zeros(len(grid))
    for j, entry in enumerate(assignment.entries):
        v, q = reference_signals(grid, entry.harmonic)
        if noise is not None:
            eps = noise[j]
            # terminal swap conjugates the physical input; pre-conjugate so the
            # effective complex input is factor + eps for either sign
            v = v + eps.real
            q = q - eps.imag if entry.negated else q + eps.imag
        real, imag = _multiply_terminals(real, imag, v, q, entry.negated)
    return real + 1j * imag


def collective_state_analytic(assignment: FrequencyAssignment, t):
    """g(t) = 2^-n prod_j (1 + exp(i w_j t)), evaluated factor by factor."""
    t = np.asarray(t, dtype=float)
    g = np.ones(t.shape, dtype=complex)
    for a in assignment.signed_harmonics:
        g = g * (0.5 * (1.0 + np.exp(1j * TWO_PI * a * assignment.f0 * t)))
    return g[()] if g.ndim == 0 else g


@dataclass(frozen=True, eq=False)
class CollectiveState:
    assignment: FrequencyAssignment
    grid: SampleGrid | None = None
    samples: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.assignment.n

    @property
    def is_sampled(self) -> bool:
        return self.samples is not None

    @property
    def sample_count(self) -> int | None:
        return None if self.grid is None else self.grid.n_samples

    @property
    def capacity(self) -> int:
        return self.assignment.capacity

    @property
    def f0(self) -> float:
        return self.assignment.f0

    @property
    def period(self) -> float:
        return self.assignment.period

    def at(self, t):
        return collective_state_analytic(self.assignment, t)


def analytic_state(assignment: FrequencyAssignment) -> CollectiveState:
    return CollectiveState(assignment)


def nyquist_count(band: int) -> int:
    """Smallest sample count that resolves normalized frequencies in [-band, band]."""
    return 2 * band + 1


def sample_collective_state(assignment: FrequencyAssignment, sample_count: int) -> CollectiveState:
    grid = SampleGrid(sample_count, assignment.f0)
    samples = run_cascade(assignment, grid)
    samples.setflags(write=False)
    return CollectiveState(assignment, grid, samples)


def _exact_energy_fraction(assignment: FrequencyAssignment) -> Fraction:
    # Parseval over the generating-function coefficients: sum(count^2) / 4^n
    instance = SubsetSumInstance(assignment.signed_harmonics)
    _, counts = generating_counts(instance)
    total = sum(int(c) ** 2 for c in counts if c)
    return Fraction(total, 4**assignment.n)


def signal_energy(state: CollectiveState) -> float:
    """Energy of g over one period, integral of |g(t)|^2 dt.

    For sampled states this is the rectangle rule ``(T/N) sum |g_k|^2``, which
    is exact once N covers the band. Analytic states use the exact coefficients.
    """
    T = state.period
    if state.is_sampled:
        return T / state.grid.n_samples * math.fsum(np.abs(state.samples) ** 2)
    return T * float(_exact_energy_fraction(state.assignment))


def write_waveform_csv(state: CollectiveState, fh):
    """Write ``t_seconds,re_g,im_g`` rows; numbers use 17 significant digits."""
    if not state.is_sampled:
        raise ValueError("waveform export needs a sampled state")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t_seconds", "re_g", "im_g"])
    for t, g in zip(state.grid.times, state.samples):
        writer.writerow([f"{t:.17g}", f"{g.real:.17g}", f"{g.imag:.17g}"])
