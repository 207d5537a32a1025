"""Spectrum of the collective state, exact and by DFT.

Normalization of the DFT: for N uniform samples over one period,

    amplitude(f) = (1/N) * sum_k g_k * exp(-2 pi i f k / N),

so a harmonic ``c * exp(i 2 pi f f0 t)`` reports amplitude ``c``. Bin ``k``
above ``N/2`` is read as the negative frequency ``k - N``.

The DC amplitude always includes the empty-set term ``2**-n``.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .core import AliasingError, SubsetSumInstance
from .network import CollectiveState
from .oracle import generating_counts


@dataclass(frozen=True, eq=False)
class Spectrum:
    n: int
    low: int  # lowest normalized frequency stored
    counts: np.ndarray | None = None  # exact: 2**n * amplitude, uint64
    values: np.ndarray | None = None  # estimated: real amplitudes
    max_imag: float = 0.0
    includes_empty_set_at_dc: bool = True

    @property
    def exact(self) -> bool:
        return self.counts is not None

    @property
    def high(self) -> int:
        size = len(self.counts) if self.exact else len(self.values)
        return self.low + size - 1

    @property
    def frequencies(self) -> range:
        return range(self.low, self.high + 1)

    def count(self, f: int) -> int:
        """Subsets (empty set included at f=0) carried by harmonic ``f``.

        For DFT estimates this is the nearest integer to ``2**n * amplitude``.
        """
        if not self.low <= f <= self.high:
            return 0
        if self.exact:
            return int(self.counts[f - self.low])
        return int(round(math.ldexp(float(self.values[f - self.low]), self.n)))

    def amplitude(self, f: int) -> float:
        if not self.low <= f <= self.high:
            return 0.0
        if self.exact:
            return math.ldexp(int(self.counts[f - self.low]), -self.n)
        return float(self.values[f - self.low])

    def amplitudes(self) -> np.ndarray:
        if self.exact:
            return np.ldexp(self.counts.astype(float), -self.n)
        return np.asarray(self.values, dtype=float)

    def total_count(self) -> int:
        if self.exact:
            return sum(int(c) for c in self.counts)
        return sum(self.count(f) for f in self.frequencies)


def exact_spectrum(instance: SubsetSumInstance) -> Spectrum:
    offset, counts = generating_counts(instance)
    counts.setflags(write=False)
    return Spectrum(instance.n, -offset, counts=counts)


def dft_spectrum(state: CollectiveState) -> Spectrum:
    """Per-harmonic amplitudes on [-A, A] from one period of samples."""
    if not state.is_sampled:
        raise ValueError("dft_spectrum needs a sampled collective state")
    A = state.capacity
    N = state.grid.n_samples
    if N < 2 * A + 1:
        raise AliasingError(f"N={N} samples cannot resolve the band [-{A}, {A}] (need {2 * A + 1})")
    bins = np.fft.fft(state.samples) / N
    f = np.arange(-A, A + 1)
    picked = bins[f % N]
    return Spectrum(
        state.n,
        -A,
        values=picked.real.copy(),
        max_imag=float(np.max(np.abs(picked.imag))),
    )


def harmonic_amplitude(spectrum: Spectrum, f: int) -> float:
    return spectrum.amplitude(f)


def spectrum_rows(spectrum: Spectrum, nonzero_only: bool = False):
    amps = spectrum.amplitudes()
    for i, f in enumerate(spectrum.frequencies):
        c = spectrum.count(f)
        if nonzero_only and c == 0:
            continue
        yield f, float(amps[i]), c


def write_spectrum_csv(spectrum: Spectrum, fh, nonzero_only: bool = False):
    """Columns ``f_normalized,amplitude,count``; amplitudes use 17 significant digits."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["f_normalized", "amplitude", "count"])
    for f, amp, c in spectrum_rows(spectrum, nonzero_only):
        writer.writerow([f, f"{amp:.17g}", c])


def spectrum_to_dict(spectrum: Spectrum, f0_hz: float, nonzero_only: bool = False) -> dict:
    return {
        "n": spectrum.n,
        "f0_hz": f0_hz,
        "includes_empty_set_at_dc": spectrum.includes_empty_set_at_dc,
        "exact": spectrum.exact,
        "max_imag": spectrum.max_imag,
        "harmonics": [
            {"f_normalized": f, "amplitude": amp, "count": c}
            for f, amp, c in spectrum_rows(spectrum, nonzero_only)
        ],
    }


def write_spectrum_json(spectrum: Spectrum, fh, f0_hz: float, nonzero_only: bool = False):
    json.dump(spectrum_to_dict(spectrum, f0_hz, nonzero_only), fh, indent=2, sort_keys=True)
    fh.write("\n")
