"""Read-out unit: frequency shift by w_s, DC extraction, sum/difference recovery.

    v_up(t)   = Re[g(t)] cos(w_s t)
    v_down(t) = Im[g(t)] sin(w_s t)

so ``v_up + v_down = Re[g e^{-i w_s t}]`` and ``v_up - v_down = Re[g e^{+i w_s t}]``;
their DC levels times ``2**n`` are the subset counts for ``s`` and ``-s``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .core import (
    AliasingError,
    HarmonicGridError,
    MachineConfig,
    SubsetSumInstance,
    capacity,
    encode,
)
from .network import CollectiveState, analytic_state, nyquist_count, sample_collective_state
from .noise import NoiseSpec, noisy_cascade
from .oracle import generating_counts

MODES = ("exact", "sampled", "noisy")


@dataclass(frozen=True, eq=False)
class ShiftedSignal:
    """One multiplier output. ``samples`` is None for analytic states."""

    state: CollectiveState
    s: int
    terminal: str  # "up" or "down"
    samples: np.ndarray | None = None

    @property
    def band(self) -> int:
        return self.state.capacity + abs(self.s)

    def at(self, t):
        g = self.state.at(t)
        phase = 2 * math.pi * self.s * self.state.f0 * np.asarray(t, dtype=float)
        if self.terminal == "up":
            return g.real * np.cos(phase)
        return g.imag * np.sin(phase)

    def exact_mean(self) -> Fraction:
        """Integral over one period divided by T, from the exact coefficients."""
        instance = SubsetSumInstance(self.state.assignment.signed_harmonics)
        offset, counts = generating_counts(instance)

        def coeff(f):
            i = f + offset
            return int(counts[i]) if 0 <= i < len(counts) else 0

        scale = 2**self.state.n
        if self.s == 0:
            return Fraction(coeff(0), scale) if self.terminal == "up" else Fraction(0)
        plus, minus = coeff(self.s), coeff(-self.s)
        if self.terminal == "up":
            return Fraction(plus + minus, 2 * scale)
        return Fraction(plus - minus, 2 * scale)


def shift_harmonic(shift_freq: float, f0: float) -> int:
    s = shift_freq / (2 * math.pi * f0)
    r = round(s)
    if abs(s - r) > 1e-9 * max(1.0, abs(s)):
        raise HarmonicGridError(f"shift frequency {shift_freq} rad/s is not a multiple of 2*pi*f0")
    return int(r)


def frequency_shift(state: CollectiveState, shift_freq: float) -> tuple[ShiftedSignal, ShiftedSignal]:
    """Drive the two multipliers at ``shift_freq`` (rad/s)."""
    s = shift_harmonic(shift_freq, state.f0)
    if not state.is_sampled:
        return ShiftedSignal(state, s, "up"), ShiftedSignal(state, s, "down")
    cos, sin = state.grid.cos_sin(s)
    up = state.samples.real * cos
    down = state.samples.imag * sin
    return ShiftedSignal(state, s, "up", up), ShiftedSignal(state, s, "down", down)


def dc_average(signal, band: int | None = None) -> float:
    """Mean over one period.

    Plain arrays are taken as uniform samples of one period; ``band`` (the
    largest normalized frequency present) enables the aliasing check. Samples
    are added with numpy's pairwise summation.
    """
    if isinstance(signal, ShiftedSignal):
        if signal.samples is None:
            return float(signal.exact_mean())
        band = signal.band if band is None else band
        signal = signal.samples
    x = np.asarray(signal, dtype=float)
    if band is not None and len(x) < nyquist_count(band):
        raise AliasingError(f"{len(x)} samples cannot average a signal with band {band}")
    return float(np.sum(x)) / len(x)


@dataclass(frozen=True)
class ReadoutResult:
    target_s: int
    shift_freq_hz: float
    v_dc_up: float
    v_dc_down: float
    v_s: float
    v_minus_s: float
    count_s: int
    count_minus_s: int
    exists_s: bool
    exists_minus_s: bool
    residual: float  # largest |v - round(v)| before rounding
    mode: str

    def to_dict(self) -> dict:
        return asdict(self)


def _to_count(v: float) -> int:
    return max(0, int(round(v)))


def read_pair(
    instance: SubsetSumInstance,
    config: MachineConfig,
    s: int,
    mode: str = "exact",
    *,
    noise: NoiseSpec | None = None,
    state: CollectiveState | None = None,
    sample_count: int | None = None,
) -> ReadoutResult:
    """Answer the subset-sum query for ``s`` and ``-s`` with one read-out.

    ``state`` lets several queries share one sampled collective state; it must
    be sampled finely enough for the shifted band ``A + |s|``. At ``s = 0`` the
    empty set is removed from the DC reading and the count is reported for both
    signs.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    s = int(s)
    n = instance.n
    A = capacity(instance)
    shift = 2 * math.pi * s * config.f0
    scale = 2**n

    if mode == "exact":
        if abs(s) > A:
            up = down = Fraction(0)
        else:
            v_up, v_down = frequency_shift(analytic_state(encode(instance, config)), shift)
            up, down = v_up.exact_mean(), v_down.exact_mean()
        if s == 0:
            v_s = v_minus_s = scale * up - 1
        else:
            v_s, v_minus_s = scale * (up + down), scale * (up - down)
        residual = float(max(abs(v_s - round(v_s)), abs(v_minus_s - round(v_minus_s))))
        up, down, v_s, v_minus_s = float(up), float(down), float(v_s), float(v_minus_s)
    else:
        N = sample_count or nyquist_count(A + abs(s))
        if state is None:
            if mode == "sampled":
                state = sample_collective_state(encode(instance, config), N)
            else:
                state = noisy_cascade(instance, config, noise or NoiseSpec(), N)
        v_up, v_down = frequency_shift(state, shift)
        up, down = dc_average(v_up), dc_average(v_down)
        if s == 0:
            v_s = v_minus_s = math.ldexp(up, n) - 1
        else:
            v_s = math.ldexp(up + down, n)
            v_minus_s = math.ldexp(up - down, n)
        residual = max(abs(v_s - round(v_s)), abs(v_minus_s - round(v_minus_s)))

    c_s, c_ms = _to_count(v_s), _to_count(v_minus_s)
    return ReadoutResult(
        target_s=s,
        shift_freq_hz=s * config.f0,
        v_dc_up=up,
        v_dc_down=down,
        v_s=v_s,
        v_minus_s=v_minus_s,
        count_s=c_s,
        count_minus_s=c_ms,
        exists_s=c_s >= 1,
        exists_minus_s=c_ms >= 1,
        residual=residual,
        mode=mode,
    )


TABLE_HEADER = ("s", "f_s [kHz]", "V_DC_up [mV]", "V_DC_down [mV]", "V_s [V]", "V_-s [V]", "#sum s", "#sum -s")


def format_table(results, oracle_counts=None) -> str:
    """Aligned text table in the layout of the bench measurements.

    Voltages: millivolts with 3 decimals for the DC readings, volts with 4
    decimals for V_s and V_-s; frequencies in kHz with 3 decimals.
    ``oracle_counts`` optionally maps s to (count_s, count_-s) and adds two columns.
    """
    header = list(TABLE_HEADER)
    if oracle_counts is not None:
        header += ["oracle s", "oracle -s"]
    rows = []
    for r in results:
        row = [
            str(r.target_s),
            f"{r.shift_freq_hz / 1e3:.3f}",
            f"{r.v_dc_up * 1e3:.3f}",
            f"{r.v_dc_down * 1e3:.3f}",
            f"{r.v_s:.4f}",
            f"{r.v_minus_s:.4f}",
            str(r.count_s),
            str(r.count_minus_s),
        ]
        if oracle_counts is not None:
            row += [str(c) for c in oracle_counts[r.target_s]]
        rows.append(row)
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows]
    return "\n".join(lines) + "\n"
