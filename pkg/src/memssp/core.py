"""Subset-sum instances, machine configuration and hardware feasibility checks.

Frequencies are kept as normalized integers (the elements themselves); the
fundamental frequency ``f0`` is only applied when physical units are needed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

INT64_MAX = 2**63 - 1


class SSPError(Exception):
    """Base class for domain errors raised by this package."""


class AliasingError(SSPError):
    """Raised when a sample grid is too coarse for the band it must resolve."""


class CountOverflowError(SSPError):
    """Raised when exact subset counts would not fit a 64-bit counter."""


class InstanceSizeError(SSPError):
    """Raised when an exhaustive routine is asked to enumerate too many subsets."""


class HarmonicGridError(SSPError):
    """Raised when a frequency is not an integer multiple of ``f0``."""


class InstanceFormatError(SSPError):
    """Raised for malformed instance files."""


@dataclass(frozen=True)
class SubsetSumInstance:
    elements: tuple[int, ...]

    def __post_init__(self):
        elements = tuple(self.elements)
        for a in elements:
            if isinstance(a, bool) or not isinstance(a, int):
                raise TypeError(f"elements must be integers, got {a!r}")
            if a == 0:
                raise ValueError("zero elements are not allowed")
        if not elements:
            raise ValueError("an instance needs at least one element")
        pos = sum(a for a in elements if a > 0)
        neg = -sum(a for a in elements if a < 0)
        if max(pos, neg) > INT64_MAX:
            raise OverflowError("capacity does not fit in a 64-bit integer")
        object.__setattr__(self, "elements", elements)

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def precision_bits(self) -> int:
        return max(abs(a).bit_length() for a in self.elements)

    @cached_property
    def positive_sum(self) -> int:
        return sum(a for a in self.elements if a > 0)

    @cached_property
    def negative_sum(self) -> int:
        """Magnitude of the sum of the negative elements."""
        return -sum(a for a in self.elements if a < 0)

    @property
    def capacity(self) -> int:
        return capacity(self)

    def negated(self) -> "SubsetSumInstance":
        return SubsetSumInstance(tuple(-a for a in self.elements))


def capacity(instance: SubsetSumInstance) -> int:
    """Largest normalized frequency magnitude the collective state can carry."""
    return max(instance.positive_sum, instance.negative_sum)


@dataclass(frozen=True)
class MachineConfig:
    """Fundamental frequency and the instrument limits it is checked against.

    Defaults are the bench instruments: a generator with 1 uHz resolution
    and 20 MHz bandwidth, 10 MHz multipliers and 1e5 oscilloscope samples.
    """

    f0: float = 100.0
    gen_resolution: float = 1e-6
    gen_bandwidth: float = 20e6
    amp_max_freq: float = 10e6
    max_samples: int = 100_000

    def __post_init__(self):
        for name in ("f0", "gen_resolution", "gen_bandwidth", "amp_max_freq", "max_samples"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.gen_resolution > self.gen_bandwidth:
            raise ValueError("gen_resolution must not exceed gen_bandwidth")

    @property
    def period(self) -> float:
        return 1.0 / self.f0


@dataclass(frozen=True)
class FrequencyEntry:
    harmonic: int  # |a_j|
    negated: bool
    f0: float

    @property
    def magnitude_frequency(self) -> float:
        return self.harmonic * self.f0

    @property
    def signed_harmonic(self) -> int:
        return -self.harmonic if self.negated else self.harmonic


@dataclass(frozen=True)
class FrequencyAssignment:
    entries: tuple[FrequencyEntry, ...]
    f0: float

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def signed_harmonics(self) -> tuple[int, ...]:
        return tuple(e.signed_harmonic for e in self.entries)

    @cached_property
    def capacity(self) -> int:
        pos = sum(e.harmonic for e in self.entries if not e.negated)
        neg = sum(e.harmonic for e in self.entries if e.negated)
        return max(pos, neg)

    @property
    def period(self) -> float:
        return 1.0 / self.f0

    def as_pairs(self) -> list[tuple[float, bool]]:
        return [(e.magnitude_frequency, e.negated) for e in self.entries]


def encode(instance: SubsetSumInstance, config: MachineConfig) -> FrequencyAssignment:
    entries = tuple(FrequencyEntry(abs(a), a < 0, config.f0) for a in instance.elements)
    return FrequencyAssignment(entries, config.f0)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    margin: float  # positive or zero when the check passes
    description: str


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...]
    f_max: float

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "f_max_hz": self.f_max,
            "checks": [
                {"name": c.name, "passed": c.passed, "margin": c.margin, "description": c.description}
                for c in self.checks
            ],
        }


def validate(instance: SubsetSumInstance, config: MachineConfig) -> ValidationReport:
    """Check the instance against the generator, amplifier and sampling limits.

    The report is advisory: nothing downstream refuses to simulate a
    configuration that fails here.
    """
    f0 = config.f0
    A = capacity(instance)
    f_max = A * f0
    top = f0 * max(abs(a) for a in instance.elements)
    sampling_limit = (f0 / 2) * (config.max_samples - 1)
    checks = (
        Check("resolution", config.gen_resolution <= f0, f0 - config.gen_resolution,
              "generator resolution <= f0"),
        Check("bandwidth", config.gen_bandwidth >= top, config.gen_bandwidth - top,
              "generator bandwidth >= f0 * max|a_j|"),
        Check("amplifier", config.amp_max_freq > f_max, config.amp_max_freq - f_max,
              "amplifier max frequency > A * f0"),
        Check("sampling", f_max <= sampling_limit, sampling_limit - f_max,
              "A * f0 <= (f0 / 2) * (max_samples - 1)"),
    )
    return ValidationReport(checks, f_max)


_INSTANCE_KEYS = {"elements", "f0_hz", "targets"}


@dataclass(frozen=True)
class InstanceFile:
    instance: SubsetSumInstance
    f0_hz: float
    targets: tuple[int, ...] = field(default=())


def parse_instance(data) -> InstanceFile:
    """Strictly parse the decoded JSON of an instance file."""
    if not isinstance(data, dict):
        raise InstanceFormatError("instance file must hold a JSON object")
    unknown = set(data) - _INSTANCE_KEYS
    if unknown:
        raise InstanceFormatError(f"unknown keys: {sorted(unknown)}")
    for key in ("elements", "f0_hz"):
        if key not in data:
            raise InstanceFormatError(f"missing key: {key!r}")
    elements = data["elements"]
    if not isinstance(elements, list) or not all(
        isinstance(a, int) and not isinstance(a, bool) for a in elements
    ):
        raise InstanceFormatError("'elements' must be a list of integers")
    f0 = data["f0_hz"]
    if isinstance(f0, bool) or not isinstance(f0, (int, float)) or not f0 > 0:
        raise InstanceFormatError("'f0_hz' must be a positive number")
    targets = data.get("targets", [])
    if not isinstance(targets, list) or not all(
        isinstance(s, int) and not isinstance(s, bool) for s in targets
    ):
        raise InstanceFormatError("'targets' must be a list of integers")
    try:
        instance = SubsetSumInstance(tuple(elements))
    except (ValueError, TypeError, OverflowError) as exc:
        raise InstanceFormatError(str(exc)) from exc
    return InstanceFile(instance, float(f0), tuple(targets))


def load_instance(path) -> InstanceFile:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid JSON: {exc}") from exc
    return parse_instance(data)
