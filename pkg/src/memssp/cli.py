"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 domain error (a failed
hardware check, a grid too coarse for the band).

Every ``--out`` file gets a sibling ``<out>.manifest.json`` with the resolved
configuration and SHA-256 digests of what was written. Manifests carry no
timestamps, so identical invocations produce identical bytes.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path

from . import __version__
from .core import (
    MachineConfig,
    InstanceFormatError,
    SSPError,
    capacity,
    encode,
    load_instance,
    validate,
)
from .network import nyquist_count, sample_collective_state, write_waveform_csv
from .noise import NoiseKind, NoiseSpec, snr_measured, synthetic_instance
from .oracle import full_count_table
from .readout import MODES, format_table, read_pair
from .spectrum import (
    dft_spectrum,
    exact_spectrum,
    write_spectrum_csv,
    write_spectrum_json,
)

DEFAULT_SEED = 20150101

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_machine_flags(p):
    defaults = MachineConfig()
    p.add_argument("--f0", type=float, help="override the instance's fundamental frequency [Hz]")
    p.add_argument("--gen-resolution", type=float, default=defaults.gen_resolution)
    p.add_argument("--gen-bandwidth", type=float, default=defaults.gen_bandwidth)
    p.add_argument("--amp-max-freq", type=float, default=defaults.amp_max_freq)
    p.add_argument("--max-samples", type=int, default=defaults.max_samples)


def _add_output_flags(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", type=Path, help="write results to this file as well")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="memssp", description="Memprocessor subset-sum simulator")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check hardware frequency and sampling limits")
    p.add_argument("instance", type=Path)
    _add_machine_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("spectrum", help="spectrum of the collective state")
    p.add_argument("instance", type=Path)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--samples", type=int, help="sample count for --mode sampled (default 2A+1)")
    p.add_argument("--nonzero-only", action="store_true")
    _add_machine_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("solve", help="read-out unit queries for target sums")
    p.add_argument("instance", type=Path)
    p.add_argument("--target", type=int, action="append", dest="targets")
    p.add_argument("--mode", choices=MODES, default="exact")
    p.add_argument("--variance", type=float, default=0.0)
    p.add_argument("--noise-kind", choices=[k.value for k in NoiseKind], default="white_gaussian")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_machine_flags(p)
    _add_output_flags(p)

    p = sub.add_parser("noise-sweep", help="predicted vs measured SNR")
    p.add_argument("--n-list", type=_int_list, default=[2, 4, 6, 8])
    p.add_argument("--variance-list", type=_float_list, default=[1e-4])
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--noise-kind", choices=[k.value for k in NoiseKind], default="white_gaussian")
    p.add_argument("--instance", type=Path, help="take the first n elements of this instance")
    p.add_argument("--f0", type=float, default=100.0)
    p.add_argument("--out", type=Path, help="CSV, or a JSON report with per-harmonic data if *.json")

    p = sub.add_parser("waveform", help="export one period of the sampled collective state")
    p.add_argument("instance", type=Path)
    p.add_argument("--samples", type=int)
    p.add_argument("--out", type=Path, required=True)
    _add_machine_flags(p)
    return parser


def _machine(args, f0: float) -> MachineConfig:
    return MachineConfig(
        f0=args.f0 if args.f0 is not None else f0,
        gen_resolution=args.gen_resolution,
        gen_bandwidth=args.gen_bandwidth,
        amp_max_freq=args.amp_max_freq,
        max_samples=args.max_samples,
    )


def _config_dict(config: MachineConfig) -> dict:
    return {
        "f0_hz": config.f0,
        "gen_resolution_hz": config.gen_resolution,
        "gen_bandwidth_hz": config.gen_bandwidth,
        "amp_max_freq_hz": config.amp_max_freq,
        "max_samples": config.max_samples,
    }


def _write_output(path: Path, text: str, command: str, resolved: dict, seed=None):
    data = text.encode()
    path.write_bytes(data)
    manifest = {
        "command": command,
        "config": resolved,
        "seed": seed,
        "tool_version": __version__,
        "outputs": {path.name: hashlib.sha256(data).hexdigest()},
    }
    Path(f"{path}.manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_validate(args) -> int:
    inst = load_instance(args.instance)
    config = _machine(args, inst.f0_hz)
    report = validate(inst.instance, config)
    if args.format == "json":
        text = _json(report.to_dict())
    else:
        lines = [f"f_max = {report.f_max:.3f} Hz"]
        for c in report.checks:
            lines.append(f"{c.name:<11} {'PASS' if c.passed else 'FAIL'}  margin {c.margin:.6g}  ({c.description})")
        lines.append("OK" if report.ok else "FAILED")
        text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        resolved = {"instance": list(inst.instance.elements), **_config_dict(config)}
        _write_output(args.out, text, "validate", resolved)
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_spectrum(args) -> int:
    inst = load_instance(args.instance)
    config = _machine(args, inst.f0_hz)
    instance = inst.instance
    if args.mode == "exact":
        spec = exact_spectrum(instance)
        n_samples = None
    else:
        n_samples = args.samples or nyquist_count(capacity(instance))
        spec = dft_spectrum(sample_collective_state(encode(instance, config), n_samples))

    nonzero = [f for f in spec.frequencies if spec.count(f)]
    summary = {
        "n": instance.n,
        "capacity": capacity(instance),
        "mode": args.mode,
        "samples": n_samples,
        "harmonics_nonzero": len(nonzero),
        "total_count": sum(spec.count(f) for f in nonzero),
        "max_imag": spec.max_imag,
    }
    if args.format == "json":
        sys.stdout.write(_json(summary))
    else:
        sys.stdout.write(
            f"n={summary['n']} A={summary['capacity']} mode={args.mode} "
            f"nonzero harmonics={summary['harmonics_nonzero']} total subset mass={summary['total_count']}\n"
        )
    if args.out:
        buf = io.StringIO()
        if args.out.suffix == ".json":
            write_spectrum_json(spec, buf, config.f0, args.nonzero_only)
        else:
            write_spectrum_csv(spec, buf, args.nonzero_only)
        resolved = {
            "instance": list(instance.elements),
            "mode": args.mode,
            "samples": n_samples,
            "nonzero_only": args.nonzero_only,
            **_config_dict(config),
        }
        _write_output(args.out, buf.getvalue(), "spectrum", resolved)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    config = _machine(args, inst.f0_hz)
    instance = inst.instance
    targets = args.targets if args.targets else list(inst.targets)
    if not targets:
        raise UsageError("no targets: pass --target or list them in the instance file")
    noise = None
    if args.mode == "noisy":
        noise = NoiseSpec(NoiseKind(args.noise_kind), args.variance, seed=args.seed)
    results = [read_pair(instance, config, s, args.mode, noise=noise) for s in targets]
    table = full_count_table(instance)
    oracle = {s: (table[s], table[-s]) for s in targets}

    if args.format == "json":
        payload = [
            {**r.to_dict(), "oracle_count_s": oracle[r.target_s][0], "oracle_count_minus_s": oracle[r.target_s][1]}
            for r in results
        ]
        text = _json(payload)
    else:
        text = format_table(results, oracle)
    sys.stdout.write(text)
    if args.out:
        if args.out.suffix == ".json" and args.format != "json":
            text = _json([r.to_dict() for r in results])
        resolved = {
            "instance": list(instance.elements),
            "targets": targets,
            "mode": args.mode,
            "variance": args.variance,
            "noise_kind": args.noise_kind,
            **_config_dict(config),
        }
        _write_output(args.out, text, "solve", resolved, seed=args.seed)
    return EXIT_OK


def cmd_noise_sweep(args) -> int:
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    if not args.n_list or not args.variance_list:
        raise UsageError("--n-list and --variance-list must be non-empty")
    if any(n < 1 for n in args.n_list) or any(v < 0 for v in args.variance_list):
        raise UsageError("sizes must be >= 1 and variances >= 0")
    base = load_instance(args.instance).instance if args.instance else None
    config = MachineConfig(f0=args.f0)
    reports = []
    for n in args.n_list:
        if base is None:
            instance = synthetic_instance(n)
        else:
            if n > base.n:
                raise UsageError(f"instance has only {base.n} elements, cannot take {n}")
            instance = type(base)(base.elements[:n])
        for variance in args.variance_list:
            spec = NoiseSpec(NoiseKind(args.noise_kind), variance, seed=args.seed)
            reports.append(snr_measured(instance, config, spec, args.runs))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "variance", "snr_predicted", "snr_measured", "runs"])
    for r in reports:
        writer.writerow([r.n, f"{r.variance:.6g}", f"{r.predicted_snr:.6f}", f"{r.measured_total_snr:.6f}", r.runs])
    text = buf.getvalue()
    sys.stdout.write(text)
    if args.out:
        out_text = _json([r.to_dict() for r in reports]) if args.out.suffix == ".json" else text
        resolved = {
            "n_list": args.n_list,
            "variance_list": args.variance_list,
            "runs": args.runs,
            "noise_kind": args.noise_kind,
            "instance": list(base.elements) if base else None,
            "f0_hz": args.f0,
        }
        _write_output(args.out, out_text, "noise-sweep", resolved, seed=args.seed)
    return EXIT_OK


def cmd_waveform(args) -> int:
    inst = load_instance(args.instance)
    config = _machine(args, inst.f0_hz)
    n_samples = args.samples or nyquist_count(capacity(inst.instance))
    state = sample_collective_state(encode(inst.instance, config), n_samples)
    buf = io.StringIO()
    write_waveform_csv(state, buf)
    resolved = {"instance": list(inst.instance.elements), "samples": n_samples, **_config_dict(config)}
    _write_output(args.out, buf.getvalue(), "waveform", resolved)
    sys.stdout.write(f"wrote {n_samples} samples to {args.out}\n")
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "solve": cmd_solve,
    "noise-sweep": cmd_noise_sweep,
    "waveform": cmd_waveform,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InstanceFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SSPError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())
