"""Exit criteria for the simulator, one test per criterion.

Each test records a PASS/FAIL line, printed in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from memssp.core import MachineConfig, SubsetSumInstance, capacity, encode, validate
from memssp.network import collective_state_analytic, sample_collective_state, signal_energy
from memssp.noise import (
    NoiseSpec,
    channel_capacity,
    draw_noise,
    lownoise_decomposition,
    noisy_cascade,
    snr_measured,
    snr_predicted,
    synthetic_instance,
)
from memssp.oracle import bruteforce_count_table, count_subsets_bruteforce, full_count_table
from memssp.readout import read_pair
from memssp.spectrum import dft_spectrum, exact_spectrum

from conftest import ACCEPTANCE_LINES, TABLE1, TABLE1_COUNTS, TABLE1_TARGETS, enumerate_sums

BENCH = MachineConfig(f0=100.0, gen_resolution=1e-6, gen_bandwidth=20e6, amp_max_freq=10e6, max_samples=100_000)

# measured V_s and V_-s from the bench table, keyed by |s|; V_-s only where the
# criterion lists it
BENCH_V = {
    0: (1.02, None),
    74: (1.94, None),
    130: (0.94, -0.97),
    146: (-0.06, 1.96),
    248: (0.95, None),
    485: (-0.07, None),
    486: (-0.14, 0.99),
}


def record(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_table1_readout():
    inst = SubsetSumInstance(TABLE1)
    start = time.perf_counter()
    failures, worst = [], 0.0
    for mode in ("exact", "sampled"):
        for s in TABLE1_TARGETS:
            r = read_pair(inst, BENCH, s, mode)
            worst = max(worst, r.residual)
            if (r.count_s, r.count_minus_s) != TABLE1_COUNTS[s] or r.residual >= 1e-9:
                failures.append((mode, s, r.count_s, r.count_minus_s, r.residual))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 1.0
    record("1a Table-1 counts (noiseless)", ok, f"failures={failures} max residual={worst:.2e} runtime={elapsed:.3f}s")


def test_criterion_1_bench_voltages():
    inst = SubsetSumInstance(TABLE1)
    off = []
    for s, (v_s, v_ms) in BENCH_V.items():
        r = read_pair(inst, BENCH, s, "exact")
        if abs(v_s - r.count_s) > 0.1:
            off.append(f"V_s({s})={v_s} vs {r.count_s}")
        if v_ms is not None and abs(v_ms - r.count_minus_s) > 0.1:
            off.append(f"V_-s({s})={v_ms} vs {r.count_minus_s}")
    record("1b bench V_s within 0.1 of exact counts", not off, "; ".join(off) or "all within 0.1")


@pytest.mark.parametrize("elements", [TABLE1[:4], TABLE1[:5], TABLE1], ids=["n4", "n5", "n6"])
def test_criterion_2_fig3_spectra(elements):
    start = time.perf_counter()
    inst = SubsetSumInstance(elements)
    A = capacity(inst)
    N = 2 * A + 1
    d = dft_spectrum(sample_collective_state(encode(inst, BENCH), N))
    e = exact_spectrum(inst)
    err = max(abs(d.amplitude(f) - e.amplitude(f)) for f in range(-A, A + 1))
    brute = bruteforce_count_table(inst)
    reference = enumerate_sums(elements)
    counts_ok = all(
        e.amplitude(f) * 2**inst.n == e.count(f) == brute.get(f, 0) + (f == 0) == reference.get(f, 0)
        for f in range(-A, A + 1)
    )
    elapsed = time.perf_counter() - start
    ok = err < 1e-9 and counts_ok and elapsed < 1.0
    record(f"2 Fig-3 spectrum n={inst.n}", ok, f"N={N} max |dft-exact|={err:.2e} counts_ok={counts_ok} runtime={elapsed:.3f}s")


def test_criterion_3_oracle_equivalence():
    rng = np.random.default_rng(2015)
    start = time.perf_counter()
    mismatches = 0
    checked = 0
    for _ in range(200):
        n = int(rng.integers(1, 21))
        mags = rng.integers(1, 501, n)
        signs = rng.choice([-1, 1], n)
        inst = SubsetSumInstance(tuple(int(m * s) for m, s in zip(mags, signs)))
        A = capacity(inst)
        table = full_count_table(inst)
        brute = bruteforce_count_table(inst)
        spec = exact_spectrum(inst)
        state = sample_collective_state(encode(inst, BENCH), 4 * A + 1)
        lo, hi = table.sum_range
        for s in range(lo, hi + 1):
            dp = table[s]
            bf = brute.get(s, 0)
            ex = spec.count(s) - (s == 0)
            r = read_pair(inst, BENCH, s, "sampled", state=state)
            checked += 1
            if not (dp == bf == ex == r.count_s and r.residual < 1e-9):
                mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60.0
    record("3 oracle equivalence (200 instances)", ok, f"sums checked={checked} mismatches={mismatches} runtime={elapsed:.1f}s")


def test_criterion_4_invariants():
    rng = np.random.default_rng(4)
    problems = []
    for trial in range(60):
        n = int(rng.integers(1, 11))
        xs = tuple(int(x) for x in rng.integers(1, 80, n) * rng.choice([-1, 1], n))
        if trial % 5 == 0:
            xs = tuple(2 * x for x in xs)
        inst = SubsetSumInstance(xs)
        a = encode(inst, MachineConfig(f0=50.0))
        A = capacity(inst)
        N = 2 * A + 1
        g = sample_collective_state(a, N).samples
        t = rng.uniform(0, 0.02, 16)
        if collective_state_analytic(a, 0.0) != 1 or g[0] != 1:
            problems.append((xs, "g(0)"))
        if np.max(np.abs(g)) > 1 + 1e-12:
            problems.append((xs, "|g|<=1"))
        if np.max(np.abs(collective_state_analytic(a, t + 0.02) - collective_state_analytic(a, t))) > 1e-12:
            problems.append((xs, "periodicity"))
        perm = tuple(rng.permutation(xs).tolist())
        if np.max(np.abs(sample_collective_state(encode(SubsetSumInstance(perm), MachineConfig(f0=50.0)), N).samples - g)) > 1e-12:
            problems.append((xs, "permutation"))
        spec = exact_spectrum(inst)
        parseval = signal_energy(sample_collective_state(a, N)) - 0.02 * math.fsum(spec.amplitudes() ** 2)
        if abs(parseval) > 1e-12:
            problems.append((xs, "parseval"))
        if all(x % 2 == 0 for x in xs) and any(spec.count(f) for f in spec.frequencies if f % 2):
            problems.append((xs, "parity"))
        if spec.total_count() != 2**n:
            problems.append((xs, "sum rule"))
    record("4 invariant suite", not problems, f"60 instances, violations={problems[:5]}")


def test_criterion_5_noise_scaling():
    start = time.perf_counter()
    cfg = MachineConfig(f0=100.0)
    details, ok = [], True
    for n in (2, 4, 6, 8):
        inst = synthetic_instance(n)
        base = snr_measured(inst, cfg, NoiseSpec(variance=1e-4, seed=n), runs=100)
        quad = snr_measured(inst, cfg, NoiseSpec(variance=4e-4, seed=n), runs=100)
        ratio_pred = base.measured_total_snr / snr_predicted(n, 1e-4)
        ratio_4x = base.measured_total_snr / quad.measured_total_snr
        ok &= 1 / 3 <= ratio_pred <= 3 and abs(ratio_4x - 4) <= 1.0
        details.append(f"n={n}: measured/predicted={ratio_pred:.3f} 4x-ratio={ratio_4x:.3f}")

    inst = SubsetSumInstance(TABLE1)
    variances = np.logspace(-9, -6, 7)
    residuals = []
    for v in variances:
        eps = draw_noise(NoiseSpec(variance=v, seed=5), inst.n, 973)
        full = noisy_cascade(inst, cfg, NoiseSpec(), 973, noise=eps).samples
        g_s, g_n = lownoise_decomposition(inst, eps, cfg)
        residuals.append(np.linalg.norm(full - (g_s + g_n)))
    slope = float(np.polyfit(np.log10(variances), np.log10(residuals), 1)[0])
    ok &= abs(slope - 1.0) <= 0.2
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120.0
    record("5 noise scaling", ok, "; ".join(details) + f"; linearization slope={slope:.3f}; runtime={elapsed:.1f}s")


def test_criterion_6_capacity():
    res = channel_capacity(1.0, 1000, lambda f: 1.0)
    target = 1.0 / math.log(2)
    rel = abs(res.capacity - target) / target
    record("6 channel capacity", rel < 0.01, f"numeric={res.capacity:.6f} limit={target:.6f} rel err={rel:.2e}")


def test_criterion_7_validation():
    inst = SubsetSumInstance(TABLE1)
    report = validate(inst, BENCH)
    detail = ", ".join(f"{c.name}={'ok' if c.passed else 'FAIL'}({c.margin:.4g})" for c in report.checks)
    record("7 bench hardware checks", report.ok and capacity(inst) == 486, detail)
