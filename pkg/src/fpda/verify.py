"""Seeded oracle-comparison suite behind ``fpda verify``.

Each case draws from its own child of one :class:`numpy.random.SeedSequence`,
so results do not depend on execution order or thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracles
from .da import da_eval_batch, da_plan
from .dct import DctConfig, dct16
from .fft import FftConfig, fft16
from .filters import DwtConfig, FirConfig, IirConfig, daubechies8, dwt_pyramid, fir_filter, iir_filter
from .fixed import Q15, CFx, Fx, quantize
from .modules import CmKind
from .reconfig import Function, function_inventory, pool_requirement

# same bound for FFT and DCT: 16 LSBs of the Q1.15 grid
TRANSFORM_TOL_LSB = 16

EXPECTED_COUNTS = {
    Function.FIR: {"Adder": 31, "Lut16": 32, "Register": 16, "Mux2": 1},
    Function.IIR: {"Adder": 62, "Lut16": 62, "Register": 31, "Mux2": 1},
    Function.DWT: {"Counter1Bit": 1, "Adder": 8, "Lut16": 8, "Register": 9},
    Function.FFT: {"Adder": 16, "Subtractor": 24, "Multiplier": 24, "Register": 48, "Mux4": 16, "Mux2": 14},
    Function.DCT: {"Adder": 44, "Lut16": 24, "Subtractor": 36, "Register": 32, "Mux2": 8},
}
COMBINED = {"Counter1Bit": 1, "Adder": 62, "Lut16": 94, "Subtractor": 36, "Multiplier": 24}


@dataclass(frozen=True)
class CaseResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{self.name:<18} {'PASS' if self.passed else 'FAIL'}  {self.detail}"


def _fx(raws):
    return [Fx(int(r), Q15) for r in raws]


def random_stable_feedback(rng, n: int, budget: float = 0.9) -> list[float]:
    """Feedback taps with ``sum |b| <= budget < 1``: BIBO-stable by construction."""
    b = rng.uniform(-1, 1, n)
    return list(b * budget / max(np.abs(b).sum(), 1e-12))


def case_da(rng) -> CaseResult:
    bad = 0
    for _ in range(8):
        plan = da_plan(_fx(rng.integers(-2**15, 2**15, 16)))
        w = rng.integers(-2**15, 2**15, (2000, 16))
        exact = w @ np.array([c.raw for c in plan.coeffs])
        bad += int((da_eval_batch(plan, w) != exact).sum())
    return CaseResult("da_exact", bad == 0, f"mismatches={bad} cases=16000")


def case_fir(rng) -> CaseResult:
    taps = _fx(rng.integers(-2**15, 2**15, 16))
    xs = _fx(rng.integers(-2**15, 2**15, 1000))
    got = [y.raw for y in fir_filter(FirConfig(taps), xs)]
    want = oracles.oracle_fir(taps, xs).raws()
    bad = sum(g != w for g, w in zip(got, want))
    return CaseResult("fir_equivalence", bad == 0, f"mismatches={bad} samples={len(xs)}")


def case_iir(rng) -> CaseResult:
    a = _fx(rng.integers(-2**13, 2**13, 16))
    b = [quantize(v) for v in random_stable_feedback(rng, 15)]
    xs = _fx(rng.integers(-2**14, 2**14, 300))
    got = [y.raw for y in iir_filter(IirConfig(a, b), xs)]
    want = oracles.oracle_iir(a, b, xs).raws()
    bad = sum(g != w for g, w in zip(got, want))
    return CaseResult("iir_equivalence", bad == 0, f"mismatches={bad} samples={len(xs)}")


def case_dwt(rng) -> CaseResult:
    pair = daubechies8()
    xs = _fx(rng.integers(-2**15, 2**15, 64))
    got = dwt_pyramid(DwtConfig(pair.lowpass, pair.highpass), xs, 3)
    want = oracles.oracle_dwt(pair.lowpass, pair.highpass, xs, 3)
    bad = 0
    for (glo, ghi), (wlo, whi) in zip(got, want):
        bad += sum(g.raw != w.raw for g, w in zip(glo + ghi, wlo.values + whi.values))
        bad += abs(len(glo) - len(wlo))
    return CaseResult("dwt_pyramid", bad == 0, f"mismatches={bad} levels=3")


def case_fft(rng) -> CaseResult:
    cfg = FftConfig()
    worst = 0.0
    for _ in range(50):
        raws = rng.integers(-2**15, 2**15, (16, 2))
        x = [CFx(Fx(int(r)), Fx(int(i))) for r, i in raws]
        ref = oracles.oracle_dft(x, 16).values
        for y, r in zip(fft16(cfg, x), ref):
            worst = max(worst, abs(float(y.re) - r.real), abs(float(y.im) - r.imag))
    lsb = worst * 2**15
    return CaseResult("fft_random", lsb <= TRANSFORM_TOL_LSB, f"max_err_lsb={lsb:.6f}")


def case_dct(rng) -> CaseResult:
    cfg = DctConfig()
    worst = 0.0
    for _ in range(50):
        x = _fx(rng.integers(-2**15, 2**15, 16))
        ref = oracles.oracle_dct(x, 16).values
        for y, r in zip(dct16(cfg, x), ref):
            worst = max(worst, abs(float(y) - r))
    lsb = worst * 2**15
    return CaseResult("dct_random", lsb <= TRANSFORM_TOL_LSB, f"max_err_lsb={lsb:.6f}")


def case_resources(rng) -> CaseResult:
    bad = [f.value for f, row in EXPECTED_COUNTS.items() if function_inventory(f) != row]
    pool = pool_requirement(Function).restrict([CmKind(k) for k in COMBINED])
    if pool != COMBINED:
        bad.append("combined")
    return CaseResult("block_counts", not bad, "mismatch=" + (",".join(bad) or "none"))


CASES = (case_da, case_fir, case_iir, case_dwt, case_fft, case_dct, case_resources)


def run_suite(seed: int, threads: int = 1) -> list[CaseResult]:
    children = np.random.SeedSequence(seed).spawn(len(CASES))
    jobs = [(case, np.random.default_rng(s)) for case, s in zip(CASES, children)]
    if threads <= 1:
        return [case(rng) for case, rng in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: job[0](job[1]), jobs))


def format_results(seed: int, results: list[CaseResult]) -> str:
    lines = [f"# fpda verify seed={seed}"]
    lines += [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"# {len(results) - failed}/{len(results)} passed")
    return "\n".join(lines) + "\n"
