"""End-to-end acceptance checks, shared by the test suite, the CLI and repro/.

Each ``criterion_N`` returns a Result; nothing here raises on a failed check.
"""
import time
from dataclasses import dataclass

import numpy as np

from . import chars, lfunc, padic, phaseop, spinchain, toeplitz
from .errors import PoleError

FROZEN_ZETA_ZERO = complex(0.4999999999999964, 14.134725141734691)


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:>2}: {self.title} ({self.seconds:.2f}s) {self.detail}"


def _timed(number, title):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            passed, detail = fn()
            return Result(number, title, bool(passed), detail, time.perf_counter() - t0)

        run.number = number
        run.title = title
        return run

    return wrap


@_timed(1, "character orthogonality, k <= 60")
def criterion_1():
    t0 = time.perf_counter()
    worst = 0.0
    for k in range(1, 61):
        M = chars.build_character_table(k).matrix()
        G = M @ M.conj().T
        worst = max(worst, float(np.max(np.abs(G - chars.totient(k) * np.eye(len(M))))))
    dt = time.perf_counter() - t0
    return worst < 1e-12 and dt < 1.0, f"max error {worst:.3g}, {dt:.3f}s (limit 1s)"


@_timed(2, "truncated Euler product vs Dirichlet series at s=2")
def criterion_2():
    t0 = time.perf_counter()
    spec = lfunc.TruncationSpec(10**5)
    chi4 = chars.character(4, 1)
    e1 = lfunc.truncated_euler(2, spec)
    o1 = lfunc.dirichlet_series(2, 10**7)
    e2 = lfunc.truncated_euler(2, spec, chi4)
    o2 = lfunc.dirichlet_series(2, 10**7, chi4)  # sum (-1)^m / (2m+1)^2
    r1, r2 = abs(e1 / o1 - 1), abs(e2 / o2 - 1)
    dt = time.perf_counter() - t0
    ok = r1 < 1e-4 and r2 < 1e-4 and dt < 30
    return ok, f"rel err trivial {r1:.3g}, mod 4 {r2:.3g} (Catalan {o2.real:.10f}), {dt:.2f}s"


@_timed(3, "partition ratio vs L(2)/L(4) oracles")
def criterion_3():
    spec = lfunc.TruncationSpec(10**5, exponent_cutoff=1)
    chi4 = chars.character(4, 1)
    N = 10**7
    got1 = lfunc.partition_ratio(-2, spec)
    want1 = lfunc.dirichlet_series(2, N) / lfunc.dirichlet_series(4, N)
    got2 = lfunc.partition_ratio(-2, spec, chi4)
    want2 = lfunc.dirichlet_series(2, N, chi4) / lfunc.dirichlet_series(4, N, chi4)
    r1, r2 = abs(got1 / want1 - 1), abs(got2 / want2 - 1)
    detail = (
        f"trivial {got1.real:.8f} vs {want1.real:.8f} (rel {r1:.3g}); "
        f"mod 4 {got2.real:.8f} vs L(2,chi)/L(4,chi) {want2.real:.8f} (rel {r2:.3g})"
    )
    return r1 < 1e-4 and r2 < 1e-4, detail


def _off_lattice_betas(B, n, count, rng):
    out = []
    while len(out) < count:
        beta = complex(rng.uniform(-0.5, 0.5), rng.uniform(-2 * np.pi / B, 2 * np.pi / B))
        z = beta * B * (n + 1) / (2j * np.pi)
        if abs(z - round(z.real)) * 2 * np.pi >= 0.1:
            out.append(beta)
    return out


@_timed(4, "Fisher zeros coincide with covariance points")
def criterion_4():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst_trace = worst_res = 0.0
    least_off = np.inf
    for B in (1.0, float(np.log(2)), float(np.log(3))):
        for n in range(1, 9):
            basis = phaseop.PhaseBasis(n, B)
            for beta in lfunc.predicted_fisher_zeros(2, n, B):
                worst_trace = max(worst_trace, abs(phaseop.trace_exp(basis, beta)))
                rep = phaseop.covariance_residual(basis, beta)
                worst_res = max(worst_res, rep.residual)
                if not rep.special or rep.lattice_k == 0:
                    worst_res = np.inf
            for beta in _off_lattice_betas(B, n, 100, rng):
                least_off = min(least_off, phaseop.covariance_residual(basis, beta).residual)
    dt = time.perf_counter() - t0
    ok = worst_trace < 1e-10 and worst_res < 1e-10 and least_off > 1e-2 and dt < 5
    return ok, f"max |trace| {worst_trace:.3g}, max lattice residual {worst_res:.3g}, min off-lattice {least_off:.3g}, {dt:.2f}s"


def random_chain(rng, max_dim=4096, twisted=None):
    pool = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    while True:
        k = int(rng.integers(1, 6))
        n = int(rng.integers(1, 8))
        if (n + 1) ** k <= max_dim:
            break
    sites = tuple(sorted(rng.choice(pool, size=k, replace=False).tolist()))
    twist = None
    if twisted if twisted is not None else rng.random() < 0.5:
        modulus = int(rng.integers(3, 13))
        twist = chars.character(modulus, int(rng.integers(0, chars.totient(modulus))))
    return spinchain.ChainConfig(sites, n, twist=twist)


@_timed(5, "brute-force trace equals factorized product")
def criterion_5():
    rng = np.random.default_rng(5)
    worst = 0.0
    kinds = {True: 0, False: 0}
    for i in range(50):
        cfg = random_chain(rng, twisted=bool(i % 2))
        kinds[cfg.twist is not None] += 1
        beta = complex(rng.uniform(-1.0, 0.5), rng.uniform(-4, 4))
        res = spinchain.partition_trace(cfg, beta)
        worst = max(worst, res.discrepancy)
    return worst < 1e-12, f"max relative discrepancy {worst:.3g} over {kinds[True]} twisted + {kinds[False]} untwisted"


def local_maxima(grid, values):
    i = np.arange(1, len(values) - 1)
    mask = (values[i] > values[i - 1]) & (values[i] >= values[i + 1])
    return grid[i[mask]]


def resolvent_magnitudes(config, grid):
    out = np.empty(len(grid))
    for i, phi in enumerate(grid):
        try:
            out[i] = abs(phaseop.aggregate_resolvent_trace(config, phi))
        except PoleError:
            out[i] = np.inf
    return out


@_timed(6, "partition zeros align with resolvent maxima")
def criterion_6():
    cfg = spinchain.ChainConfig((2, 3, 5), 2)
    T = phaseop.aggregate_period(cfg)
    grid = np.linspace(0, T, 10**4, endpoint=False)
    step = grid[1] - grid[0]
    maxima = local_maxima(grid, resolvent_magnitudes(cfg, grid))
    maxima = maxima[maxima > step]  # the phi = 0 pole is excluded
    zeros = np.array(phaseop.partition_zeros_in_window(cfg, 0.0, T))
    zeros = zeros[zeros > step]
    trace_at_zeros = max((abs(phaseop.zero_trace_at(cfg, z)) for z in zeros), default=0.0)
    fwd = all(np.min(np.abs(maxima - z)) <= step for z in zeros) if len(maxima) else len(zeros) == 0
    back = all(np.min(np.abs(zeros - m)) <= step for m in maxima) if len(zeros) else len(maxima) == 0
    ok = fwd and back and len(zeros) > 0 and trace_at_zeros < 1e-10
    return ok, f"{len(zeros)} zeros, {len(maxima)} maxima on [0, {T:.6f}), max |Z| at zeros {trace_at_zeros:.3g}"


@_timed(7, "Toeplitz commutator identity")
def criterion_7():
    rng = np.random.default_rng(7)
    worst = worst_pure = 0.0
    for _ in range(200):
        d = int(rng.integers(2, 513))
        h = np.cumsum(rng.uniform(1e-3, 1.0, d)) + rng.normal()
        v = rng.normal(size=d) + 1j * rng.normal(size=d)
        Phi = toeplitz.phase_from_diagonal(h)
        chk = toeplitz.commutator_identity_check(Phi, h, v)
        worst = max(worst, chk.defect / (1 + np.linalg.norm(v)))
        v0 = v - v.mean()
        w0 = toeplitz.commutator_with_diagonal(Phi, h, v0)
        worst_pure = max(worst_pure, np.linalg.norm(w0 - 1j * v0) / (1 + np.linalg.norm(v0)))
    basis = toeplitz.integer_basis(3, 1)
    hand = toeplitz.commutator_identity_check(toeplitz.total_phase(basis), basis.log_values, [1, -1, -1, 1])
    hand_defect = float(np.linalg.norm(hand.w - 1j * np.array([1, -1, -1, 1])))
    ok = worst < 1e-10 and worst_pure < 1e-10 and hand_defect < 1e-14 and basis.members == (1, 2, 3, 6)
    return ok, f"max scaled defect {worst:.3g}, pure law {worst_pure:.3g}, {{1,2,3,6}} case {hand_defect:.3g}"


@_timed(8, "Szego properties of the Toeplitz phase spectrum")
def criterion_8():
    t0 = time.perf_counter()
    parts, ok = [], True
    for n in (63, 127, 255):
        eigs, _ = toeplitz.hermitian_eigs(toeplitz.toeplitz_phase(n))
        s = toeplitz.szego_summary(eigs)
        frac = s.band_fractions[np.pi / 2]
        ok &= s.max_abs <= np.pi + 1e-6 and s.symmetry_defect < 1e-8 and abs(frac - 0.5) <= 0.05
        parts.append(f"n={n}: max {s.max_abs:.6f}, sym {s.symmetry_defect:.2g}, frac {frac:.4f}")
    dt = time.perf_counter() - t0
    return ok and dt < 60, "; ".join(parts) + f"; {dt:.1f}s"


@_timed(9, "Vladimirov eigen-relation on Kozyrev wavelets")
def criterion_9():
    worst, count = 0.0, 0
    for p in (2, 3, 5):
        for n in (-1, 0, 1, 2):
            idx = padic.WaveletIndex(p, n)
            for alpha in (1, 2, 0.5 + 0.5j):
                lam = padic.vladimirov_eigenvalue(p, alpha, n)
                for xi in padic.support_points(idx, 6, seed=p * 10 + n):
                    f = padic.kozyrev_eval(idx, xi)
                    D = padic.vladimirov_apply(p, alpha, idx, xi)
                    worst = max(worst, abs(D - lam * f))
                    count += 1
    return worst < 1e-10, f"max |D psi - lambda psi| {worst:.3g} over {count} evaluations"


@_timed(10, "twisted covariance on the shifted lattice")
def criterion_10():
    rng = np.random.default_rng(10)
    worst_on, least_off, cases = 0.0, np.inf, 0
    for modulus in (4, 5):
        for chi in chars.build_character_table(modulus):
            if chi.is_principal:
                continue
            for p in (3, 5):
                if chi.angle(p) is None:
                    continue
                for n in range(1, 9):
                    basis = phaseop.PhaseBasis.for_site(p, n, chi)
                    B, w = basis.B, basis.omega
                    for k in range(n + 1):
                        ibeta = 2 * np.pi * k / ((n + 1) * B) + w / B
                        rep = phaseop.covariance_residual(basis, -1j * ibeta)
                        worst_on = max(worst_on, rep.residual if rep.special else np.inf)
                    for beta in _off_lattice_betas(B, n, 20, rng):
                        beta = beta - 1j * w / B
                        rep = phaseop.covariance_residual(basis, beta)
                        least_off = min(least_off, rep.residual if not rep.special else 0.0)
                    cases += 1
    ok = worst_on < 1e-10 and least_off > 1e-10
    return ok, f"{cases} (chi, p, n) cases: max on-lattice {worst_on:.3g}, min off-lattice {least_off:.3g}"


@_timed(11, "strip zero of the eta-series zeta oracle")
def criterion_11():
    root = lfunc.refine_zero(lfunc.zeta_reference, 0.5 + 14j)
    val = abs(lfunc.zeta_reference(root))
    drift = abs(root - FROZEN_ZETA_ZERO)
    ok = val < 1e-5 and 14.0 < root.imag < 14.3 and drift < 1e-9
    return ok, f"root {root.real:.12f}{root.imag:+.12f}i, |zeta| {val:.3g}, drift from frozen {drift:.3g}"


CRITERIA = {
    fn.number: fn
    for fn in (
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
        criterion_7, criterion_8, criterion_9, criterion_10, criterion_11,
    )
}


def run(numbers=None):
    numbers = sorted(CRITERIA) if numbers is None else numbers
    return [CRITERIA[n]() for n in numbers]
