"""Euler factors, truncated products, series oracles and zero refinement.

Complex powers are always formed as ``exp(-s * ln p)`` with the real positive
logarithm of p, which fixes the branch.
"""
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import binom

from ._util import is_prime, primes_upto
from .chars import char_power, trivial
from .errors import ConvergenceError, DomainError, PoleError, TruncationWarning

POLE_GUARD = 1e-14
_CHUNK = 1 << 20


@dataclass(frozen=True)
class TruncationSpec:
    """Truncation parameters.

    prime_cutoff is the largest integer whose primes enter the product (it
    need not itself be prime); series_length is the number of terms kept in
    reference series; exponent_cutoff is the per-site occupation bound.
    """

    prime_cutoff: int
    series_length: int = 10**6
    exponent_cutoff: int = 1

    def __post_init__(self):
        if self.prime_cutoff < 2:
            raise ValueError("prime_cutoff must be >= 2")
        if self.series_length < 1:
            raise ValueError("series_length must be >= 1")
        if self.exponent_cutoff < 1:
            raise ValueError("exponent_cutoff must be >= 1")

    def primes(self):
        return primes_upto(self.prime_cutoff)


def _check_finite(z, name):
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {z}")
    return z


def _chi_at(chi, n):
    chi = trivial() if chi is None else chi
    return chi.values[np.asarray(n, dtype=np.int64) % chi.modulus]


def _guard(denominator, scale, what):
    bad = np.abs(denominator) < POLE_GUARD * np.maximum(1.0, np.abs(scale))
    if np.any(bad):
        raise PoleError(f"{what}: denominator vanishes (|1 - z| < {POLE_GUARD:g})")


def local_factor(p, s, chi=None):
    """1 / (1 - chi(p) p^-s)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    s = _check_finite(s, "s")
    z = complex(_chi_at(chi, p)) * np.exp(-s * np.log(p))
    _guard(1 - z, z, f"local factor at p={p}")
    return 1 / (1 - z)


def truncated_euler(s, spec, chi=None):
    """Product of local factors over all primes p <= spec.prime_cutoff.

    Emits a TruncationWarning when Re(s) <= 1, where the finite product is
    still computed but makes no claim about the L-function.
    """
    s = _check_finite(s, "s")
    if s.real <= 1:
        warnings.warn(f"Re(s) = {s.real:g} <= 1: truncated product only", TruncationWarning, stacklevel=2)
    primes = spec.primes()
    z = _chi_at(chi, primes) * np.exp(-s * np.log(primes.astype(float)))
    _guard(1 - z, z, "truncated Euler product")
    value = 1 + 0j
    # fixed chunk boundaries keep the reduction order reproducible
    for start in range(0, len(z), _CHUNK):
        value *= np.prod(1 / (1 - z[start : start + _CHUNK]))
    return complex(value)


def dirichlet_series(s, N, chi=None):
    """Plain partial sum sum_{n<=N} chi(n) n^-s."""
    s = _check_finite(s, "s")
    total = 0j
    for start in range(1, int(N) + 1, _CHUNK):
        n = np.arange(start, min(start + _CHUNK, int(N) + 1), dtype=np.int64)
        total += np.sum(_chi_at(chi, n) * np.exp(-s * np.log(n.astype(float))))
    return complex(total)


def zeta_reference(s, N=2000):
    """Riemann zeta for Re(s) > 0 from the alternating eta series.

    The alternating series is accelerated by binomially averaging its partial
    sums (weights of a Binomial(n, 1/2) tail, n = N // 2), which converges
    geometrically; the eta-to-zeta factor 1 / (1 - 2^(1-s)) is applied last.
    """
    s = _check_finite(s, "s")
    if s.real <= 0:
        raise DomainError(f"zeta_reference needs Re(s) > 0, got {s}")
    if abs(s - 1) < POLE_GUARD:
        raise PoleError("zeta has a pole at s = 1")
    factor = 1 - np.exp((1 - s) * np.log(2.0))
    if abs(factor) < POLE_GUARD:
        raise PoleError(f"eta-to-zeta factor vanishes at s = {s}")
    n = max(int(N) // 2, 1)
    j = np.arange(2 * n)
    weights = np.ones(2 * n)
    weights[n:] = binom.sf(j[n:] - n, n, 0.5)
    signs = np.where(j % 2 == 0, 1.0, -1.0)
    eta = np.sum(signs * weights * np.exp(-s * np.log(j + 1.0)))
    return complex(eta / factor)


def partition_ratio(beta, spec, chi=None):
    """prod_{p<=cutoff} (1 - chi^(n+1)(p) p^(beta(n+1))) / (1 - chi(p) p^beta).

    n is spec.exponent_cutoff; primes with chi(p) = 0 contribute 1.
    """
    beta = _check_finite(beta, "beta")
    chi = trivial() if chi is None else chi
    m = spec.exponent_cutoff + 1
    primes = spec.primes()
    logp = np.log(primes.astype(float))
    den_z = _chi_at(chi, primes) * np.exp(beta * logp)
    num_z = _chi_at(char_power(chi, m), primes) * np.exp(m * beta * logp)
    _guard(1 - den_z, den_z, "partition ratio")
    value = 1 + 0j
    for start in range(0, len(primes), _CHUNK):
        sl = slice(start, start + _CHUNK)
        value *= np.prod((1 - num_z[sl]) / (1 - den_z[sl]))
    return complex(value)


def single_site_trace(beta, n_cut, B, omega=0.0):
    """sum_{m=0}^{n_cut} exp((beta*B + i*omega) m)."""
    m = np.arange(n_cut + 1)
    return complex(np.sum(np.exp((complex(beta) * B + 1j * omega) * m)))


def predicted_fisher_zeros(p, n_cut, B=None):
    """Imaginary beta where the single-site trace vanishes: 2 pi i k / (B (n+1)), k = 1..n."""
    B = float(np.log(p)) if B is None else float(B)
    if B <= 0:
        raise ValueError("field B must be positive")
    return [2j * np.pi * k / (B * (n_cut + 1)) for k in range(1, n_cut + 1)]


def refine_zero(f, seed, tol=1e-12, max_iter=64, step=1e-3):
    """Secant iteration from (seed, seed + step) until |f(root)| < tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    x0, x1 = complex(seed), complex(seed) + step
    f0, f1 = complex(f(x0)), complex(f(x1))
    if abs(f0) < tol:
        return x0
    for _ in range(max_iter):
        if abs(f1) < tol:
            return x1
        if f1 == f0:
            raise ConvergenceError("secant step undefined (f(x0) == f(x1))", last=x1, residual=abs(f1))
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not np.isfinite(x2):
            raise ConvergenceError("secant iterate diverged", last=x1, residual=abs(f1))
        x0, f0 = x1, f1
        x1 = x2
        f1 = complex(f(x1))
    if abs(f1) < tol:
        return x1
    raise ConvergenceError(f"no convergence after {max_iter} iterations", last=x1, residual=abs(f1))
