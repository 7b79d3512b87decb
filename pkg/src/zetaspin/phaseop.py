"""Phase operators built from phase eigenstates.

Occupations run over 0..n_cut.  The phase eigenvalues phi_k = 2 pi k / (B (n+1))
are only meaningful modulo 2 pi / B, so shift covariance is verified on the
unitary V = exp(i B phi_hat), for which it is an exact matrix identity.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import polygamma

from .errors import BasisTooLargeError, PoleError
from .lfunc import single_site_trace
from .spinchain import ChainConfig, enumerate_basis, product_trace

RESOLVENT_GUARD = 1e-12
MATRIX_GUARD = 4096
LATTICE_TOL = 1e-9


@dataclass(frozen=True)
class PhaseBasis:
    n_cut: int
    B: float = 1.0
    omega: float = 0.0

    def __post_init__(self):
        if self.n_cut < 1:
            raise ValueError("n_cut must be >= 1")
        if self.B <= 0:
            raise ValueError("B must be positive")

    @classmethod
    def for_site(cls, p, n_cut, chi=None):
        """Basis at prime site p with B = ln p; a twist sets omega = arg chi(p)."""
        omega = 0.0
        if chi is not None:
            turns = chi.angle(p)
            if turns is None:
                raise ValueError(f"chi({p}) = 0: the twisted phase basis is undefined at this site")
            omega = 2 * np.pi * float(turns)
        return cls(n_cut, float(np.log(p)), omega)

    @property
    def dim(self):
        return self.n_cut + 1

    @property
    def phases(self):
        """phi_k = 2 pi k / (B (n+1)), k = 0..n."""
        return 2 * np.pi * np.arange(self.dim) / (self.B * self.dim)

    @property
    def eigenvalues(self):
        """Eigenvalues of the (twisted) phase operator: phi_k + omega / B."""
        return self.phases + self.omega / self.B


def phase_state_matrix(basis):
    """Unitary whose column k is the phase state |phi_k>: entries exp(-i n (phi_k B + omega)) / sqrt(n+1)."""
    N = basis.dim
    n = np.arange(N)
    # phi_k B = 2 pi k / N exactly, so reduce n k mod N in integers first
    turns = np.outer(n, n) % N / N
    return np.exp(-1j * n * basis.omega)[:, None] * np.exp(-2j * np.pi * turns) / np.sqrt(N)


def phase_operator(basis):
    U = phase_state_matrix(basis)
    H = (U * basis.eigenvalues) @ U.conj().T
    return (H + H.conj().T) / 2


def exp_phase_operator(basis, scale=None):
    """exp(i * scale * phi_hat) from the spectral decomposition (scale defaults to B)."""
    scale = basis.B if scale is None else scale
    if scale == basis.B:
        return shift_operator(basis)
    U = phase_state_matrix(basis)
    return (U * np.exp(1j * scale * basis.eigenvalues)) @ U.conj().T


def shift_operator(basis):
    """exp(i B phi_hat) in closed form: |n> -> |n+1>, and |N-1> -> exp(i N omega)|0>.

    Equal to the spectral sum, but free of the rounding noise that the
    conjugation by exp(beta B N) would otherwise amplify.
    """
    N = basis.dim
    V = np.zeros((N, N), dtype=complex)
    V[np.arange(1, N), np.arange(N - 1)] = 1
    V[0, N - 1] = np.exp(1j * N * basis.omega)
    return V


def boltzmann_diagonal(basis, beta):
    """Diagonal of U e^(beta B N): exp(n (beta B + i omega))."""
    n = np.arange(basis.dim)
    return np.exp(n * (complex(beta) * basis.B + 1j * basis.omega))


def lattice_index(basis, beta, tol=LATTICE_TOL):
    """k if i*beta = 2 pi k / (B (n+1)) + omega / B  (mod 2 pi / B), else None."""
    z = (1j * complex(beta) * basis.B - basis.omega) * basis.dim / (2 * np.pi)
    k = round(z.real)
    if abs(z - k) < tol:
        return k % basis.dim
    return None


@dataclass(frozen=True)
class CovarianceReport:
    beta: complex
    residual: float
    special: bool
    lattice_k: int = None
    raw_residual: float = None  # operator-level ||E^-1 phi E - (phi + i beta - omega/B)||, diagnostic only


def covariance_residual(basis, beta):
    """|| E^-1 V E - exp(-B beta - i omega) V ||_F with V = exp(i B phi_hat), E = U e^(beta B N)."""
    beta = complex(beta)
    n = np.arange(basis.dim)
    # (E^-1 M E)_mn = M_mn exp((beta B + i omega)(n - m))
    ratio = np.exp((beta * basis.B + 1j * basis.omega) * (n[None, :] - n[:, None]))
    V = exp_phase_operator(basis)
    target = np.exp(-basis.B * beta - 1j * basis.omega) * V
    residual = _fro(V * ratio - target)
    phi = phase_operator(basis)
    raw = _fro(phi * ratio - phi - (1j * beta - basis.omega / basis.B) * np.eye(basis.dim))
    k = lattice_index(basis, beta)
    return CovarianceReport(beta, residual, k is not None, k, float(raw))


def _fro(M):
    """Frobenius norm, rescaled so that huge entries do not overflow the squares."""
    scale = np.max(np.abs(M))
    if scale == 0 or not np.isfinite(scale):
        return float(scale)
    return float(scale * np.linalg.norm(M / scale))


def trace_exp(basis, beta):
    """Tr U e^(beta B N) = sum_n exp(beta B n + i n omega)."""
    return single_site_trace(beta, basis.n_cut, basis.B, basis.omega)


def _resolvent_sum(eigenphases, phi):
    d = 1 - np.exp(1j * (np.asarray(eigenphases) - phi))
    if np.any(np.abs(d) < RESOLVENT_GUARD):
        raise PoleError(f"phi = {phi} sits on an eigenphase")
    return complex(np.sum(1 / d))


def resolvent_trace_single(basis, phi):
    """sum_k 1 / (1 - exp(i (theta_k - phi))), theta_k the phase eigenvalues."""
    return _resolvent_sum(basis.eigenvalues, float(phi))


def _site_bases(config):
    return [
        PhaseBasis(config.n_cut, config.field[p], 0.0 if config.twist is None else _omega(config.twist, p))
        for p in config.sites
    ]


def _omega(chi, p):
    turns = chi.angle(p)
    if turns is None:
        raise ValueError(f"chi({p}) = 0: no twisted phase at this site")
    return 2 * np.pi * float(turns)


def aggregate_eigenphases(config):
    """Aggregate eigenphase per tensor phase state (lexicographic in k_p).

    A state with exactly one nonzero k_p carries that site's eigenphase; every
    other state (all zero, or two or more nonzero) carries phase 0.
    """
    ks = enumerate_basis(config)
    nonzero = ks != 0
    exactly_one = nonzero.sum(axis=1) == 1
    table = np.array([b.eigenvalues for b in _site_bases(config)])
    theta = np.zeros(len(ks))
    rows = np.flatnonzero(exactly_one)
    site = np.argmax(nonzero[rows], axis=1)
    theta[rows] = table[site, ks[rows, site]]
    return theta


def aggregate_phase_diagonal(config):
    """Eigenvalues exp(i theta) of the aggregate phase unitary in the tensor phase basis."""
    return np.exp(1j * aggregate_eigenphases(config))


def _kron_all(mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def aggregate_phase_matrix(config):
    """The aggregate unitary in the occupation basis, materialized from its eigenbasis."""
    if config.dimension > MATRIX_GUARD:
        raise BasisTooLargeError(f"dimension {config.dimension} exceeds matrix guard {MATRIX_GUARD}")
    U = _kron_all([phase_state_matrix(b) for b in _site_bases(config)])
    return (U * aggregate_phase_diagonal(config)) @ U.conj().T


def aggregate_phase_projector_form(config):
    """Same operator assembled as 1 + sum_p (exp(i phi_p) - 1) (x) prod_{q != p} P0_q,
    P0_q the projector on the zero-phase state of site q.  Untwisted chains only."""
    if config.twist is not None:
        raise ValueError("projector form is defined for untwisted chains")
    if config.dimension > MATRIX_GUARD:
        raise BasisTooLargeError(f"dimension {config.dimension} exceeds matrix guard {MATRIX_GUARD}")
    bases = _site_bases(config)
    eye = [np.eye(b.dim) for b in bases]
    P0 = []
    for b in bases:
        v = phase_state_matrix(b)[:, :1]
        P0.append(v @ v.conj().T)
    total = np.eye(config.dimension, dtype=complex)
    for i, b in enumerate(bases):
        factors = list(P0)
        factors[i] = exp_phase_operator(b, scale=1.0) - eye[i]
        total += _kron_all(factors)
    return total


def aggregate_resolvent_trace(config, phi):
    """Tr (1 - exp(-i phi) exp(i varphi))^-1 over the tensor phase basis."""
    return _resolvent_sum(aggregate_eigenphases(config), float(phi))


def aggregate_period(config):
    """Window [0, T) on which every site's eigenphases are principal representatives:
    T = min(2 pi, min_p 2 pi / B_p)."""
    return float(min(2 * np.pi, 2 * np.pi / np.max(config.fields)))


def partition_zeros_in_window(config, start, stop):
    """phi in [start, stop) with partition_trace(beta = i phi) = 0, from each site's lattice."""
    zeros = []
    for b in _site_bases(config):
        spacing = 2 * np.pi / (b.B * b.dim)
        offset = b.omega / b.B
        m_lo = int(np.floor((start - offset) / spacing)) - 1
        m_hi = int(np.ceil((stop - offset) / spacing)) + 1
        for m in range(m_lo, m_hi + 1):
            if m % b.dim == 0:
                continue
            phi = offset + m * spacing
            if start <= phi < stop:
                zeros.append(phi)
    return sorted(zeros)


@dataclass(frozen=True)
class ZeroDensity:
    finite_difference: complex
    closed_form: complex
    pole_sum: complex


def _log_ratio_factors(primes, n_cut, phi):
    logp = np.log(primes.astype(float))
    num = 1 - np.exp(-(n_cut + 1) * 1j * phi * logp)
    den = 1 - np.exp(-1j * phi * logp)
    return num, den, logp


def spectral_zero_density(config, phi, h=1e-5, pole_terms=20000):
    """-i d/dphi log prod_p (1 - p^(-(n+1) i phi)) / (1 - p^(-i phi)) over the chain's sites.

    Three evaluations are returned: a central finite difference of the
    product, the exact derivative of the finite product, and the symmetric
    truncation (|m| <= pole_terms) of the sum over simple poles at
    phi = 2 pi m / ((n+1) ln p) minus those at 2 pi m / ln p, plus the
    constant -(n/2) sum ln p that the pole expansion leaves behind.
    """
    phi = complex(phi)
    primes = np.array(config.sites)
    n = config.n_cut
    num, den, logp = _log_ratio_factors(primes, n, phi)
    if np.any(np.abs(num) < RESOLVENT_GUARD) or np.any(np.abs(den) < RESOLVENT_GUARD):
        raise PoleError(f"phi = {phi} is at a zero or pole of the partition product")

    def Z(x):
        a, b, _ = _log_ratio_factors(primes, n, x)
        return np.prod(a / b)

    fd = -1j * (Z(phi + h) - Z(phi - h)) / (2 * h * Z(phi))

    # d/dphi log(1 - e^{-i c phi}) = i c e^{-i c phi} / (1 - e^{-i c phi})
    def dlog(c):
        e = np.exp(-1j * c * phi)
        return 1j * c * e / (1 - e)

    exact = -1j * np.sum(dlog((n + 1) * logp) - dlog(logp))

    m = np.arange(-pole_terms, pole_terms + 1)
    # leading term of the discarded |m| > pole_terms pairs: i 2 phi (c / 2 pi)^2 sum 1/m^2
    tail = polygamma(1, pole_terms + 1)
    poles = 0j
    for lp in logp:
        for c, sign in (((n + 1) * lp, 1), (lp, -1)):
            partial = np.sum(-1j / (phi - 2 * np.pi * m / c))
            poles += sign * (partial + 2j * phi * (c / (2 * np.pi)) ** 2 * tail)
    poles += -(n / 2) * np.sum(logp)
    return ZeroDensity(complex(fd), complex(exact), complex(poles))


def chain_for_cutoff(prime_cutoff, n_cut):
    """ChainConfig over all primes <= prime_cutoff with the default field ln p."""
    from ._util import primes_upto

    return ChainConfig(tuple(int(p) for p in primes_upto(prime_cutoff)), n_cut)


def zero_trace_at(config, phi):
    """partition_trace under beta = i phi (factorized form)."""
    return product_trace(config, 1j * phi)
