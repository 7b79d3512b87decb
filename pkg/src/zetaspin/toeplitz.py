"""Toeplitz-type phase operators and the integer-factorization basis.

For any strictly increasing diagonal h, the matrix Phi with entries
i / (h_a - h_b) off the diagonal satisfies, for every vector v,

    (Phi H - H Phi) v = i v - i (sum_b v_b) 1,

so the canonical commutator holds exactly on the codimension-one subspace
sum(v) = 0.  The total phase operator is the case h = ln n.
"""
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from ._util import primes_upto
from .chars import trivial
from .errors import BasisTooLargeError

INTEGER_BASIS_GUARD = 1 << 14
BAND_EDGES = (np.pi / 4, np.pi / 2, 3 * np.pi / 4)


def toeplitz_phase(n_cut):
    """(n+1) x (n+1) matrix with entry i / (m - n) off the diagonal."""
    if n_cut < 1:
        raise ValueError("n_cut must be >= 1")
    return phase_from_diagonal(np.arange(n_cut + 1, dtype=float))


def phase_from_diagonal(h):
    """Matrix with entries i / (h_a - h_b), zero diagonal."""
    h = _check_increasing(h)
    diff = h[:, None] - h[None, :]
    np.fill_diagonal(diff, 1.0)
    Phi = 1j / diff
    np.fill_diagonal(Phi, 0)
    return Phi


def _check_increasing(h):
    h = np.asarray(h, dtype=float)
    if h.ndim != 1 or np.any(np.diff(h) <= 0):
        raise ValueError("diagonal must be strictly increasing (non-degenerate)")
    return h


def commutator_with_diagonal(Phi, h, v):
    """(Phi H - H Phi) v for H = diag(h), formed entrywise as Phi_ab (h_b - h_a)."""
    h = np.asarray(h, dtype=float)
    C = Phi * (h[None, :] - h[:, None])
    return C @ np.asarray(v, dtype=complex)


@dataclass(frozen=True)
class CommutatorCheck:
    w: np.ndarray
    expected: np.ndarray  # i v - i (sum v) 1
    defect: float  # ||w - expected||
    total: complex  # sum v

    @property
    def pure(self):
        """Defect between w and i v alone; zero exactly when sum v = 0."""
        return float(np.linalg.norm(self.w - 1j * (self.expected + 1j * self.total)))


def commutator_identity_check(Phi, h, v):
    h = _check_increasing(h)
    Phi = np.asarray(Phi, dtype=complex)
    ref = phase_from_diagonal(h)
    if Phi.shape != ref.shape or not np.allclose(Phi, ref, rtol=1e-12, atol=0):
        raise ValueError("Phi is not the phase matrix of h")
    v = np.asarray(v, dtype=complex)
    w = commutator_with_diagonal(Phi, h, v)
    total = complex(np.sum(v))
    expected = 1j * v - 1j * total * np.ones_like(v)
    return CommutatorCheck(w, expected, float(np.linalg.norm(w - expected)), total)


# --- Hermitian eigensolver -------------------------------------------------


def _round_robin(n):
    """n - 1 rounds (n even) of disjoint index pairs covering all pairs once."""
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        pairs = [(players[i], players[n - 1 - i]) for i in range(n // 2)]
        rounds.append(np.array([sorted(p) for p in pairs]).T)
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _offdiag_norm(A):
    # summed directly: ||A||^2 - ||diag||^2 cancels down to a sqrt(eps) floor
    off = A.copy()
    np.fill_diagonal(off, 0)
    return np.linalg.norm(off)


def jacobi_eigh(M, tol=1e-15, max_sweeps=60):
    """Cyclic Jacobi for a Hermitian matrix, rotations applied in parallel rounds.

    Each round annihilates n/2 disjoint off-diagonal pairs at once (they touch
    disjoint rows and columns, so the simultaneous update is exact).
    """
    A = np.array(M, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    if n == 1:
        return A.real.diagonal().copy(), V
    m = n + (n % 2)
    rounds = [r[:, r[1] < n] for r in _round_robin(m)]
    scale = np.linalg.norm(A)
    for _ in range(max_sweeps):
        if _offdiag_norm(A) <= tol * scale:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            mag = np.abs(apq)
            live = mag > 1e-300
            if not np.any(live):
                continue
            P, Q, apq, mag = P[live], Q[live], apq[live], mag[live]
            app = A[P, P].real
            aqq = A[Q, Q].real
            phase = np.conj(apq) / mag  # e^{-i alpha}
            tau = (aqq - app) / (2 * mag)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1 / np.sqrt(1 + t * t)
            s = t * c
            gpp, gpq, gqp, gqq = c, s, -s * phase, c * phase
            colp, colq = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = colp * gpp + colq * gqp
            A[:, Q] = colp * gpq + colq * gqq
            rowp, rowq = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = gpp[:, None] * rowp + np.conj(gqp)[:, None] * rowq
            A[Q, :] = gpq[:, None] * rowp + np.conj(gqq)[:, None] * rowq
            A[P, Q] = 0
            A[Q, P] = 0
            vp, vq = V[:, P].copy(), V[:, Q].copy()
            V[:, P] = vp * gpp + vq * gqp
            V[:, Q] = vp * gpq + vq * gqq
    w = A.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def hermitian_eigs(M, method="jacobi"):
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a Hermitian matrix."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    norm = np.linalg.norm(M)
    if np.linalg.norm(M - M.conj().T) >= 1e-10 * max(norm, 1e-300):
        raise ValueError("matrix is not Hermitian")
    if method == "jacobi":
        return jacobi_eigh(M)
    if method == "lapack":
        return np.linalg.eigh(M)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class SzegoSummary:
    max_abs: float
    symmetry_defect: float
    band_fractions: dict

    def to_json(self):
        return {
            "max_abs": self.max_abs,
            "symmetry_defect": self.symmetry_defect,
            "band_fractions": {f"{a:.17g}": f for a, f in self.band_fractions.items()},
        }


def szego_summary(eigs):
    eigs = np.asarray(eigs, dtype=float)
    if np.any(np.diff(eigs) < 0):
        raise ValueError("eigenvalues must be sorted ascending")
    return SzegoSummary(
        max_abs=float(np.max(np.abs(eigs))),
        symmetry_defect=float(np.max(np.abs(eigs + eigs[::-1]))),
        band_fractions={a: float(np.mean(np.abs(eigs) <= a)) for a in BAND_EDGES},
    )


# --- similarity transforms and the total phase operator --------------------


def similarity_phase(Phi, h, beta):
    """E^-1 Phi E with E = diag(exp(beta h)), entrywise Phi_ab exp(beta (h_b - h_a))."""
    h = np.asarray(h, dtype=float)
    Phi = np.asarray(Phi, dtype=complex)
    if Phi.shape != (len(h), len(h)):
        raise ValueError("dimension mismatch")
    beta = complex(beta)
    if abs(beta.real) * np.max(np.abs(h)) > 700:
        raise OverflowError("exp(beta h) would overflow")
    return Phi * np.exp(beta * (h[None, :] - h[:, None]))


def subspace_defect(h, beta, v):
    """Return (||[Phi_beta, H] v - i v||, sum_n exp(beta h_n) v_n)."""
    Phi_b = similarity_phase(phase_from_diagonal(h), h, beta)
    v = np.asarray(v, dtype=complex)
    w = commutator_with_diagonal(Phi_b, h, v)
    return float(np.linalg.norm(w - 1j * v)), complex(np.sum(np.exp(complex(beta) * np.asarray(h)) * v))


@dataclass(frozen=True)
class IntegerBasis:
    prime_cutoff: int
    exponent_cutoff: int
    primes: tuple
    members: tuple  # ascending integers prod p^n_p
    exponents: tuple = field(repr=False)  # exponent tuple for each member

    @property
    def log_values(self):
        e = np.array(self.exponents, dtype=float).reshape(len(self.members), len(self.primes))
        return e @ np.log(np.array(self.primes, dtype=float))

    def __len__(self):
        return len(self.members)

    def index_of(self, n):
        return self.members.index(n)


def integer_basis(p_cut, n_cut):
    primes = tuple(int(p) for p in primes_upto(p_cut))
    if not primes:
        raise ValueError("prime cutoff must be >= 2")
    if n_cut < 1:
        raise ValueError("n_cut must be >= 1")
    size = (n_cut + 1) ** len(primes)
    if size > INTEGER_BASIS_GUARD:
        raise BasisTooLargeError(f"integer basis of {size} members exceeds guard {INTEGER_BASIS_GUARD}")
    pairs = []
    for exps in product(range(n_cut + 1), repeat=len(primes)):
        n = 1
        for p, e in zip(primes, exps):
            n *= p**e
        pairs.append((n, exps))
    pairs.sort()
    return IntegerBasis(int(p_cut), int(n_cut), primes, tuple(n for n, _ in pairs), tuple(e for _, e in pairs))


def total_phase(basis):
    """Entries i / (ln n_a - ln n_b), zero diagonal."""
    n = np.array(basis.members, dtype=np.int64)
    # log1p of an exactly formed integer difference keeps close pairs accurate
    diff = np.log1p((n[:, None] - n[None, :]) / n[None, :].astype(float))
    np.fill_diagonal(diff, 1.0)
    Phi = np.triu(1j / diff, 1)
    # mirror the upper triangle so the result is exactly hermitian
    return Phi + Phi.conj().T


@dataclass(frozen=True)
class FactorizedVector:
    primes: tuple
    factors: tuple  # per-prime coefficient arrays v^(p)_0..n

    def global_vector(self, basis):
        out = np.ones(len(basis), dtype=complex)
        for i, p in enumerate(basis.primes):
            coeffs = self.factors[self.primes.index(p)]
            out *= np.array([coeffs[e[i]] for e in basis.exponents])
        return out

    def factor_sums(self):
        return [complex(np.sum(f)) for f in self.factors]


def character_vector(basis, chi=None, beta=0.0):
    """Factorized coefficients v^(p)_n = (chi(p) p^beta)^n; beta = 0 gives v_n = chi(n)."""
    chi = trivial() if chi is None else chi
    n = np.arange(basis.exponent_cutoff + 1)
    factors = []
    for p in basis.primes:
        c = complex(chi(p)) * np.exp(complex(beta) * np.log(p))
        factors.append(np.where(n == 0, 1 + 0j, c ** np.maximum(n, 1)))
    return FactorizedVector(basis.primes, tuple(factors))


def subspace_condition_value(beta, basis, chi=None):
    """prod_p sum_{n=0}^{n_cut} (chi(p) p^beta)^n, the value whose vanishing defines the subspace."""
    return complex(np.prod(character_vector(basis, chi, beta).factor_sums()))
