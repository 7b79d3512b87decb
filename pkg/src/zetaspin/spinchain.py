"""Finite chain of spins sitting on prime-labelled sites.

Sign convention: the Hamiltonian is H = -sum_p B_p N_p, so the Boltzmann
operator is exp(-beta H) = exp(beta sum_p B_p N_p).  With the default field
B_p = ln p the Boltzmann weight of the configuration n = prod p^(n_p) is n^beta.
"""
from dataclasses import dataclass, field

import numpy as np

from ._util import is_prime
from .errors import BasisTooLargeError

BASIS_GUARD = 1 << 24
_CHUNK = 1 << 16


@dataclass(frozen=True)
class ChainConfig:
    sites: tuple
    n_cut: int
    field: dict = field(default=None, compare=False)
    twist: object = None  # DirichletCharacter or None

    def __post_init__(self):
        sites = tuple(int(p) for p in self.sites)
        if not sites:
            raise ValueError("a chain needs at least one site")
        if any(not is_prime(p) for p in sites):
            raise ValueError(f"sites must be primes, got {sites}")
        if len(set(sites)) != len(sites) or list(sites) != sorted(sites):
            raise ValueError("sites must be distinct and ascending")
        if self.n_cut < 1:
            raise ValueError("n_cut must be >= 1")
        fld = {p: float(np.log(p)) for p in sites}
        if self.field is not None:
            fld.update({int(p): float(b) for p, b in self.field.items()})
        if any(fld[p] <= 0 for p in sites):
            raise ValueError("field values must be positive")
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "field", fld)

    @property
    def fields(self):
        return np.array([self.field[p] for p in self.sites])

    @property
    def dimension(self):
        return (self.n_cut + 1) ** len(self.sites)

    def site_weights(self):
        """Per-site table chi(p)^n for n = 0..n_cut (ones when untwisted)."""
        n = np.arange(self.n_cut + 1)
        rows = []
        for p in self.sites:
            if self.twist is None:
                rows.append(np.ones(self.n_cut + 1, dtype=complex))
                continue
            c = complex(self.twist(p))
            # 0**0 = 1: the empty occupation always has weight one
            rows.append(np.where(n == 0, 1 + 0j, c ** np.maximum(n, 1)))
        return np.array(rows)


def enumerate_basis(config):
    """All occupation tuples in lexicographic order (first site most significant).

    Returned as an integer array of shape (dimension, number of sites).
    """
    if config.dimension > BASIS_GUARD:
        raise BasisTooLargeError(f"basis of {config.dimension} states exceeds guard {BASIS_GUARD}")
    radix = config.n_cut + 1
    k = len(config.sites)
    idx = np.arange(config.dimension)
    out = np.empty((config.dimension, k), dtype=np.int64)
    for col in range(k - 1, -1, -1):
        out[:, col] = idx % radix
        idx //= radix
    return out


def _check_index(config, idx):
    idx = np.asarray(idx, dtype=np.int64)
    if idx.shape != (len(config.sites),) or np.any(idx < 0) or np.any(idx > config.n_cut):
        raise ValueError(f"invalid tensor index {idx.tolist()} for {config.sites}, n_cut={config.n_cut}")
    return idx


def energy(config, idx):
    """sum_p B_p n_p, i.e. minus the eigenvalue of H; equals ln(prod p^n_p) for the default field."""
    idx = _check_index(config, idx)
    return float(np.dot(config.fields, idx))


def twisted_weight(config, idx):
    """prod_p chi(p)^(n_p), with 0^0 = 1."""
    idx = _check_index(config, idx)
    table = config.site_weights()
    return complex(np.prod(table[np.arange(len(idx)), idx]))


@dataclass(frozen=True)
class TraceResult:
    value: complex  # the factorized product
    brute_force: complex = None
    discrepancy: float = None  # |product - brute| / max(|product|, |brute|)

    @property
    def product_only(self):
        return self.brute_force is None

    def __complex__(self):
        return complex(self.value)


def product_trace(config, beta):
    """prod_p sum_{n=0}^{n_cut} (chi(p) e^(beta B_p))^n."""
    n = np.arange(config.n_cut + 1)
    boltz = np.exp(complex(beta) * np.outer(config.fields, n))
    return complex(np.prod(np.sum(config.site_weights() * boltz, axis=1)))


def brute_force_trace(config, beta):
    """Explicit sum over the tensor basis of twisted_weight * exp(beta * energy)."""
    basis = enumerate_basis(config)
    table = config.site_weights()
    sites = np.arange(len(config.sites))
    total = 0j
    for start in range(0, len(basis), _CHUNK):
        block = basis[start : start + _CHUNK]
        weights = np.prod(table[sites, block], axis=1)
        total += np.sum(weights * np.exp(complex(beta) * (block @ config.fields)))
    return complex(total)


def partition_trace(config, beta, cross_check=True):
    """Tr(U_chi exp(beta sum B_p N_p)) by the factorized product and, when the
    basis is within the guard, by brute-force enumeration as well."""
    value = product_trace(config, beta)
    if not cross_check or config.dimension > BASIS_GUARD:
        return TraceResult(value)
    brute = brute_force_trace(config, beta)
    scale = max(abs(value), abs(brute))
    disc = 0.0 if scale == 0 else abs(value - brute) / scale
    return TraceResult(value, brute, disc)
