"""Finite-precision p-adic numbers, Kozyrev wavelets and the Vladimirov derivative.

A nonzero PadicNumber is x = p^v * sum_i d_i p^i known modulo p^(v + L),
with d_0 != 0.  A zero is stored with empty digits and ``valuation`` set to
the absolute precision N, meaning only x = 0 mod p^N is known.  In both cases
``valuation + precision`` is the absolute precision.

Wavelets use psi(x) = p^(-g/2) e(p^(g-1) j (x - c)) 1[|x - c| <= p^g], with
c = m p^(-g) and e(y) = exp(2 pi i {y}_p).  D^a psi = p^(a(1-g)) psi, so the
scale g doubles as the eigen-label, and occupation n corresponds to g = 1 - n.
"""
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._util import is_prime, root_of_unity
from .errors import ConvergenceError, PrecisionError

DEFAULT_PRECISION = 24


def _ord(p, n):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _check_prime(p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return int(p)


@dataclass(frozen=True)
class PadicNumber:
    p: int
    valuation: int
    digits: tuple
    precision: int

    def __post_init__(self):
        if any(not 0 <= d < self.p for d in self.digits):
            raise ValueError("digits out of range")
        if self.digits and self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        if len(self.digits) != self.precision:
            raise ValueError("digit count must equal precision")

    @classmethod
    def from_rational(cls, p, value, precision=DEFAULT_PRECISION):
        p = _check_prime(p)
        value = Fraction(value)
        if value == 0:
            return cls(p, precision, (), 0)
        v = _ord(p, value.numerator) - _ord(p, value.denominator)
        num = value.numerator // p ** max(v, 0)
        den = value.denominator // p ** max(-v, 0)
        mod = p**precision
        return _normalize(p, num * pow(den, -1, mod), v, v + precision)

    @property
    def absolute_precision(self):
        return self.valuation + self.precision

    @property
    def is_zero(self):
        return not self.digits

    @property
    def unit(self):
        """sum_i d_i p^i as an integer (0 for zero)."""
        return sum(d * self.p**i for i, d in enumerate(self.digits))

    def _check_same(self, other):
        if not isinstance(other, PadicNumber):
            other = PadicNumber.from_rational(self.p, other, max(self.precision, DEFAULT_PRECISION))
        if other.p != self.p:
            raise ValueError("p-adic numbers over different primes")
        return other

    def __add__(self, other):
        other = self._check_same(other)
        s = min(self.valuation, other.valuation)
        N = min(self.absolute_precision, other.absolute_precision)
        X = self.unit * self.p ** (self.valuation - s) + other.unit * self.p ** (other.valuation - s)
        return _normalize(self.p, X, s, N)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return _normalize(self.p, -self.unit, self.valuation, self.absolute_precision)

    def __sub__(self, other):
        return self + (-self._check_same(other))

    def __rsub__(self, other):
        return self._check_same(other) - self

    def __mul__(self, other):
        other = self._check_same(other)
        N = min(self.valuation + other.absolute_precision, other.valuation + self.absolute_precision)
        return _normalize(self.p, self.unit * other.unit, self.valuation + other.valuation, N)

    __rmul__ = __mul__

    def shift(self, k):
        """x * p^k (exact)."""
        return PadicNumber(self.p, self.valuation + k, self.digits, self.precision)

    def to_fraction(self):
        """The rational representative p^v * unit (0 for zero)."""
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation


def _normalize(p, X, s, N):
    """The number p^s * X known modulo p^N, in canonical form."""
    width = N - s
    X = X % p**width if width > 0 else 0
    if X == 0:
        return PadicNumber(p, N, (), 0)
    k = _ord(p, X)
    X //= p**k
    v = s + k
    digits = []
    for _ in range(N - v):
        X, d = divmod(X, p)
        digits.append(d)
    return PadicNumber(p, v, tuple(digits), N - v)


def padic_norm(x):
    return 0.0 if x.is_zero else float(Fraction(x.p) ** (-x.valuation))


def fractional_part(x):
    """{x}_p: the terms of x with negative powers of p, as a Fraction in [0, 1)."""
    if x.absolute_precision < 0:
        raise PrecisionError("fractional part undecidable: absolute precision below 0")
    return sum(
        (Fraction(d) * Fraction(x.p) ** (x.valuation + i) for i, d in enumerate(x.digits) if x.valuation + i < 0),
        Fraction(0),
    )


def additive_character(x):
    """exp(2 pi i {x}_p)."""
    return root_of_unity(fractional_part(x))


@dataclass(frozen=True)
class WaveletIndex:
    p: int
    gamma: int
    m: Fraction = Fraction(0)
    j: int = 1

    def __post_init__(self):
        _check_prime(self.p)
        m = Fraction(self.m) % 1
        den = m.denominator
        while den % self.p == 0:
            den //= self.p
        if den != 1:
            raise ValueError("translation must have a p-power denominator")
        if not 1 <= self.j < self.p:
            raise ValueError("phase j must lie in 1..p-1")
        object.__setattr__(self, "m", m)

    def center(self, precision=DEFAULT_PRECISION):
        return PadicNumber.from_rational(self.p, self.m * Fraction(self.p) ** (-self.gamma), precision)

    @property
    def label(self):
        """Eigen-label n with D^a psi = p^(a(1-n)) psi."""
        return self.gamma


@dataclass(frozen=True)
class NumberState:
    p: int
    n: int

    def __post_init__(self):
        _check_prime(self.p)
        if self.n < 0:
            raise ValueError("occupation must be >= 0")

    def eigenvalue(self, alpha):
        return complex(np.exp(self.n * complex(alpha) * np.log(self.p)))

    def wavelet(self, m=Fraction(0), j=1):
        return WaveletIndex(self.p, 1 - self.n, m, j)


def _as_padic(p, xi):
    if isinstance(xi, PadicNumber):
        if xi.p != p:
            raise ValueError("point and wavelet over different primes")
        return xi
    return PadicNumber.from_rational(p, xi)


def _offset(idx, xi):
    """xi - c, with c the centre of the support."""
    xi = _as_padic(idx.p, xi)
    c = idx.center(max(xi.absolute_precision + idx.gamma, 1) + DEFAULT_PRECISION)
    return xi - c


def _in_support(idx, d):
    if not d.is_zero:
        return d.valuation >= -idx.gamma
    if d.valuation >= -idx.gamma:
        return True
    raise PrecisionError(f"support membership undecidable: point known only mod p^{d.valuation}")


def kozyrev_eval(idx, xi):
    d = _offset(idx, xi)
    if not _in_support(idx, d):
        return 0j
    if d.absolute_precision + idx.gamma - 1 < 0:
        raise PrecisionError("wavelet phase undecidable at this precision")
    arg = d.shift(idx.gamma - 1) * idx.j
    return complex(idx.p ** (-idx.gamma / 2) * additive_character(arg))


def ball_integral(idx, xi, k):
    """Integral of psi over {x : |x - xi|_p <= p^k} (Haar measure of Z_p is 1)."""
    d = _offset(idx, xi)
    if _in_support(idx, d):
        # a ball of radius p^k >= p^g around a support point is the whole support
        if k >= idx.gamma:
            return 0j
        return kozyrev_eval(idx, xi) * float(Fraction(idx.p) ** k)
    # outside: the ball either misses the support or swallows it
    return 0j


def vladimirov_apply(p, alpha, idx, xi):
    """(1 - p^a) / (1 - p^(-a-1)) * integral (psi(x) - psi(xi)) / |x - xi|^(a+1) dx.

    The integral is split into spheres |x - xi| = p^k.  On each sphere the
    wavelet integral is a difference of two ball integrals; below the
    scale g - 1 the integrand vanishes, and above max(g, log_p|xi - c|) only
    the constant -psi(xi) survives, giving a geometric tail in p^(-a).
    """
    p = _check_prime(p)
    if idx.p != p:
        raise ValueError("prime mismatch")
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise ConvergenceError(f"Re(alpha) = {alpha.real} <= 0: the shell sum diverges")
    d = _offset(idx, xi)
    f = kozyrev_eval(idx, xi)
    k_hi = idx.gamma if _in_support(idx, d) else -d.valuation
    logp = np.log(p)
    shell = 1 - 1 / p
    total = 0j
    prev = ball_integral(idx, xi, idx.gamma - 2)
    for k in range(idx.gamma - 1, k_hi + 1):
        cur = ball_integral(idx, xi, k)
        sphere = cur - prev - f * p**k * shell
        total += np.exp(-k * (alpha + 1) * logp) * sphere
        prev = cur
    u = np.exp(-alpha * logp)
    total += -f * shell * u ** (k_hi + 1) / (1 - u)
    const = (1 - np.exp(alpha * logp)) / (1 - np.exp(-(alpha + 1) * logp))
    return complex(const * total)


def vladimirov_eigenvalue(p, alpha, gamma):
    return complex(np.exp(complex(alpha) * (1 - gamma) * np.log(p)))


def support_points(idx, count, seed=0):
    """``count`` distinct rational points in the support, cycling through its p sub-balls."""
    rng = np.random.default_rng(seed)
    c = idx.m * Fraction(idx.p) ** (-idx.gamma)
    scale = Fraction(idx.p) ** (-idx.gamma)
    pts, seen = [], set()
    while len(pts) < count:
        t = len(pts) % idx.p + idx.p * int(rng.integers(0, idx.p**6))
        x = c + scale * t
        if x not in seen:
            seen.add(x)
            pts.append(x)
    return pts


def wavelet_inner(a, b):
    """<psi_a, psi_b> summed exactly over sub-balls on which both are constant."""
    if a.p != b.p:
        raise ValueError("prime mismatch")
    small, large = (a, b) if a.gamma <= b.gamma else (b, a)
    p, g = small.p, small.gamma
    c = small.m * Fraction(p) ** (-g)
    measure = float(Fraction(p) ** (g - 1))
    total = 0j
    for t in range(p):
        x = c + Fraction(p) ** (-g) * t
        total += kozyrev_eval(a, x) * np.conj(kozyrev_eval(b, x)) * measure
    return complex(total)


def composition_eigencheck(p, alpha1, alpha2, n, tol=1e-12):
    """(p^(n a1) p^(n a2), p^(n (a1 + a2))); raises if they disagree beyond tol."""
    logp = np.log(_check_prime(p))
    lhs = complex(np.exp(n * complex(alpha1) * logp) * np.exp(n * complex(alpha2) * logp))
    rhs = complex(np.exp(n * (complex(alpha1) + complex(alpha2)) * logp))
    if abs(lhs - rhs) > tol * max(1.0, abs(rhs)):
        raise PrecisionError(f"composition mismatch {lhs} vs {rhs}")
    return lhs, rhs


def twisted_eigenvalue(p, n, chi):
    """chi(p)^n p^n, with chi(p)^0 = 1."""
    p = _check_prime(p)
    if n == 0:
        return 1 + 0j
    turns = chi.angle(p)
    if turns is None:
        return 0j
    return root_of_unity(turns * n) * float(p) ** n


def unitary_ratio_eigenvalue(p, n, chi):
    """chi(p)^n; the identity (1) at primes dividing the modulus."""
    _check_prime(p)
    turns = chi.angle(p)
    if turns is None:
        return 1 + 0j
    return root_of_unity(turns * n)


def sl2_apply(generator, state):
    """J3|n> = n|n>, J+|n> = n|n+1>, J-|n> = n|n-1> on occupations 0..len(state)-1."""
    c = np.asarray(state, dtype=complex)
    n = np.arange(len(c))
    out = np.zeros_like(c)
    if generator == "J3":
        return n * c
    if generator == "Jplus":
        out[1:] = (n * c)[:-1]
    elif generator == "Jminus":
        out[:-1] = (n * c)[1:]
    else:
        raise ValueError(f"unknown generator {generator!r}")
    return out
