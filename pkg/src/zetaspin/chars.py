"""Dirichlet characters modulo k.

Characters are built from a decomposition of the unit group (Z/kZ)* into
cyclic factors: one factor per odd prime power, and for 2^a either nothing
(a = 1), Z/2 (a = 2) or Z/2 x Z/2^(a-2) (a >= 3).  Each character is stored
as exact angles (a rational number of turns per residue), so values can be
rendered exactly for quarter turns and to full double precision otherwise.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd

import numpy as np

from ._util import factorize, root_of_unity
from .errors import InvalidModulusError


def totient(k):
    """Euler's phi: the number of r in 1..k coprime to k."""
    k = int(k)
    if k < 1:
        raise InvalidModulusError(f"modulus must be a positive integer, got {k}")
    result = k
    for p, _ in factorize(k):
        result = result // p * (p - 1)
    return result


def _multiplicative_order(g, q):
    x, n = g % q, 1
    while x != 1:
        x = x * g % q
        n += 1
    return n


def _cyclic_generator(q, order):
    """Smallest generator of the cyclic group (Z/qZ)* of the given order."""
    prime_divisors = [r for r, _ in factorize(order)]
    for g in range(2, q):
        if gcd(g, q) != 1:
            continue
        if all(pow(g, order // r, q) != 1 for r in prime_divisors):
            return g
    raise AssertionError(f"no generator mod {q}")  # pragma: no cover


def _crt_lift(g, q, k):
    """The residue mod k that is g mod q and 1 mod k/q (q, k/q coprime)."""
    rest = k // q
    # x = 1 + rest*t with rest*t = g - 1 (mod q)
    t = (g - 1) * pow(rest, -1, q) % q if q > 1 else 0
    return (1 + rest * t) % k


@lru_cache(maxsize=None)
def _unit_group(k):
    """Generators (lifted to mod k), their orders, and the discrete-log table."""
    gens, orders = [], []
    for p, e in factorize(k):
        q = p**e
        if p == 2:
            if e == 1:
                continue
            local = [(q - 1, 2)]
            if e >= 3:
                local.append((5, 2 ** (e - 2)))
        else:
            phi_q = q // p * (p - 1)
            local = [(_cyclic_generator(q, phi_q), phi_q)]
        for g, s in local:
            gens.append(_crt_lift(g, q, k))
            orders.append(s)
    logs = {}
    for exps in product(*(range(s) for s in orders)):
        r = 1 % k
        for g, x in zip(gens, exps):
            r = r * pow(g, x, k) % k
        logs[r] = exps
    return tuple(gens), tuple(orders), logs


def _angles_for(k, exponents):
    _, orders, logs = _unit_group(k)
    angles = []
    for r in range(k):
        if r not in logs:
            angles.append(None)
            continue
        turns = sum(Fraction(a * x, s) for a, x, s in zip(exponents, logs[r], orders))
        angles.append(turns % 1)
    return tuple(angles)


def _label_of(exponents, orders):
    label = 0
    for a, s in zip(exponents, orders):
        label = label * s + a
    return label


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    angles: tuple  # Fraction turns per residue, None off the units
    label: int
    exponents: tuple = field(default=(), repr=False)
    orders: tuple = field(default=(), repr=False)

    @cached_property
    def values(self):
        return np.array(
            [0j if a is None else root_of_unity(a) for a in self.angles], dtype=complex
        )

    def __call__(self, n):
        return evaluate(self, n)

    def angle(self, n):
        """Angle of chi(n) in turns, or None when chi(n) = 0."""
        return self.angles[int(n) % self.modulus]

    @property
    def is_principal(self):
        return all(a == 0 for a in self.exponents)

    def order(self):
        """Multiplicative order of the character."""
        n = 1
        for a in self.angles:
            if a is not None:
                n = n * a.denominator // gcd(n, a.denominator)
        return n


@dataclass(frozen=True)
class CharacterTable:
    modulus: int
    characters: tuple

    @property
    def phi(self):
        return len(self.characters)

    def __len__(self):
        return len(self.characters)

    def __getitem__(self, i):
        return self.characters[i]

    def __iter__(self):
        return iter(self.characters)

    def matrix(self):
        """phi(k) x k array of character values."""
        return np.array([chi.values for chi in self.characters])

    def to_json(self):
        return {
            "modulus": self.modulus,
            "phi": self.phi,
            "characters": [
                [None if a is None else f"{a.numerator}/{a.denominator}" for a in chi.angles]
                for chi in self.characters
            ],
        }


def _character(k, exponents):
    _, orders, _ = _unit_group(k)
    return DirichletCharacter(
        modulus=k,
        angles=_angles_for(k, exponents),
        label=_label_of(exponents, orders),
        exponents=tuple(exponents),
        orders=orders,
    )


def build_character_table(k):
    """All phi(k) characters mod k, ordered lexicographically by generator exponents."""
    totient(k)
    _, orders, _ = _unit_group(int(k))
    chars = tuple(_character(int(k), exps) for exps in product(*(range(s) for s in orders)))
    return CharacterTable(modulus=int(k), characters=chars)


def principal(k):
    totient(k)
    _, orders, _ = _unit_group(int(k))
    return _character(int(k), (0,) * len(orders))


def trivial():
    """The character mod 1, identically one."""
    return principal(1)


def character(k, index):
    """Character number ``index`` of the table mod k."""
    table = build_character_table(k)
    if not 0 <= index < len(table):
        raise IndexError(f"character index {index} out of range for modulus {k} (phi={len(table)})")
    return table[index]


def evaluate(chi, n):
    return complex(chi.values[int(n) % chi.modulus])


def char_power(chi, m):
    """Pointwise m-th power; chi^0 is the principal character."""
    m = int(m)
    if m < 0:
        raise ValueError("exponent must be non-negative")
    exps = tuple(m * a % s for a, s in zip(chi.exponents, chi.orders))
    return _character(chi.modulus, exps)
