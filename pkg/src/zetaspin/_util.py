import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

# exact values for angles that are multiples of a quarter turn
_QUARTER_TURNS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


def root_of_unity(turns):
    """exp(2*pi*i*turns) for a rational number of turns, exact on quarter turns."""
    turns = Fraction(turns) % 1
    if turns in _QUARTER_TURNS:
        return _QUARTER_TURNS[turns]
    angle = 2 * np.pi * float(turns)
    return complex(np.cos(angle), np.sin(angle))


def thread_count():
    try:
        n = int(os.environ.get("ZETASPIN_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def ordered_map(fn, items):
    """Map ``fn`` over ``items`` keeping input order; threaded if ZETASPIN_THREADS > 1."""
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def primes_upto(n):
    """All primes <= n (sieve of Eratosthenes) as an int64 array."""
    n = int(n)
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(n**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return np.flatnonzero(sieve).astype(np.int64)


def is_prime(n):
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    q = 3
    while q * q <= n:
        if n % q == 0:
            return False
        q += 2
    return True


def factorize(n):
    """Prime factorization of a positive integer as a list of (p, e)."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
        q += 1 if q == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out
