"""Prime tables and the multiplicative functions behind the density formulas.

Conventions:

* ``mobius`` is the Moebius function with ``mobius[1] = 1``.
* ``jordan_totient(r, a)`` is ``a**r * prod(1 - p**-r)`` over primes ``p | a``;
  ``r = 1`` is Euler's phi.  Always an integer.
* ``psi(s, a)`` is the multiplicative function with ``psi(s, p**n) =
  p**n * (1 + s/p)``, i.e. ``a * prod(1 + s/p)`` over ``p | a``.  ``s = 0`` is
  the identity map, ``s = -1`` is Euler's phi, ``s = 1`` is the classical
  Dedekind psi.  Integer-valued for integer ``s >= -1``.
* ``toth_factor(r, u)`` is the rational ``prod((p - 1) / (p + r - 1))`` over
  ``p | u``, which equals ``phi(u) / psi(r - 1, u)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .errors import CapacityError

TABLE_LIMIT_MAX = 10**8


@dataclass(frozen=True)
class ArithTables:
    """Sieve output on ``[0, limit]``: smallest prime factors, Moebius, primes.

    ``spf[m]`` is the smallest prime factor of ``m`` for ``2 <= m <= limit``
    (``spf[0] = spf[1] = 0``).  ``mobius[m]`` is mu(m) as int8.  ``primes`` is
    the ascending array of primes ``<= limit``.
    """

    limit: int
    spf: np.ndarray
    mobius: np.ndarray
    primes: np.ndarray

    def squarefree_up_to(self, bound: int) -> np.ndarray:
        """Ascending int64 array of squarefree integers in ``[1, bound]``."""
        if bound > self.limit:
            raise ValueError(f"bound {bound} exceeds table limit {self.limit}")
        return np.flatnonzero(self.mobius[: bound + 1]).astype(np.int64)


def build_tables(limit: int) -> ArithTables:
    """Sieve smallest prime factors and Moebius values up to ``limit``.

    ``limit`` must lie in ``[2, 10**8]``; the upper cap exists because the
    tables are dense arrays (spf alone is 4 bytes per entry).
    """
    if not isinstance(limit, int) or limit < 2:
        raise ValueError(f"limit must be an integer >= 2, got {limit!r}")
    if limit > TABLE_LIMIT_MAX:
        raise CapacityError(f"limit {limit} exceeds the table cap {TABLE_LIMIT_MAX}")

    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    primes = np.flatnonzero(sieve).astype(np.int64)

    spf = np.zeros(limit + 1, dtype=np.int32)
    mobius = np.ones(limit + 1, dtype=np.int8)
    mobius[0] = 0
    for p in primes:
        p = int(p)
        seg = spf[p::p]
        seg[seg == 0] = p
        mobius[p::p] *= -1
        if p * p <= limit:
            mobius[p * p :: p * p] = 0

    return ArithTables(limit=limit, spf=spf, mobius=mobius, primes=primes)


def factorize(m: int, tables: ArithTables) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``m`` as ``((p1, e1), ...)``, using the spf table.

    Requires ``1 <= m <= tables.limit``.  ``factorize(1) == ()``.
    """
    if not 1 <= m <= tables.limit:
        raise ValueError(f"m must be in [1, {tables.limit}], got {m}")
    out: list[tuple[int, int]] = []
    spf = tables.spf
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return tuple(out)


def factor_small(m: int) -> tuple[tuple[int, int], ...]:
    """Trial-division factorization for table-free use on small arguments."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    out: list[tuple[int, int]] = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def prime_divisors(m: int) -> tuple[int, ...]:
    """Distinct primes dividing ``m`` (empty for ``m = 1``)."""
    return tuple(p for p, _ in factor_small(m))


def radical(m: int) -> int:
    """Product of the distinct primes dividing ``m``; ``radical(1) == 1``."""
    out = 1
    for p in prime_divisors(m):
        out *= p
    return out


def mobius_of(m: int) -> int:
    """mu(m) by trial division (use the table for bulk work)."""
    fac = factor_small(m)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(a: int) -> int:
    """Euler's totient."""
    return jordan_totient(1, a)


def jordan_totient(r: int, a: int) -> int:
    """Jordan totient ``a**r * prod(1 - p**-r)`` over ``p | a``.

    ``r >= 1``, ``a >= 1``.  Multiplicative; on prime powers equals
    ``p**(r*e) - p**(r*(e-1))``.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    out = 1
    for p, e in factor_small(a):
        out *= p ** (r * (e - 1)) * (p**r - 1)
    return out


def psi(s: int, a: int) -> int:
    """The multiplicative function with ``psi(s, p**n) = p**n * (1 + s/p)``.

    ``s`` must be an integer ``>= -1`` (so values stay nonnegative integers);
    ``a >= 1``.  ``psi(0, a) = a``; ``psi(-1, a) = phi(a)``.
    """
    if not isinstance(s, int) or s < -1:
        raise ValueError(f"s must be an integer >= -1, got {s!r}")
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    out = 1
    for p, e in factor_small(a):
        out *= p ** (e - 1) * (p + s)
    return out


def squarefree_divisor_count(u: int) -> int:
    """Number of squarefree divisors of ``u``, i.e. ``2**omega(u)``."""
    if u < 1:
        raise ValueError(f"u must be >= 1, got {u}")
    return 1 << len(factor_small(u))


def toth_factor(r: int, u: int) -> Fraction:
    """Exact ``prod((p - 1) / (p + r - 1))`` over the primes ``p | u``.

    equals ``Fraction(euler_phi(u), psi(r - 1, u))`` in lowest terms; kept as
    its own product so the identity can be tested rather than assumed.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if u < 1:
        raise ValueError(f"u must be >= 1, got {u}")
    out = Fraction(1)
    for p in prime_divisors(u):
        out *= Fraction(p - 1, p + r - 1)
    return out


def squarefree_divisors_signed(m: int) -> tuple[tuple[int, int], ...]:
    """All ``(d, mu(d))`` with ``d`` running over divisors of ``radical(m)``.

    Handy for one-variable Moebius sums; ``2**omega(m)`` entries.
    """
    pairs = [(1, 1)]
    for p in prime_divisors(m):
        pairs += [(d * p, -s) for d, s in pairs]
    return tuple(pairs)
