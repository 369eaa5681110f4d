"""Exact integer number theory used by the order construction.

Everything here works on Python ints. Factorization and primality are
delegated to sympy; the residue-symbol machinery is written out so the
conventions (root choice, cofactor normalization, Hilbert symbol at 2)
are pinned down locally.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Mapping, Sequence

from sympy import factorint, isprime
from sympy.ntheory.modular import crt as _sympy_crt

from .errors import NonResidueError, PrimeSearchError, UnsolvableSystemError

INFINITY = "inf"
PRIME_SEARCH_STEPS = 10**6


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if prod(p**e for p, e in self.factors) != self.value:
            raise ValueError("factors do not multiply to value")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def exponent(self, p: int) -> int:
        return self.as_dict().get(p, 0)


@dataclass(frozen=True)
class CongruenceSystem:
    """Congruences ``x = r (mod m)`` with pairwise coprime moduli."""

    congruences: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        normalized = []
        for r, m in self.congruences:
            if m < 1:
                raise ValueError(f"modulus must be positive, got {m}")
            normalized.append((r % m, m))
        moduli = [m for _, m in normalized]
        for idx, m in enumerate(moduli):
            for n in moduli[idx + 1:]:
                if gcd(m, n) != 1:
                    raise UnsolvableSystemError(f"moduli {m} and {n} are not coprime")
        object.__setattr__(self, "congruences", tuple(normalized))

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "CongruenceSystem":
        return cls(tuple(pairs))

    @property
    def modulus(self) -> int:
        return prod(m for _, m in self.congruences)


def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def factorize(n: int) -> Factorization:
    if n < 1:
        raise ValueError(f"factorize expects a positive integer, got {n}")
    return Factorization(n, tuple(sorted(factorint(n).items())))


def valuation(n: int, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero integer ``n``."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    if p < 2:
        raise ValueError(f"{p} is not a prime")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_off(n: int, p: int) -> tuple[int, int]:
    """Return ``(v, u)`` with ``n = p**v * u`` and ``p`` not dividing ``u``."""
    v = valuation(n, p)
    return v, n // p**v


def legendre(a: int, p: int) -> int:
    """Legendre symbol via Euler's criterion."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"legendre needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert_symbol(a: int, b: int, place: int | str) -> int:
    """Hilbert symbol ``(a, b)_v`` over Q at a prime ``v`` or at ``INFINITY``.

    For odd p the classical formula
    ``(-1)^(alpha*beta*eps(p)) * (u/p)^beta * (v/p)^alpha`` is used after
    writing ``a = p^alpha u`` and ``b = p^beta v``; at 2 the exponent is
    ``eps(u)eps(v) + alpha*omega(v) + beta*omega(u)``.
    """
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero arguments")
    if place == INFINITY:
        return -1 if (a < 0 and b < 0) else 1
    p = int(place)
    if not is_prime(p):
        raise ValueError(f"{place} is not a place of Q")
    alpha, u = split_off(a, p)
    beta, v = split_off(b, p)
    if p == 2:
        e = _eps(u) * _eps(v) + alpha * _omega(v) + beta * _omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    lu = legendre(u, p) ** (beta % 2)
    lv = legendre(v, p) ** (alpha % 2)
    return sign * lu * lv


def sqrt_mod(a: int, p: int) -> int:
    """Least nonnegative ``x`` with ``x*x = a (mod p)`` (Tonelli-Shanks)."""
    if legendre(a, p) != 1:
        raise NonResidueError(f"{a} is not a nonzero square mod {p}")
    a %= p
    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
        return min(x, p - x)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``.

    Cofactors come from the plain Euclidean recursion, which yields the
    minimal solution: ``|s| <= |b|/(2g)`` and ``|t| <= |a|/(2g)``.
    """
    if a == 0 and b == 0:
        raise ValueError("ext_gcd(0, 0) is undefined")
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        s0, s1 = s1, s0 - k * s1
        t0, t1 = t1, t0 - k * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


def crt(system: CongruenceSystem) -> tuple[int, int]:
    modulus = system.modulus
    if not system.congruences:
        return 0, 1
    residues = [r for r, _ in system.congruences]
    moduli = [m for _, m in system.congruences]
    r, _ = _sympy_crt(moduli, residues)
    return int(r) % modulus, modulus


def least_nonresidue(p: int) -> int:
    if p == 2:
        raise ValueError("no quadratic nonresidues mod 2")
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


def find_prime(
    system: CongruenceSystem,
    forbidden: Iterable[int] = (),
    max_steps: int = PRIME_SEARCH_STEPS,
) -> int:
    """Smallest odd prime in the CRT class of ``system`` outside ``forbidden``."""
    r, m = crt(system)
    if gcd(r, m) != 1 and m > 1:
        # the class can hold at most the single prime gcd(r, m)
        only = gcd(r, m)
        if r == only and is_prime(only) and only != 2 and only not in set(forbidden):
            return only
        raise UnsolvableSystemError(f"class {r} mod {m} contains no usable prime")
    banned = set(forbidden) | {2}
    candidate = r if r > 0 else m
    for _ in range(max_steps):
        if candidate not in banned and is_prime(candidate):
            return candidate
        candidate += m
    raise PrimeSearchError(f"no prime in {r} mod {m} within {max_steps} steps")


def radical(primes: Iterable[int]) -> int:
    return prod(primes)


def product_of(mapping: Mapping[int, int] | Sequence[tuple[int, int]]) -> int:
    items = mapping.items() if isinstance(mapping, Mapping) else mapping
    return prod(p**e for p, e in items)
