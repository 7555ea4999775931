"""Integer helpers used by the Legendre solver and the field layer."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from sympy import isprime

from vspforms.errors import FactorizationLimitError

TRIAL_DIVISION_LIMIT = 10**6


def factor(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division up to 10**6.

    A cofactor left over after trial division is accepted when it is a prime
    or the square of a prime; anything else raises ``FactorizationLimitError``.
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p, step = 5, 2
    while p * p <= n and p <= TRIAL_DIVISION_LIMIT:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        if p * p > n or isprime(n):
            out[n] = out.get(n, 0) + 1
        else:
            r = isqrt(n)
            if r * r == n and isprime(r):
                out[r] = out.get(r, 0) + 2
            else:
                raise FactorizationLimitError(
                    f"cofactor {n} has no prime factor below {TRIAL_DIVISION_LIMIT} "
                    "and is neither prime nor a prime square"
                )
    return out


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(a, s)`` with ``n == a * s**2`` and ``a`` squarefree (sign kept in ``a``)."""
    if n == 0:
        raise ValueError("0 has no squarefree decomposition")
    a, s = (1 if n > 0 else -1), 1
    for p, e in factor(n).items():
        s *= p ** (e // 2)
        if e % 2:
            a *= p
    return a, s


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factor(n).values())


def rational_squarefree(x: Fraction) -> tuple[int, Fraction]:
    """Write a nonzero rational as ``a * r**2`` with ``a`` a squarefree integer."""
    x = Fraction(x)
    a, s = squarefree_decomposition(x.numerator * x.denominator)
    return a, Fraction(s, x.denominator)


def is_square_mod_prime(r: int, p: int) -> bool:
    """Euler's criterion; every residue is a square modulo 2."""
    r %= p
    if p == 2 or r == 0:
        return True
    return pow(r, (p - 1) // 2, p) == 1


def integer_sqrt_exact(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None
