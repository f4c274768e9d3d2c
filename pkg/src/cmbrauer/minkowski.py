"""Minkowski's constant M(n): the lcm of orders of finite subgroups of GL_n(Z)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod

from sympy import primerange


@dataclass(frozen=True)
class MinkowskiConstant:
    n: int
    value: int
    factorization: tuple[tuple[int, int], ...]

    def __post_init__(self):
        assert self.value == prod(p ** e for p, e in self.factorization)


@lru_cache(maxsize=None)
def minkowski_M(n: int) -> MinkowskiConstant:
    """M(n) = prod over primes p <= n+1 of p^e_p, e_p = sum_i floor(n / (p^i (p-1)))."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    factorization = []
    for p in primerange(2, n + 2):
        e, q = 0, p - 1
        while q <= n:
            e += n // q
            q *= p
        assert e >= 1  # p <= n+1 guarantees at least the i=0 term
        factorization.append((p, e))
    value = prod(p ** e for p, e in factorization)
    return MinkowskiConstant(n, value, tuple(factorization))


def algebraic_brauer_bound(r: int) -> int:
    """M(r)^r, bounding the algebraic Brauer quotient of a K3 of Picard rank r."""
    if not 1 <= r <= 20:
        raise ValueError(f"Picard rank of a K3 surface lies in [1, 20], got {r}")
    return minkowski_M(r).value ** r
