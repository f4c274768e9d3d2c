"""Structure and order of the transcendental Brauer group of E x E for a CM
elliptic curve E: the exact shapes in the maximal-order case, order bounds in
the non-maximal case, and the divisibility / uniform bounds they feed."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

from sympy import isprime, primerange

from .quadratic import FundamentalDiscriminant, unit_index, kronecker_symbol


def _ord(ell: int, n: int) -> int:
    assert n != 0
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


@dataclass(frozen=True)
class GaloisFlags:
    """Galois data of the base field k: whether K sits inside k, and whether
    the 2-torsion of E is k-rational."""

    K_in_k: bool
    two_torsion_rational: bool

    def check_two_torsion_consistency(self, f: int, delta_k: int) -> None:
        # rational 2-torsion with K outside k forces 2 | f * Delta_K
        if not self.K_in_k and self.two_torsion_rational and (f * delta_k) % 2 != 0:
            raise ValueError(
                f"rational 2-torsion with K not in k needs 2 | f*Delta_K, got f={f}, Delta_K={delta_k}"
            )


@dataclass(frozen=True)
class BrauerShape:
    """Finite abelian group as a list of cyclic prime-power factor orders."""

    cyclic_factors: tuple[int, ...]

    def __post_init__(self):
        per_prime: dict[int, int] = {}
        for q in self.cyclic_factors:
            assert q >= 2
            base = _prime_power_base(q)
            per_prime[base] = per_prime.get(base, 0) + 1
        # rank at most 2 at every prime
        assert all(v <= 2 for v in per_prime.values()), self.cyclic_factors

    @property
    def order(self) -> int:
        return prod(self.cyclic_factors)


def _prime_power_base(q: int) -> int:
    for p in primerange(2, q + 1):
        if q % p == 0:
            qq = q
            while qq % p == 0:
                qq //= p
            if qq != 1:
                raise AssertionError(f"{q} is not a prime power")
            return p
    raise AssertionError(f"{q} is not a prime power")


@dataclass(frozen=True)
class MValuation:
    """Map ell -> m_ell with the combined conductor c = prod ell^m_ell."""

    valuations: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        for ell, m in self.valuations:
            if not isprime(ell):
                raise ValueError(f"valuation key {ell} is not prime")
            if m < 0:
                raise ValueError(f"valuation at {ell} must be nonnegative, got {m}")
        ells = [ell for ell, _ in self.valuations]
        assert len(set(ells)) == len(ells), "duplicate primes in valuation map"

    @property
    def c(self) -> int:
        return prod(ell ** m for ell, m in self.valuations)


def brauer_shape_maximal(ell: int, m: int, flags: GaloisFlags) -> BrauerShape:
    """ell-primary part of Br(E x E)/Br_1 for E with CM by the maximal order:
    (Z/ell^m)^2 if K in k; Z/2^m x Z/2 if K not in k, ell = 2, rational
    2-torsion; Z/ell^m otherwise."""
    if not isprime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    if m < 0:
        raise ValueError(f"m must be nonnegative, got {m}")
    if flags.K_in_k:
        return BrauerShape((ell ** m, ell ** m) if m else ())
    if ell == 2 and flags.two_torsion_rational:
        if m < 1:
            raise ValueError("rational 2-torsion forces m >= 1 at ell = 2")
        return BrauerShape((2 ** m, 2))
    return BrauerShape((ell ** m,) if m else ())


def fixed_endomorphisms(f: int, delta_k: int, n: int, K_in_k: bool) -> tuple[int, ...]:
    """Galois-fixed part of End x Z/n as a tuple of cyclic orders:
    (n, n) if K in k; (n, 2) if 2 | f*Delta_K and 2 | n; else (n,)."""
    FundamentalDiscriminant(delta_k)
    if f < 1 or n < 1:
        raise ValueError(f"need f >= 1 and n >= 1, got {(f, n)}")
    if K_in_k:
        factors = (n, n)
    elif (f * delta_k) % 2 == 0 and n % 2 == 0:
        factors = (n, 2)
    else:
        factors = (n,)
    return tuple(q for q in factors if q > 1)


def brauer_order_bound_nonmaximal(
    ell: int,
    f: int,
    m_prime: int,
    flags: GaloisFlags,
    delta_k: int,
    isogenous_two_torsion_nonrational: bool = False,
) -> int:
    """Max order of the ell-part of Br(E x E)/Br_1 for E with CM by the order
    of conductor f, from m_prime = m_ell of the maximal-order isogenous curve.

    K in k: ell^(2(m' + ord_ell f)).  Otherwise ell^(m' + ord_ell f), except
    ell = 2 with rational 2-torsion, where the group is Z/2^a x Z/2 with
    a <= m' + ord_2 f + 1, and the +1 drops unless 2 | Delta_K and the
    2-torsion of the maximal-order curve is not k-rational (a fact about
    curve data, so it is an explicit input flag).
    """
    if not isprime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    if f < 1 or m_prime < 0:
        raise ValueError(f"need f >= 1 and m_prime >= 0, got {(f, m_prime)}")
    FundamentalDiscriminant(delta_k)
    flags.check_two_torsion_consistency(f, delta_k)
    v = _ord(ell, f) if f > 1 else 0
    if flags.K_in_k:
        return ell ** (2 * (m_prime + v))
    if ell == 2 and flags.two_torsion_rational:
        if f % 2 != 0 and isogenous_two_torsion_nonrational:
            # odd-degree isogeny transports rational 2-torsion to the maximal curve
            raise ValueError("f odd and E[2] = E[2](k) contradict nonrational 2-torsion upstairs")
        a = m_prime + v
        if delta_k % 2 == 0 and isogenous_two_torsion_nonrational:
            a += 1
        return 2 ** (a + 1)
    return ell ** (m_prime + v)


def divisibility_bound(f: int, d: int, delta_k: int) -> int:
    """2 f^2 d^4 * prod ell^2 over primes ell not dividing d with
    (ell - (Delta_K/ell)) | unit_index(ell) * d; the order of the
    transcendental Brauer group divides this."""
    if f < 1 or d < 1:
        raise ValueError(f"need f >= 1 and d >= 1, got {(f, d)}")
    FundamentalDiscriminant(delta_k)
    out = 2 * f * f * d ** 4
    # ell - (Delta_K/ell) >= ell - 1 must divide u*d <= 6d, so no prime past 6d+1 qualifies
    for ell in primerange(2, 6 * d + 2):
        if d % ell == 0:
            continue
        if (unit_index(delta_k, ell) * d) % (ell - kronecker_symbol(delta_k, ell)) == 0:
            out *= ell * ell
    return out


def uniform_bound_EE(f: int | None, d: int, delta_k: int) -> int:
    """Uniform bound on the order: at d = 1 the exact table (4 over Q(sqrt(-7)),
    8 over Q(i), 9 over Q(zeta_3), 1 otherwise); at d >= 2, f^2 d^4, or d^8
    when the conductor is unknown."""
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    FundamentalDiscriminant(delta_k)
    if d == 1:
        return {-7: 4, -4: 8, -3: 9}.get(delta_k, 1)
    if f is None:
        return d ** 8
    if f < 1:
        raise ValueError(f"conductor must be positive, got {f}")
    return f * f * d ** 4


def geometric_brauer_invariants_order(delta_k: int, m: MValuation) -> int:
    """|Delta_K| * c^2 for c = prod ell^m_ell: order of the Galois-fixed
    geometric Brauer group when E has CM by the maximal order."""
    FundamentalDiscriminant(delta_k)
    return abs(delta_k) * m.c ** 2
