"""Point counts, character values and the sampled m_ell upper bound."""

from math import isqrt

import pytest
from sympy import primerange

from cmbrauer.grossencharakter import (
    CurveOverQ,
    MEstimate,
    count_points_ap,
    estimate_m,
    psi_from_ap,
)

EI = CurveOverQ(-1, 0, -4)        # y^2 = x^3 - x, CM by the Gaussian integers
EZ = CurveOverQ(0, 1, -3)         # y^2 = x^3 + 1, CM by the Eisenstein integers
E7 = CurveOverQ(-35, -98, -7)     # j = -3375, CM by the maximal order of Q(sqrt(-7))


def _oracle_ap(curve: CurveOverQ, p: int) -> int:
    # Euler-criterion character sum, independent of the residue-table kernel
    total = 0
    for x in range(p):
        v = (x * x * x + curve.a4 * x + curve.a6) % p
        if v == 0:
            continue
        total += 1 if pow(v, (p - 1) // 2, p) == 1 else -1
    return -total


def test_curve_validation():
    with pytest.raises(ValueError):
        CurveOverQ(0, 0, -4)          # singular
    with pytest.raises(ValueError):
        CurveOverQ(-1, 0, -5)         # -5 is not an order discriminant
    with pytest.raises(ValueError):
        CurveOverQ(-1, 0, 4)


def test_point_count_examples():
    assert count_points_ap(EI, 5) == -2
    assert count_points_ap(EI, 3) == 0
    assert count_points_ap(EZ, 5) == 0


def test_point_count_rejects_bad_primes():
    with pytest.raises(ValueError):
        count_points_ap(EI, 2)
    with pytest.raises(ValueError):
        count_points_ap(EZ, 3)       # 3 divides 4*0^3 + 27
    with pytest.raises(ValueError):
        count_points_ap(EI, 4)
    with pytest.raises(ValueError):
        count_points_ap(EI, 10 ** 6 + 3)


def test_point_count_hasse_bound():
    for p in primerange(3, 200):
        if EI.has_good_reduction(p):
            assert count_points_ap(EI, p) ** 2 <= 4 * p


def test_psi_examples():
    psi = psi_from_ap(-2, 5, -4)
    assert (psi.x, psi.y) == (3, 2)          # 3 + 2*omega = -1 + 2i
    assert psi.trace == -2 and psi.norm == 5
    conj = psi_from_ap(2, 5, -4)
    assert (conj.x, conj.y) == (5, 2)        # 5 + 2*omega = 1 + 2i
    assert conj.trace == 2 and conj.norm == 5


def test_psi_rejections():
    with pytest.raises(ValueError):
        psi_from_ap(0, 5, -4)                 # supersingular
    with pytest.raises(ValueError):
        psi_from_ap(1, 5, -4)                 # -19 is not t^2 * (-4)
    with pytest.raises(ValueError):
        psi_from_ap(-2, 5, -3)                # wrong asserted field
    with pytest.raises(ValueError):
        psi_from_ap(-2, 5, -16)               # order disc, not fundamental


def test_psi_norm_trace_across_primes():
    for curve in (EI, EZ, E7):
        for p in primerange(3, 300):
            if not curve.has_good_reduction(p):
                continue
            a_p = count_points_ap(curve, p)
            if a_p == 0:
                continue
            psi = psi_from_ap(a_p, p, curve.cm_disc)
            assert psi.norm == p
            assert psi.trace == a_p
            assert a_p * a_p - 4 * p == psi.y ** 2 * curve.cm_disc


def test_estimate_m_examples():
    assert estimate_m(EI, 2, 10) == MEstimate(m_hat=1, samples_used=1)
    assert estimate_m(EI, 2, 1000).m_hat == 1
    for ell in (3, 5, 7):
        est = estimate_m(EI, ell, 1000)
        assert est.m_hat == 0
        assert est.samples_used == 1          # first ordinary sample certifies 0


def test_estimate_m_budget_monotone():
    previous = None
    for budget in (10, 50, 100, 500, 1000):
        m_hat = estimate_m(EI, 2, budget).m_hat
        if previous is not None:
            assert m_hat <= previous
        previous = m_hat


def test_estimate_m_product_small():
    # combined conductor estimate prod ell^m_hat stays within the conductor cap
    for curve, cap in ((EI, 3), (EZ, 7), (E7, 3)):
        c_hat = 1
        for ell in (2, 3, 5, 7):
            c_hat *= ell ** estimate_m(curve, ell, 1000).m_hat
        assert c_hat <= cap


def test_estimate_m_diagnostics():
    with pytest.raises(ValueError, match="no ordinary good prime"):
        estimate_m(EI, 2, 3)
    with pytest.raises(ValueError):
        estimate_m(EI, 4, 100)                # ell must be prime
    with pytest.raises(ValueError):
        estimate_m(EI, 2, 0)
    with pytest.raises(ValueError):
        estimate_m(CurveOverQ(-1, 0, -16), 2, 100)   # needs the maximal order


def test_point_count_vs_euler_oracle():
    for curve in (EI, EZ, E7):
        for p in primerange(3, 250):
            if curve.has_good_reduction(p):
                assert count_points_ap(curve, p) == _oracle_ap(curve, p)
