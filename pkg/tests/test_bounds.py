"""Bound formula registry: frozen values, rounding soundness, GRH gating."""

from fractions import Fraction

import pytest

from cmbrauer.bounds import (
    FORMULAS,
    GRH_IDS,
    BoundReport,
    compose_intro_bound,
    eval_bound,
    field_tower_constants,
    unit_group_order,
)
from cmbrauer.minkowski import minkowski_M
from cmbrauer.rounding import COARSE_EPS, DEFAULT_EPS, FINE_EPS

PI_REF = Fraction(3141592653589793238462643383279502884197, 10 ** 39)

# one valid input dict per formula, reused by the sweep tests
SAMPLE_INPUTS = {
    "uncond_lattice": {"disc_lambda": 28, "d": 2},
    "lattice_k_isog": {"disc_lambda": -7, "L_deg": 2, "delta_k": -7},
    "ab_lattice": {"disc_lambda": -4, "L_deg": 4, "delta_k": -4},
    "ab_GRH": {"L_deg": 3},
    "kummer_GRH": {"L_deg": 5},
    "singular_cover_GRH": {"d": 2},
    "isog_pair": {"f1": 1, "f2": 2, "delta_k": -8, "M_deg": 2},
    "isog_pair_GRH": {"M_over_k_deg": 4, "k_deg": 2},
    "nonisog_GRH": {"compositum_deg": 8, "d": 2},
    "kummer_nonisog_GRH": {"d": 2},
    "isogeny_degree": {"f1": 2, "f2": 3, "delta_k": -11},
    "isogeny_degree_GRH": {"d": 3},
    "faltings_GRH": {"d": 2},
    "isogeny_brauer_multiplier": {"d": 2, "g": 2, "rho": 3},
}


def _run(bound_id, inputs, **kw):
    return eval_bound(bound_id, inputs, assume_grh=bound_id in GRH_IDS, **kw)


def test_registry_complete():
    assert set(FORMULAS) == set(SAMPLE_INPUTS)
    assert GRH_IDS == {
        "ab_GRH",
        "kummer_GRH",
        "singular_cover_GRH",
        "isog_pair_GRH",
        "nonisog_GRH",
        "kummer_nonisog_GRH",
        "isogeny_degree_GRH",
        "faltings_GRH",
    }


def test_isog_pair_frozen_values():
    # 2^2 * pi^-2 * |Delta_K| * M^4 at f1 = f2 = 1, Delta_K = -4, M = 2 is 256/pi^2
    r = eval_bound("isog_pair", {"f1": 1, "f2": 1, "delta_k": -4, "M_deg": 2})
    assert r.integer_bound == 25
    assert not r.conditional
    assert r.provenance == "bounds:isog_pair"
    h1 = eval_bound(
        "isog_pair",
        {"f1": 1, "f2": 1, "delta_k": -4, "M_deg": 2, "class_number_one": True},
    )
    assert h1.integer_bound == 16
    assert h1.exact_symbolic["pi_exp"] == 0


def test_isogeny_degree_frozen_values():
    assert eval_bound("isogeny_degree", {"f1": 1, "delta_k": -4}).integer_bound == 1
    assert eval_bound("isogeny_degree", {"f1": 2, "f2": 3, "delta_k": -11}).integer_bound == 12


def test_multiplier_exact():
    assert eval_bound("isogeny_brauer_multiplier", {"d": 3, "g": 2, "rho": 4}).integer_bound == 9
    assert eval_bound("isogeny_brauer_multiplier", {"d": 2, "g": 2, "rho": 1}).integer_bound == 32
    for d in (1, 2, 5):
        for g in (1, 2, 3):
            for rho in range(1, g * g + 1):
                r = eval_bound("isogeny_brauer_multiplier", {"d": d, "g": g, "rho": rho})
                assert r.integer_bound == d ** (g * (2 * g - 1) - rho)
    for rho in (0, 5):
        with pytest.raises(ValueError):
            eval_bound("isogeny_brauer_multiplier", {"d": 2, "g": 2, "rho": rho})


def test_grh_log_one_is_exact():
    # ln 1 = 0 collapses the height factor to an exact rational
    assert eval_bound("faltings_GRH", {"d": 1}, assume_grh=True).integer_bound == 297
    assert (
        eval_bound("isogeny_degree_GRH", {"d": 1}, assume_grh=True).integer_bound
        == 3010628766
    )
    exact = (Fraction(34, 10) ** 2 * 10 ** 8 * (Fraction(273, 100) * 109) ** 4).__floor__()
    for bid in ("ab_GRH", "kummer_GRH"):
        assert eval_bound(bid, {"L_deg": 1}, assume_grh=True).integer_bound == exact


def test_uncond_lattice_sound_and_tight():
    c = Fraction(2 ** 34 * 3 ** 3) * minkowski_M(20).value ** 4
    true = c / (PI_REF * PI_REF)
    got = eval_bound("uncond_lattice", {"disc_lambda": 1, "d": 1}).integer_bound
    assert got >= true.__floor__()
    assert got <= (true * (1 + Fraction(5, 10 ** 6))).__floor__()
    fine = eval_bound("uncond_lattice", {"disc_lambda": 1, "d": 1}, eps=FINE_EPS).integer_bound
    assert true.__floor__() <= fine <= (true * (1 + Fraction(1, 10 ** 11))).__floor__()


def test_grh_gate():
    for bid in GRH_IDS:
        with pytest.raises(ValueError):
            eval_bound(bid, SAMPLE_INPUTS[bid])
        r = eval_bound(bid, SAMPLE_INPUTS[bid], assume_grh=True)
        assert r.conditional
    # the flag is harmless on unconditional formulas
    r = eval_bound("isog_pair", SAMPLE_INPUTS["isog_pair"], assume_grh=True)
    assert not r.conditional


def test_input_validation():
    with pytest.raises(KeyError):
        eval_bound("not_a_bound", {})
    with pytest.raises(ValueError):
        eval_bound("uncond_lattice", {"disc_lambda": 4})
    with pytest.raises(ValueError):
        eval_bound("uncond_lattice", {"disc_lambda": 4, "d": 1, "extra": 3})
    with pytest.raises(ValueError):
        eval_bound("uncond_lattice", {"disc_lambda": 0, "d": 1})
    with pytest.raises(ValueError):
        eval_bound("uncond_lattice", {"disc_lambda": 4, "d": 0})
    with pytest.raises(ValueError):
        eval_bound("uncond_lattice", {"disc_lambda": 4, "d": True})
    with pytest.raises(ValueError):
        eval_bound("isog_pair", {"f1": 1, "f2": 1, "delta_k": -4, "M_deg": 2, "class_number_one": 1})
    with pytest.raises(ValueError):
        eval_bound("isog_pair", {"f1": 1, "f2": 1, "delta_k": -12, "M_deg": 2})


def test_report_shape():
    r = _run("kummer_nonisog_GRH", SAMPLE_INPUTS["kummer_nonisog_GRH"])
    assert isinstance(r, BoundReport)
    assert set(r.exact_symbolic) == {"rational", "pi_exp", "sqrt_arg", "log_factors", "expression"}
    assert r.rounding_certificate["pi_eps"] == str(COARSE_EPS)
    assert r.rounding_certificate["fn_eps"] == str(DEFAULT_EPS)
    assert "ln_0" in r.rounding_certificate
    assert r.integer_bound > 0


def test_tighter_eps_never_increases():
    for bid, inputs in SAMPLE_INPUTS.items():
        default = _run(bid, inputs).integer_bound
        coarse = _run(bid, inputs, eps=COARSE_EPS).integer_bound
        mid = _run(bid, inputs, eps=DEFAULT_EPS).integer_bound
        fine = _run(bid, inputs, eps=FINE_EPS).integer_bound
        assert fine <= mid <= coarse, bid
        assert fine <= default <= coarse, bid


def test_monotone_in_inputs():
    for d in range(1, 5):
        prev = None
        for disc in (4, 12, 28, 100):
            v = eval_bound("uncond_lattice", {"disc_lambda": disc, "d": d}).integer_bound
            if prev is not None:
                assert v >= prev
            prev = v
    prev = None
    for f1 in range(1, 6):
        v = eval_bound("isog_pair", {"f1": f1, "f2": 2, "delta_k": -8, "M_deg": 2}).integer_bound
        if prev is not None:
            assert v > prev
        prev = v
    prev = None
    for d in range(1, 6):
        v = eval_bound("kummer_nonisog_GRH", {"d": d}, assume_grh=True).integer_bound
        if prev is not None:
            assert v > prev
        prev = v


def test_tower_constants():
    t = field_tower_constants()
    m20 = minkowski_M(20).value
    m18 = minkowski_M(18).value
    expected = {
        "ab_endo": 48,
        "kummer_full": 2 ** 9 * 3 * m20,
        "singular_cover": 2 ** 10 * 3 * m20,
        "kummer_nonisog": 2 ** 6 * m18,
        "rank20_double": 2 * m20,
        "kummer_descent": 2 ** 5 * 3 * m20,
        "rank18_double": 2 * m18,
        "rank18_quad": 2 ** 2 * m18,
    }
    assert {k: v.value for k, v in t.items()} == expected
    for name, entry in t.items():
        assert entry.provenance == f"towers:{name}"
        assert entry.description
    assert t["singular_cover"].value == 2 * t["kummer_full"].value
    assert t["kummer_full"].value == 16 * t["kummer_descent"].value


def test_unit_group_order():
    assert unit_group_order(-3) == 6
    assert unit_group_order(-4) == 4
    for dk in (-7, -8, -11, -163):
        assert unit_group_order(dk) == 2
    with pytest.raises(ValueError):
        unit_group_order(-12)


def test_compose_intro_identity():
    assert Fraction(1, 2 ** 2) * (2 ** 9 * 3) ** 4 == 2 ** 34 * 3 ** 4


def test_compose_intro_bound():
    r = compose_intro_bound(16, 1)
    plain = eval_bound("uncond_lattice", {"disc_lambda": 16, "d": 1})
    assert r.integer_bound == plain.integer_bound
    cc = r.cross_check
    assert set(cc) == {
        "specialized_bound_id",
        "specialized_L_deg",
        "specialized_integer_bound",
        "identity",
        "identity_holds",
        "ratio_specialized_over_intro",
        "specialized_le_intro",
    }
    assert cc["specialized_bound_id"] == "lattice_k_isog"
    assert cc["identity_holds"] is True
    assert cc["ratio_specialized_over_intro"] == "3/4"
    assert cc["specialized_le_intro"] is True


def test_compose_specialization_never_worse():
    # ratio 3/|Delta_K| <= 1 for every imaginary quadratic field
    for dk in (-3, -4, -7, -8, -11, -15, -163):
        for lcm in (1, 2, 3):
            disc = 4 * lcm * lcm * abs(dk)
            r = compose_intro_bound(disc, 2)
            assert Fraction(r.cross_check["ratio_specialized_over_intro"]) <= 1
            assert r.cross_check["specialized_le_intro"]
            assert r.cross_check["specialized_integer_bound"] <= r.integer_bound
