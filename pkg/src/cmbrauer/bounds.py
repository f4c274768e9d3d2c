"""Certified integer evaluation of the uniform transcendental-Brauer bounds.

Every bound here is a rational number times powers of pi, a square root, and
affine-in-log factors.  The rational part is exact; pi, ln and sqrt are
replaced by rational enclosures oriented so the floored output is a true
upper bound for the real value.  Degree-descent constants are exact integers
and are never rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from .lattices import LatticeDescriptor, parse_lattice
from .minkowski import minkowski_M
from .quadratic import FundamentalDiscriminant
from .rounding import (
    Bracket,
    COARSE_EPS,
    DEFAULT_EPS,
    floor_upper,
    ln_bracket,
    pi_bracket,
    sqrt_bracket,
)

# certified height constants, exact rationals by fiat
_C34 = Fraction(34, 10)
_C323 = Fraction(323, 100)
_C273 = Fraction(273, 100)
_C546 = Fraction(546, 100)
_HEIGHT_SHIFT = 109


class LogFactor(NamedTuple):
    """(coeff * ln(arg) + shift) ** power, with arg a rational >= 1."""

    coeff: Fraction
    arg: Fraction
    shift: Fraction
    power: int


@dataclass(frozen=True)
class SymbolicProduct:
    """Exact decomposition rational * pi^pi_exp * sqrt(sqrt_arg) * prod(log factors)."""

    rational: Fraction
    pi_exp: int = 0
    sqrt_arg: int = 1
    log_factors: tuple[LogFactor, ...] = ()

    def __post_init__(self):
        assert self.rational > 0
        assert self.sqrt_arg >= 1
        for lf in self.log_factors:
            assert lf.arg >= 1 and lf.power >= 1


@dataclass(frozen=True)
class BoundFormula:
    bound_id: str
    params: tuple[str, ...]
    grh: bool
    expression: str
    build: Callable[[dict], SymbolicProduct]
    optional: tuple[str, ...] = ()


@dataclass(frozen=True)
class BoundReport:
    bound_id: str
    inputs: dict
    exact_symbolic: dict
    integer_bound: int
    conditional: bool
    rounding_certificate: dict
    cross_check: dict | None = None

    @property
    def provenance(self) -> str:
        return f"bounds:{self.bound_id}"


def _deg(inputs: dict, name: str) -> int:
    v = inputs[name]
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise ValueError(f"{name} must be a positive integer, got {v!r}")
    return v


def _fund(inputs: dict, name: str = "delta_k") -> int:
    return FundamentalDiscriminant(inputs[name]).value


def _disc(inputs: dict, name: str = "disc_lambda") -> int:
    v = inputs[name]
    if not isinstance(v, int) or v == 0:
        raise ValueError(f"{name} must be a nonzero integer, got {v!r}")
    return v


def _flag(inputs: dict, name: str) -> bool:
    v = inputs.get(name, False)
    if not isinstance(v, bool):
        raise ValueError(f"{name} must be a boolean, got {v!r}")
    return v


def _grh_log(arg, power: int = 4) -> LogFactor:
    # the recurring height factor (3.23) ln(arg) + (2.73)*109
    return LogFactor(coeff=_C323, arg=Fraction(arg), shift=_C273 * _HEIGHT_SHIFT, power=power)


def _build_uncond_lattice(inputs: dict) -> SymbolicProduct:
    disc = _disc(inputs)
    d = _deg(inputs, "d")
    r = Fraction(2 ** 34 * 3 ** 3) * minkowski_M(20).value ** 4 * disc * disc * d ** 4
    return SymbolicProduct(rational=r, pi_exp=-2)


def _build_lattice_k_isog(inputs: dict) -> SymbolicProduct:
    disc = _disc(inputs)
    L = _deg(inputs, "L_deg")
    dk = _fund(inputs)
    if _flag(inputs, "class_number_one"):
        r = Fraction(disc * disc * L ** 4, 2 ** 4 * dk * dk)
        return SymbolicProduct(rational=r)
    r = Fraction(disc * disc * L ** 4, 2 ** 2 * abs(dk))
    return SymbolicProduct(rational=r, pi_exp=-2)


def _build_ab_lattice(inputs: dict) -> SymbolicProduct:
    disc = _disc(inputs)
    L = _deg(inputs, "L_deg")
    dk = _fund(inputs)
    if _flag(inputs, "class_number_one"):
        r = Fraction(disc * disc * L ** 4, dk * dk)
        return SymbolicProduct(rational=r)
    r = Fraction(2 ** 2 * disc * disc * L ** 4, abs(dk))
    return SymbolicProduct(rational=r, pi_exp=-2)


def _build_degree_grh(inputs: dict) -> SymbolicProduct:
    L = _deg(inputs, "L_deg")
    r = _C34 ** 2 * 10 ** 8 * L ** 12
    return SymbolicProduct(rational=r, log_factors=(_grh_log(L),))


def _build_singular_cover_grh(inputs: dict) -> SymbolicProduct:
    d = _deg(inputs, "d")
    m20 = minkowski_M(20).value
    r = Fraction(2 ** 130 * 3 ** 12 * 5 ** 8) * _C34 ** 2 * m20 ** 12 * d ** 12
    return SymbolicProduct(rational=r, log_factors=(_grh_log(2 ** 10 * 3 * m20 * d),))


def _build_isog_pair(inputs: dict) -> SymbolicProduct:
    f1, f2 = _deg(inputs, "f1"), _deg(inputs, "f2")
    M = _deg(inputs, "M_deg")
    dk = _fund(inputs)
    if _flag(inputs, "class_number_one"):
        return SymbolicProduct(rational=Fraction(f1 * f1 * f2 * f2 * M ** 4))
    r = Fraction(2 ** 2 * f1 * f1 * f2 * f2 * abs(dk) * M ** 4)
    return SymbolicProduct(rational=r, pi_exp=-2)


def _build_isog_pair_grh(inputs: dict) -> SymbolicProduct:
    m_over_k = _deg(inputs, "M_over_k_deg")
    k = _deg(inputs, "k_deg")
    r = _C34 ** 2 * 10 ** 8 * m_over_k ** 4 * k ** 12
    return SymbolicProduct(rational=r, log_factors=(_grh_log(k),))


def _build_nonisog_grh(inputs: dict) -> SymbolicProduct:
    D = _deg(inputs, "compositum_deg")
    d = _deg(inputs, "d")
    r = Fraction(2 ** 316 * 241 ** 24) * D ** 24
    lf = LogFactor(coeff=_C546, arg=Fraction(d), shift=_C546 * _HEIGHT_SHIFT + 3, power=24)
    return SymbolicProduct(rational=r, log_factors=(lf,))


def _build_kummer_nonisog_grh(inputs: dict) -> SymbolicProduct:
    d = _deg(inputs, "d")
    m18 = minkowski_M(18).value
    r = Fraction(2 ** 508 * 241 ** 24) * m18 ** 24 * d ** 24
    lf = LogFactor(coeff=_C546, arg=Fraction(2 ** 6 * m18 * d), shift=_C546 * _HEIGHT_SHIFT + 3, power=24)
    return SymbolicProduct(rational=r, log_factors=(lf,))


def _build_isogeny_degree(inputs: dict) -> SymbolicProduct:
    f1 = _deg(inputs, "f1")
    f2 = _deg(inputs, "f2") if "f2" in inputs else 1
    dk = _fund(inputs)
    return SymbolicProduct(rational=Fraction(2 * f1 * f2), pi_exp=-1, sqrt_arg=abs(dk))


def _build_isogeny_degree_grh(inputs: dict) -> SymbolicProduct:
    d = _deg(inputs, "d")
    r = _C34 * 10 ** 4 * d * d
    return SymbolicProduct(rational=r, log_factors=(_grh_log(d, power=2),))


def _build_faltings_grh(inputs: dict) -> SymbolicProduct:
    d = _deg(inputs, "d")
    lf = LogFactor(coeff=_C273, arg=Fraction(d), shift=_C273 * _HEIGHT_SHIFT, power=1)
    return SymbolicProduct(rational=Fraction(1), log_factors=(lf,))


def _build_isogeny_brauer_multiplier(inputs: dict) -> SymbolicProduct:
    d = _deg(inputs, "d")
    g = _deg(inputs, "g")
    rho = _deg(inputs, "rho")
    if not 1 <= rho <= g * g:
        raise ValueError(f"rho must lie in [1, g^2] = [1, {g * g}], got {rho}")
    return SymbolicProduct(rational=Fraction(d ** (g * (2 * g - 1) - rho)))


FORMULAS: dict[str, BoundFormula] = {
    f.bound_id: f
    for f in (
        BoundFormula(
            "uncond_lattice", ("disc_lambda", "d"), False,
            "2^34 * 3^3 * pi^-2 * M(20)^4 * disc^2 * d^4",
            _build_uncond_lattice,
        ),
        BoundFormula(
            "lattice_k_isog", ("disc_lambda", "L_deg", "delta_k", "class_number_one"), False,
            "2^-2 * pi^-2 * |Delta_K|^-1 * disc^2 * L^4  (h=1: 2^-4 * |Delta_K|^-2 * disc^2 * L^4)",
            _build_lattice_k_isog, optional=("class_number_one",),
        ),
        BoundFormula(
            "ab_lattice", ("disc_lambda", "L_deg", "delta_k", "class_number_one"), False,
            "2^2 * pi^-2 * |Delta_K|^-1 * disc^2 * L^4  (h=1: |Delta_K|^-2 * disc^2 * L^4)",
            _build_ab_lattice, optional=("class_number_one",),
        ),
        BoundFormula(
            "ab_GRH", ("L_deg",), True,
            "(3.4)^2 * 10^8 * L^12 * ((3.23) ln L + (2.73)*109)^4",
            _build_degree_grh,
        ),
        BoundFormula(
            "kummer_GRH", ("L_deg",), True,
            "(3.4)^2 * 10^8 * L^12 * ((3.23) ln L + (2.73)*109)^4",
            _build_degree_grh,
        ),
        BoundFormula(
            "singular_cover_GRH", ("d",), True,
            "2^130 * 3^12 * 5^8 * (3.4)^2 * M(20)^12 * d^12 * ((3.23) ln(2^10*3*M(20)*d) + (2.73)*109)^4",
            _build_singular_cover_grh,
        ),
        BoundFormula(
            "isog_pair", ("f1", "f2", "delta_k", "M_deg", "class_number_one"), False,
            "2^2 * pi^-2 * f1^2 * f2^2 * |Delta_K| * M^4  (h=1: f1^2 * f2^2 * M^4)",
            _build_isog_pair, optional=("class_number_one",),
        ),
        BoundFormula(
            "isog_pair_GRH", ("M_over_k_deg", "k_deg"), True,
            "(3.4)^2 * 10^8 * [M:k]^4 * [k:Q]^12 * ((3.23) ln [k:Q] + (2.73)*109)^4",
            _build_isog_pair_grh,
        ),
        BoundFormula(
            "nonisog_GRH", ("compositum_deg", "d"), True,
            "2^316 * 241^24 * D^24 * ((5.46)(109 + ln d) + 3)^24",
            _build_nonisog_grh,
        ),
        BoundFormula(
            "kummer_nonisog_GRH", ("d",), True,
            "2^508 * 241^24 * M(18)^24 * d^24 * ((5.46)(109 + ln(2^6*M(18)*d)) + 3)^24",
            _build_kummer_nonisog_grh,
        ),
        BoundFormula(
            "isogeny_degree", ("f1", "f2", "delta_k"), False,
            "2 * pi^-1 * f1 * f2 * sqrt(|Delta_K|)",
            _build_isogeny_degree, optional=("f2",),
        ),
        BoundFormula(
            "isogeny_degree_GRH", ("d",), True,
            "(3.4) * 10^4 * d^2 * ((3.23) ln d + (2.73)*109)^2",
            _build_isogeny_degree_grh,
        ),
        BoundFormula(
            "faltings_GRH", ("d",), True,
            "(2.73) * (109 + ln d)",
            _build_faltings_grh,
        ),
        BoundFormula(
            "isogeny_brauer_multiplier", ("d", "g", "rho"), False,
            "d^(g(2g-1) - rho)",
            _build_isogeny_brauer_multiplier,
        ),
    )
}

GRH_IDS = frozenset(k for k, f in FORMULAS.items() if f.grh)


def _evaluate(sym: SymbolicProduct, eps) -> tuple[Bracket, dict]:
    # eps None means the documented default: coarse pi pair, ln and sqrt to 1e-9
    pi_eps = COARSE_EPS if eps is None else Fraction(eps)
    fn_eps = DEFAULT_EPS if eps is None else Fraction(eps)
    cert: dict = {"pi_eps": str(pi_eps), "fn_eps": str(fn_eps)}
    b = Bracket.exact(sym.rational)
    if sym.pi_exp != 0:
        p = pi_bracket(pi_eps)
        cert["pi"] = [str(p.lo), str(p.hi)]
        if sym.pi_exp < 0:
            p = p.inv()
        b = b * p ** abs(sym.pi_exp)
    if sym.sqrt_arg != 1:
        s = sqrt_bracket(sym.sqrt_arg, fn_eps)
        cert["sqrt"] = [str(s.lo), str(s.hi)]
        b = b * s
    for i, lf in enumerate(sym.log_factors):
        ln_b = ln_bracket(lf.arg, fn_eps)
        cert[f"ln_{i}"] = [str(ln_b.lo), str(ln_b.hi)]
        affine = ln_b.scale(lf.coeff) + Bracket.exact(lf.shift)
        assert affine.lo > 0
        b = b * affine ** lf.power
    return b, cert


def eval_bound(bound_id: str, inputs: dict, eps=None, assume_grh: bool = False) -> BoundReport:
    """Evaluate one registered bound at exact inputs.

    eps = None uses the documented default rounding (the 355/113 enclosure of
    pi and 1e-9 enclosures of ln and sqrt); an explicit eps applies to all
    enclosures.  Tighter eps never increases the result.  GRH-tagged ids run
    only with assume_grh=True and come back flagged conditional.
    """
    if bound_id not in FORMULAS:
        raise KeyError(f"unknown bound id {bound_id!r}; known: {sorted(FORMULAS)}")
    formula = FORMULAS[bound_id]
    if formula.grh and not assume_grh:
        raise ValueError(f"{bound_id} holds under GRH only; pass assume_grh=True to evaluate")
    missing = [p for p in formula.params if p not in inputs and p not in formula.optional]
    if missing:
        raise ValueError(f"{bound_id} missing inputs: {missing}")
    unknown = [k for k in inputs if k not in formula.params]
    if unknown:
        raise ValueError(f"{bound_id} got unknown inputs: {unknown}")
    sym = formula.build(inputs)
    bracket, cert = _evaluate(sym, eps)
    return BoundReport(
        bound_id=bound_id,
        inputs=dict(inputs),
        exact_symbolic={
            "rational": str(sym.rational),
            "pi_exp": sym.pi_exp,
            "sqrt_arg": sym.sqrt_arg,
            "log_factors": [
                {"coeff": str(lf.coeff), "arg": str(lf.arg), "shift": str(lf.shift), "power": lf.power}
                for lf in sym.log_factors
            ],
            "expression": formula.expression,
        },
        integer_bound=floor_upper(bracket),
        conditional=formula.grh,
        rounding_certificate=cert,
    )


class TowerConstant(NamedTuple):
    name: str
    value: int
    description: str
    provenance: str


def field_tower_constants() -> dict[str, TowerConstant]:
    """Exact degree bounds [L:k] for the field extensions where the relevant
    endomorphisms, isogenies and Kummer structures all become defined."""
    m20 = minkowski_M(20).value
    m18 = minkowski_M(18).value
    entries = (
        TowerConstant("ab_endo", 2 ** 4 * 3, "endomorphism field of a rank-4 abelian surface", "towers:ab_endo"),
        TowerConstant("kummer_full", 2 ** 9 * 3 * m20, "Kummer structure, isogenous CM factors", "towers:kummer_full"),
        TowerConstant("singular_cover", 2 ** 10 * 3 * m20, "abelian double cover of a singular K3", "towers:singular_cover"),
        TowerConstant("kummer_nonisog", 2 ** 6 * m18, "Kummer structure, non-isogenous CM factors", "towers:kummer_nonisog"),
        TowerConstant("rank20_double", 2 * m20, "rank-20 transcendental-cycle double cover step", "towers:rank20_double"),
        TowerConstant("kummer_descent", 2 ** 5 * 3 * m20, "product realization behind the Kummer step", "towers:kummer_descent"),
        TowerConstant("rank18_double", 2 * m18, "rank-18 transcendental-cycle double cover step", "towers:rank18_double"),
        TowerConstant("rank18_quad", 2 ** 2 * m18, "rank-18 cover with the extra quadratic step", "towers:rank18_quad"),
    )
    return {e.name: e for e in entries}


def unit_group_order(delta_k: int) -> int:
    """#O_K^x: 6 for Delta_K = -3, 4 for -4, else 2."""
    dk = FundamentalDiscriminant(delta_k).value
    return {-3: 6, -4: 4}.get(dk, 2)


def compose_intro_bound(disc_lambda: int, d: int, eps=None) -> BoundReport:
    """Headline unconditional Kummer bound at degree d, cross-checked against
    the lattice bound specialized with [L:Q] <= 2^9 * 3 * M(20) * d.

    The exact identity 2^-2 * (2^9 * 3)^4 = 2^34 * 3^4 makes the specialized
    form 3 * |Delta_K|^-1 times the headline one, so for |Delta_K| >= 3 the
    specialization can only be tighter.  Both integer values are reported.
    """
    data = parse_lattice(LatticeDescriptor(rank=20, disc=disc_lambda), "kummer")
    intro = eval_bound("uncond_lattice", {"disc_lambda": disc_lambda, "d": d}, eps=eps)
    l_deg = field_tower_constants()["kummer_full"].value * d
    specialized = eval_bound(
        "lattice_k_isog",
        {
            "disc_lambda": disc_lambda,
            "L_deg": l_deg,
            "delta_k": data.field.value,
            "class_number_one": False,
        },
        eps=eps,
    )
    identity_holds = Fraction(1, 2 ** 2) * (2 ** 9 * 3) ** 4 == 2 ** 34 * 3 ** 4
    assert identity_holds
    return BoundReport(
        bound_id=intro.bound_id,
        inputs=intro.inputs,
        exact_symbolic=intro.exact_symbolic,
        integer_bound=intro.integer_bound,
        conditional=False,
        rounding_certificate=intro.rounding_certificate,
        cross_check={
            "specialized_bound_id": specialized.bound_id,
            "specialized_L_deg": l_deg,
            "specialized_integer_bound": specialized.integer_bound,
            "identity": "2^-2 * (2^9*3)^4 == 2^34 * 3^4",
            "identity_holds": identity_holds,
            "ratio_specialized_over_intro": str(Fraction(3, abs(data.field.value))),
            "specialized_le_intro": specialized.integer_bound <= intro.integer_bound,
        },
    )
