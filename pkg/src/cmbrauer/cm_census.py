"""Conductor bounds and counts of CM elliptic curves over fields of bounded
degree, plus the singular K3 census bounds built on them."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import divisors

from .minkowski import minkowski_M
from .quadratic import (
    FundamentalDiscriminant,
    Order,
    class_number_field,
    class_number_order,
    enumerate_fields_by_class_number,
)
from .rounding import DEFAULT_EPS, Bracket, floor_upper, ln_bracket

# max conductor with ring class degree 1 in the exceptional fields: the
# exceptional cases with f > degree^2 all have f <= 7, and f > 3 forces degree 2
_DEGREE_ONE_CAP = 3

# floor on the clause bound for the three small-discriminant fields
_EXCEPTIONAL_FLOOR = {-7: 2, -4: 5, -3: 7}

# (Delta_K, d) pairs whose census counts are known exactly, with their values
EXCEPTIONAL_CM_COUNTS = {(-7, 1): 2, (-4, 1): 2, (-3, 1): 3, (-3, 2): 9}


@dataclass(frozen=True)
class ConductorBoundReport:
    field: FundamentalDiscriminant | None  # None means the generic clause input
    degree: int
    bound: int
    case_label: str

    def __post_init__(self):
        # the "in all cases" cap
        assert self.bound <= 3 * self.degree ** 2


@dataclass(frozen=True)
class CensusReport:
    degree: int
    per_field_counts: tuple[tuple[int, int], ...]
    total: int
    certified_complete: bool
    cube_bound: int  # d^3 * number of fields, for comparison

    def __post_init__(self):
        assert self.total == sum(c for _, c in self.per_field_counts)


def conductor_bound(field: FundamentalDiscriminant, ring_class_degree: int) -> ConductorBoundReport:
    """Largest conductor f whose ring class field degree [K_f:K] can equal the given degree.

    Clause bounds: max{d^2, 2} over Q(sqrt(-7)), max{d^2, 5} over Q(i),
    max{d^2, 7} over Q(zeta_3), d^2 otherwise; at degree 1 the exceptional
    conductors above 3 are impossible, capping the bound at 3.
    """
    d = ring_class_degree
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    dk = field.value
    if dk in _EXCEPTIONAL_FLOOR:
        floor_val = _EXCEPTIONAL_FLOOR[dk]
        bound = max(d * d, floor_val)
        label = f"max(d^2, {floor_val})"
    else:
        bound = d * d
        label = "d^2"
    if d == 1 and bound > _DEGREE_ONE_CAP:
        bound = _DEGREE_ONE_CAP
        label += ", capped at 3 for degree 1"
    return ConductorBoundReport(field, d, bound, label)


def conductor_bound_over_degree(d: int) -> int:
    """Conductor bound in terms of the base field degree alone: min{3d^2, max{d^2, 7}}."""
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    return min(3 * d * d, max(d * d, 7))


def d_permissible_conductors(field: FundamentalDiscriminant, d: int) -> list[tuple[int, int]]:
    """Conductors f <= conductor_bound with h(O_f) <= d, with their class numbers.

    This is the necessary-condition filter (h(O_f) = [K_f:K] <= d); genuine
    permissibility can be strictly smaller, so censuses built on it are
    upper bounds.
    """
    cap = conductor_bound(field, d).bound
    out = []
    for f in range(1, cap + 1):
        h = class_number_order(Order(field, f))
        if h <= d:
            out.append((f, h))
    return out


def cm_count_per_field(field: FundamentalDiscriminant, d: int) -> int:
    """Number of C-isomorphism classes of curves with CM by an order in the field,
    admitting a model over some degree-d field: sum of h(O_f) over permissible f."""
    total = sum(h for _, h in d_permissible_conductors(field, d))
    known = EXCEPTIONAL_CM_COUNTS.get((field.value, d))
    if known is not None:
        assert total == known, (field.value, d, total)
    return total


def cm_count_total(d: int, disc_search_bound: int) -> CensusReport:
    """Census over all fields with h_K <= d found below the search bound."""
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    search = enumerate_fields_by_class_number(d, disc_search_bound)
    per_field = tuple((k.value, cm_count_per_field(k, d)) for k in search.fields)
    total = sum(c for _, c in per_field)
    certified = False
    if d == 1 and disc_search_bound >= 163:
        # the class-number-1 field list is a solved problem: 9 fields, count 13
        assert len(search.fields) == 9 and total == 13, (len(search.fields), total)
        certified = True
    return CensusReport(
        degree=d,
        per_field_counts=per_field,
        total=total,
        certified_complete=certified,
        cube_bound=d ** 3 * len(search.fields),
    )


def singular_k3_bound(d: int, field_count: int, eps=DEFAULT_EPS) -> int:
    """floor(3 d^3 (ln(3d^2) + 1) * field_count), ln by certified upper bound."""
    if d < 1 or field_count < 0:
        raise ValueError(f"need d >= 1 and field_count >= 0, got {(d, field_count)}")
    if field_count == 0:
        return 0
    b = ln_bracket(3 * d * d, eps) + Bracket.exact(1)
    return floor_upper(b.scale(3 * d ** 3 * field_count))


def singular_k3_refined_sum(d: int, disc_search_bound: int) -> int:
    """Exact triple sum behind the closed-form census bound: over fields with
    h_K <= d, conductors f <= 3d^2, and divisors f_a | f, of min(h(O_{f_a}), d)."""
    if d < 1:
        raise ValueError(f"degree must be positive, got {d}")
    search = enumerate_fields_by_class_number(d, disc_search_bound)
    total = 0
    cap = 3 * d * d
    for k in search.fields:
        hs = {fa: min(class_number_order(Order(k, fa)), d) for fa in range(1, cap + 1)}
        for f in range(1, cap + 1):
            for fa in divisors(f):
                total += hs[fa]
    return total


def singular_k3_strong_bound(d: int, field_count: int, eps=DEFAULT_EPS) -> int:
    """floor(3 M(20)^3 d^3 (ln(3 M(20)^2 d^2) + 1) * field_count); the field
    count argument means #{K : h_K <= M(20) * d}, supplied by the caller."""
    if d < 1 or field_count < 0:
        raise ValueError(f"need d >= 1 and field_count >= 0, got {(d, field_count)}")
    if field_count == 0:
        return 0
    m20 = minkowski_M(20).value
    b = ln_bracket(3 * m20 ** 2 * d * d, eps) + Bracket.exact(1)
    return floor_upper(b.scale(3 * m20 ** 3 * d ** 3 * field_count))
