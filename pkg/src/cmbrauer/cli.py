"""Command-line front end: one subcommand per library area, canonical JSON
envelopes on stdout.

Serialization is canonical: keys sorted, every integer rendered as a decimal
string (values routinely exceed 64 bits), byte-identical across runs.  Exit
codes: 0 success, 2 input validation, 64 unknown subcommand, 70 internal
assertion failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds as bounds_mod
from . import cm_census
from .brauer import GaloisFlags, brauer_shape_maximal, divisibility_bound
from .grossencharakter import CurveOverQ, estimate_m
from .lattices import (
    CMPair,
    LatticeDescriptor,
    disc_hom,
    disc_ns_kummer,
    disc_ns_product,
    parse_lattice,
)
from .minkowski import minkowski_M
from .quadratic import (
    FundamentalDiscriminant,
    Order,
    class_number_order,
    enumerate_fields_by_class_number,
)

_STATIC_PROVENANCE = (
    "quadratic:class_number_order",
    "quadratic:class_number_field",
    "quadratic:enumerate_fields_by_class_number",
    "quadratic:reduced_forms",
    "minkowski:minkowski_M",
    "minkowski:algebraic_brauer_bound",
    "cm_census:conductor_bound",
    "cm_census:conductor_bound_over_degree",
    "cm_census:cm_count_total",
    "cm_census:cm_count_per_field",
    "cm_census:singular_k3_bound",
    "lattices:disc_identities",
    "lattices:parse_lattice",
    "brauer:brauer_shape_maximal",
    "brauer:divisibility_bound",
    "brauer:uniform_bound_EE",
    "grossencharakter:estimate_m",
    "grossencharakter:count_points_ap",
    "towers:all",
)

PROVENANCE_IDS = frozenset(_STATIC_PROVENANCE) \
    | {f"bounds:{k}" for k in bounds_mod.FORMULAS} \
    | {f"towers:{k}" for k in bounds_mod.field_tower_constants()}

COMMANDS = (
    "classnum",
    "fields-by-h",
    "minkowski",
    "conductor-bound",
    "cm-count",
    "k3-census",
    "lattice",
    "brauer-shape",
    "divisibility",
    "mell-estimate",
    "bound",
    "constants",
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNKNOWN_COMMAND = 64
EXIT_INTERNAL = 70


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits on its own; route everything through _CliError instead
    def error(self, message):
        raise _CliError(message)


def _canonical_payload(x):
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if x is None or isinstance(x, str):
        return x
    if isinstance(x, dict):
        return {str(k): _canonical_payload(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_canonical_payload(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _serialize(envelope: dict) -> str:
    return json.dumps(_canonical_payload(envelope), sort_keys=True, separators=(",", ":"))


def _format_table(envelope: dict) -> str:
    # human view; lossy and non-canonical by design
    rows = [("command", envelope["command"]), ("provenance", envelope["provenance"]),
            ("conditional", envelope["conditional"])]

    def flatten(prefix, value):
        if isinstance(value, dict):
            for k in sorted(value):
                flatten(f"{prefix}.{k}" if prefix else str(k), value[k])
        elif isinstance(value, (list, tuple)):
            rows.append((prefix, " ".join(str(v) for v in value)))
        else:
            rows.append((prefix, value))

    flatten("inputs", envelope["inputs"])
    flatten("result", envelope["result"])
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--output", metavar="PATH", default=None)

    p = _Parser(prog="cmbrauer", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", metavar="|".join(COMMANDS))

    sp = sub.add_parser("classnum", parents=[common], help="class number of an imaginary quadratic order")
    sp.add_argument("--disc", type=int, required=True, help="fundamental discriminant Delta_K")
    sp.add_argument("--conductor", type=int, default=1)

    sp = sub.add_parser("fields-by-h", parents=[common], help="fields with class number at most h")
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--disc-bound", type=int, required=True, help="search |Delta_K| up to this bound")

    sp = sub.add_parser("minkowski", parents=[common], help="Minkowski constant M(n)")
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("conductor-bound", parents=[common], help="largest conductor at a ring class degree")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--delta-k", type=int, default=None)

    sp = sub.add_parser("cm-count", parents=[common], help="CM j-invariant census over degree-d fields")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--disc-bound", type=int, default=200)

    sp = sub.add_parser("k3-census", parents=[common], help="singular K3 class count bounds")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--field-count", type=int, default=None)
    sp.add_argument("--refined-disc-bound", type=int, default=None)

    sp = sub.add_parser("lattice", parents=[common], help="CM lattice discriminants, both directions")
    sp.add_argument("--delta-k", type=int, default=None)
    sp.add_argument("--f1", type=int, default=None)
    sp.add_argument("--f2", type=int, default=None)
    sp.add_argument("--kind", choices=("abelian", "kummer"), default=None)
    sp.add_argument("--rank", type=int, default=None)
    sp.add_argument("--disc", type=int, default=None)

    sp = sub.add_parser("brauer-shape", parents=[common], help="transcendental Brauer group, maximal order")
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k-in-k", action="store_true", help="the CM field lies in the base field")
    sp.add_argument("--two-torsion-rational", action="store_true")

    sp = sub.add_parser("divisibility", parents=[common], help="divisibility bound for Br(E x E)")
    sp.add_argument("--conductor", type=int, required=True)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--delta-k", type=int, required=True)

    sp = sub.add_parser("mell-estimate", parents=[common], help="sampled upper bound on m_ell(E)")
    sp.add_argument("--a4", type=int, required=True)
    sp.add_argument("--a6", type=int, required=True)
    sp.add_argument("--cm-disc", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--budget", type=int, required=True, help="sample good primes up to this bound")

    sp = sub.add_parser("bound", parents=[common], help="evaluate a registered uniform bound")
    sp.add_argument("--id", required=True, choices=sorted(bounds_mod.FORMULAS))
    sp.add_argument("--set", action="append", default=[], metavar="NAME=VALUE",
                    help="formula input; integers, or true/false for flags")
    sp.add_argument("--eps", default=None, help="rounding precision, e.g. 1e-6")
    sp.add_argument("--assume-grh", action="store_true")
    sp.add_argument("--cross-check-intro", action="store_true",
                    help="with --id uncond_lattice: attach the specialized-lattice cross check")

    sp = sub.add_parser("constants", parents=[common], help="exact descent-degree constants")
    sp.add_argument("--name", default=None, choices=sorted(bounds_mod.field_tower_constants()))

    return p


def _parse_set_args(pairs: list[str]) -> dict:
    inputs = {}
    for item in pairs:
        name, sep, raw = item.partition("=")
        if not sep or not name:
            raise _CliError(f"--set expects NAME=VALUE, got {item!r}")
        if raw.lower() in ("true", "false"):
            inputs[name] = raw.lower() == "true"
        else:
            try:
                inputs[name] = int(raw)
            except ValueError:
                raise _CliError(f"--set value for {name} must be an integer or true/false, got {raw!r}")
    return inputs


def _cmd_classnum(ns):
    order = Order(FundamentalDiscriminant(ns.disc), ns.conductor)
    h = class_number_order(order)
    inputs = {"disc": ns.disc, "conductor": ns.conductor}
    result = {"h": h, "order_discriminant": order.discriminant}
    return inputs, result, "quadratic:class_number_order", False


def _cmd_fields_by_h(ns):
    search = enumerate_fields_by_class_number(ns.h, ns.disc_bound)
    inputs = {"h": ns.h, "disc_bound": ns.disc_bound}
    result = {
        "discriminants": [f.value for f in search.fields],
        "count": len(search.fields),
        "certified_complete": search.certified_complete,
    }
    return inputs, result, "quadratic:enumerate_fields_by_class_number", False


def _cmd_minkowski(ns):
    m = minkowski_M(ns.n)
    inputs = {"n": ns.n}
    result = {"value": m.value, "factorization": {str(p): e for p, e in m.factorization}}
    return inputs, result, "minkowski:minkowski_M", False


def _cmd_conductor_bound(ns):
    if ns.delta_k is None:
        inputs = {"degree": ns.degree}
        result = {"bound": cm_census.conductor_bound_over_degree(ns.degree)}
        return inputs, result, "cm_census:conductor_bound_over_degree", False
    rep = cm_census.conductor_bound(FundamentalDiscriminant(ns.delta_k), ns.degree)
    inputs = {"degree": ns.degree, "delta_k": ns.delta_k}
    result = {"bound": rep.bound, "case": rep.case_label}
    return inputs, result, "cm_census:conductor_bound", False


def _cmd_cm_count(ns):
    rep = cm_census.cm_count_total(ns.degree, ns.disc_bound)
    inputs = {"degree": ns.degree, "disc_bound": ns.disc_bound}
    result = {
        "total": rep.total,
        "certified_complete": rep.certified_complete,
        "cube_bound": rep.cube_bound,
        "per_field": {str(dk): c for dk, c in rep.per_field_counts},
    }
    return inputs, result, "cm_census:cm_count_total", False


def _cmd_k3_census(ns):
    if ns.field_count is None and ns.refined_disc_bound is None:
        raise _CliError("k3-census needs --field-count or --refined-disc-bound")
    inputs = {"degree": ns.degree}
    result = {}
    if ns.field_count is not None:
        inputs["field_count"] = ns.field_count
        result["log_bound"] = cm_census.singular_k3_bound(ns.degree, ns.field_count)
        result["strong_bound"] = cm_census.singular_k3_strong_bound(ns.degree, ns.field_count)
    if ns.refined_disc_bound is not None:
        inputs["refined_disc_bound"] = ns.refined_disc_bound
        result["refined_sum"] = cm_census.singular_k3_refined_sum(ns.degree, ns.refined_disc_bound)
    return inputs, result, "cm_census:singular_k3_bound", False


def _cmd_lattice(ns):
    compose = ns.delta_k is not None or ns.f1 is not None or ns.f2 is not None
    parse = ns.kind is not None or ns.rank is not None or ns.disc is not None
    if compose == parse:
        raise _CliError("lattice takes either --delta-k/--f1/--f2 or --kind/--rank/--disc")
    if compose:
        if None in (ns.delta_k, ns.f1, ns.f2):
            raise _CliError("compose direction needs --delta-k, --f1 and --f2")
        pair = CMPair(FundamentalDiscriminant(ns.delta_k), ns.f1, ns.f2)
        inputs = {"delta_k": ns.delta_k, "f1": ns.f1, "f2": ns.f2}
        result = {
            "conductor_lcm": pair.conductor_lcm,
            "disc_hom": disc_hom(pair),
            "disc_ns_product": disc_ns_product(pair),
            "disc_ns_kummer": disc_ns_kummer(pair),
        }
        return inputs, result, "lattices:disc_identities", False
    if None in (ns.kind, ns.rank, ns.disc):
        raise _CliError("parse direction needs --kind, --rank and --disc")
    data = parse_lattice(LatticeDescriptor(rank=ns.rank, disc=ns.disc), ns.kind)
    inputs = {"kind": ns.kind, "rank": ns.rank, "disc": ns.disc}
    result = {"delta_k": data.field.value, "conductor_lcm": data.conductor_lcm}
    return inputs, result, "lattices:parse_lattice", False


def _cmd_brauer_shape(ns):
    flags = GaloisFlags(K_in_k=ns.k_in_k, two_torsion_rational=ns.two_torsion_rational)
    shape = brauer_shape_maximal(ns.ell, ns.m, flags)
    inputs = {"ell": ns.ell, "m": ns.m, "k_in_k": ns.k_in_k,
              "two_torsion_rational": ns.two_torsion_rational}
    result = {"cyclic_factors": list(shape.cyclic_factors), "order": shape.order}
    return inputs, result, "brauer:brauer_shape_maximal", False


def _cmd_divisibility(ns):
    value = divisibility_bound(ns.conductor, ns.degree, ns.delta_k)
    inputs = {"conductor": ns.conductor, "degree": ns.degree, "delta_k": ns.delta_k}
    return inputs, {"bound": value}, "brauer:divisibility_bound", False


def _cmd_mell_estimate(ns):
    curve = CurveOverQ(ns.a4, ns.a6, ns.cm_disc)
    est = estimate_m(curve, ns.ell, ns.budget)
    inputs = {"a4": ns.a4, "a6": ns.a6, "cm_disc": ns.cm_disc,
              "ell": ns.ell, "budget": ns.budget}
    result = {"m_hat": est.m_hat, "samples_used": est.samples_used, "is_upper_bound": True}
    return inputs, result, "grossencharakter:estimate_m", False


def _cmd_bound(ns):
    inputs = _parse_set_args(ns.set)
    eps = Fraction(ns.eps) if ns.eps is not None else None
    if ns.cross_check_intro:
        if ns.id != "uncond_lattice":
            raise _CliError("--cross-check-intro applies to --id uncond_lattice only")
        if set(inputs) != {"disc_lambda", "d"}:
            raise _CliError("--cross-check-intro needs exactly --set disc_lambda=... --set d=...")
        report = bounds_mod.compose_intro_bound(inputs["disc_lambda"], inputs["d"], eps=eps)
    else:
        report = bounds_mod.eval_bound(ns.id, inputs, eps=eps, assume_grh=ns.assume_grh)
    echo = dict(inputs)
    if ns.eps is not None:
        echo["eps"] = str(eps)
    result = {
        "integer_bound": report.integer_bound,
        "exact_symbolic": report.exact_symbolic,
        "rounding_certificate": report.rounding_certificate,
    }
    if report.cross_check is not None:
        result["cross_check"] = report.cross_check
    return echo, result, report.provenance, report.conditional


def _cmd_constants(ns):
    table = bounds_mod.field_tower_constants()
    if ns.name is not None:
        entry = table[ns.name]
        inputs = {"name": ns.name}
        result = {"value": entry.value, "description": entry.description}
        return inputs, result, entry.provenance, False
    result = {name: {"value": e.value, "description": e.description} for name, e in table.items()}
    return {}, result, "towers:all", False


_HANDLERS = {
    "classnum": _cmd_classnum,
    "fields-by-h": _cmd_fields_by_h,
    "minkowski": _cmd_minkowski,
    "conductor-bound": _cmd_conductor_bound,
    "cm-count": _cmd_cm_count,
    "k3-census": _cmd_k3_census,
    "lattice": _cmd_lattice,
    "brauer-shape": _cmd_brauer_shape,
    "divisibility": _cmd_divisibility,
    "mell-estimate": _cmd_mell_estimate,
    "bound": _cmd_bound,
    "constants": _cmd_constants,
}


def _emit(text: str, ns=None) -> None:
    sys.stdout.write(text + "\n")


def _emit_error(command, exc, code: int) -> int:
    payload = {"command": command, "error": {"type": type(exc).__name__, "message": str(exc)}}
    sys.stdout.write(_serialize(payload) + "\n")
    return code


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    command = next((a for a in argv if not a.startswith("-")), None)
    if command is None:
        return _emit_error(None, _CliError(f"missing subcommand; expected one of {', '.join(COMMANDS)}"), EXIT_USAGE)
    if command not in COMMANDS:
        return _emit_error(command, _CliError(f"unknown subcommand {command!r}"), EXIT_UNKNOWN_COMMAND)
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        inputs, result, provenance, conditional = _HANDLERS[command](ns)
    except _CliError as e:
        return _emit_error(command, e, EXIT_USAGE)
    except (ValueError, KeyError) as e:
        return _emit_error(command, e, EXIT_USAGE)
    except AssertionError as e:
        # includes IntegralityError: a violated internal identity, not bad input
        return _emit_error(command, e, EXIT_INTERNAL)
    assert provenance in PROVENANCE_IDS, provenance
    envelope = {
        "command": command,
        "inputs": inputs,
        "result": result,
        "provenance": provenance,
        "conditional": conditional,
    }
    canonical = _serialize(envelope)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(canonical + "\n")
    if ns.format == "table":
        _emit(_format_table(_canonical_payload(envelope)))
    else:
        _emit(canonical)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
