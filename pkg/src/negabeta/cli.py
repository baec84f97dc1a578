"""Batch command-line front end with machine-readable JSON output.

Every verb maps onto one library operation.  Output is JSON on stdout
(the lone exception is ``sft --emit dot``); numeric results carry exact
forms where available plus decimal renderings at the requested precision.
Exit codes: 0 success, 2 domain errors, 3 unresolved within budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .errors import (
    CanonicalizationCycle,
    NegabetaError,
    OrbitUnresolved,
    PrecisionExhausted,
    PrefixTooShort,
    SolveError,
    SpecError,
)
from .expansion import DEFAULT_BUDGET, EvPeriodic, expand, orbit_of_one, pi_of_one
from .numerics import FieldPoint, format_rational, make_beta, point_decimal_str
from .order import is_valid_expansion_of_one, limit_word_prefix
from .matching import matching_time
from .measure import densities_coincide, density
from .shiftspace import build_sft, entropy_estimate
from . import solver


def _point_json(x, digits: int) -> dict:
    out = {"decimal": point_decimal_str(x, digits)}
    if isinstance(x, FieldPoint):
        out["coeffs"] = [format_rational(c) for c in x.coeffs]
    else:
        out["exact"] = format_rational(Fraction(x))
    return out


def _parse_x(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(text)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _cmd_expand(args) -> int:
    beta = make_beta(args.beta, args.precision)
    digits = expand(beta, _parse_x(args.x), args.n)
    _emit({"digits": list(digits)})
    return 0


def _cmd_orbit(args) -> int:
    beta = make_beta(args.beta, args.precision)
    rec = orbit_of_one(beta, args.budget)
    _emit({
        "kind": rec.kind,
        "pre_len": rec.pre_len,
        "period_len": rec.period_len,
        "digits": list(rec.digits),
        "points": [_point_json(p, args.digits) for p in rec.points],
        "budget_used": rec.budget,
    })
    return 0


def _cmd_density(args) -> int:
    beta = make_beta(args.beta, args.precision)
    d = density(beta, args.budget)
    _emit({
        "breakpoints": [_point_json(b, args.digits) for b in d.breakpoints],
        "values": [_point_json(v, args.digits) for v in d.values],
        "K": _point_json(d.K, args.digits),
        "normalized": False,
        "indicator": "geq",
    })
    return 0


def _cmd_measure_compare(args) -> int:
    beta1 = make_beta(args.beta1, args.precision)
    beta2 = make_beta(args.beta2, args.precision) if args.beta2 else beta1.plus_one()
    report = densities_coincide(beta1, beta2, args.budget)
    _emit(report.to_json())
    return 0


def _cmd_entropy(args) -> int:
    pi1 = EvPeriodic.parse(args.pi1)
    est = entropy_estimate(pi1, args.n)
    _emit({
        "counts": list(est.counts),
        "estimate": est.estimate,
        "upper_bound": est.upper_bound,
    })
    return 0


def _cmd_sft(args) -> int:
    pi1 = EvPeriodic.parse(args.pi1)
    aut = build_sft(pi1)
    if args.emit == "dot":
        print(aut.to_dot())
    else:
        _emit(aut.to_json())
    return 0


def _cmd_match(args) -> int:
    beta = make_beta(args.beta, args.precision)
    report = matching_time(beta, args.budget)
    _emit(report.to_json(args.digits))
    return 0


def _cmd_solve(args) -> int:
    target = EvPeriodic.parse(args.target)
    beta = solver.beta_from_expansion(target, Fraction(1, 10**args.digits))
    _emit({"beta": beta.spec_string(), "decimal": beta.decimal_str(args.digits)})
    return 0


def _approx_worker(payload):
    beta_spec, cand, tag, side, digits, precision = payload
    beta = make_beta(beta_spec, precision)
    result = solver.solve_candidate(beta, EvPeriodic.parse(cand), tag, side)
    return result.to_json(digits)


def _cmd_approx(args) -> int:
    beta = make_beta(args.beta, args.precision)
    if args.jobs <= 1:
        rows = [r.to_json(args.digits)
                for r in solver.approximate_simple_numbers(beta, args.count, args.prefix)]
        _emit(rows)
        return 0
    pi = pi_of_one(beta)
    if pi.resolved and pi.is_simple:
        rows = [r.to_json(args.digits)
                for r in solver.approximate_simple_numbers(beta, args.count, args.prefix)]
        _emit(rows)
        return 0
    if pi.resolved:
        plan = solver.periodic_approximants(pi.sequence, args.count)
    else:
        plan = solver.periodic_approximants(None, args.count,
                                            prefix=expand(beta, 1, args.prefix))
    payloads = [
        (beta.spec_string(), str(c), tag, side, args.digits, args.precision)
        for c, tag, side in zip(plan.candidates, plan.case_tags, plan.sides)
    ]
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        rows = list(pool.map(_approx_worker, payloads))
    _emit(rows)
    return 0


def _cmd_validate(args) -> int:
    seq = EvPeriodic.parse(args.seq)
    _emit(is_valid_expansion_of_one(seq).to_json())
    return 0


def _cmd_w_word(args) -> int:
    _emit("".join(str(c) for c in limit_word_prefix(args.n)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="negabeta",
        description="negative beta-expansions: digits, densities, automata, matching, solving",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, beta=True):
        p.add_argument("--digits", type=int, default=15,
                       help="decimal digits in renderings (default 15)")
        p.add_argument("--precision", type=int,
                       default=int(os.environ.get("NEGABETA_PRECISION", 0)) or None,
                       help="working precision in bits for decimal bases")
        if beta:
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                           help="orbit iteration budget")

    p = sub.add_parser("expand", help="digits of the expansion of x")
    p.add_argument("--beta", required=True)
    p.add_argument("--x", default="1")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("orbit", help="orbit of 1 with cycle classification")
    p.add_argument("--beta", required=True)
    common(p)
    p.set_defaults(func=_cmd_orbit)

    p = sub.add_parser("density", help="exact invariant density")
    p.add_argument("--beta", required=True)
    common(p)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("measure-compare", help="do two invariant measures coincide?")
    p.add_argument("--beta1", required=True)
    p.add_argument("--beta2", help="defaults to beta1 + 1")
    common(p)
    p.set_defaults(func=_cmd_measure_compare)

    p = sub.add_parser("entropy", help="word counts and entropy estimate of a shift")
    p.add_argument("--pi1", required=True, help="expansion of 1 as 'pre|period'")
    p.add_argument("--n", type=int, default=18)
    common(p, beta=False)
    p.set_defaults(func=_cmd_entropy)

    p = sub.add_parser("sft", help="compile the shift automaton")
    p.add_argument("--pi1", required=True)
    p.add_argument("--emit", choices=("json", "dot"), default="json")
    common(p, beta=False)
    p.set_defaults(func=_cmd_sft)

    p = sub.add_parser("match", help="matching of the critical orbits")
    p.add_argument("--beta", required=True)
    common(p)
    p.set_defaults(func=_cmd_match)

    p = sub.add_parser("solve", help="base from a prescribed expansion of 1")
    p.add_argument("--target", required=True, help="sequence as 'pre|period'")
    common(p, beta=False)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("approx", help="nearby simple bases via periodic approximants")
    p.add_argument("--beta", required=True)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--prefix", type=int, default=64)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=_cmd_approx)

    p = sub.add_parser("validate", help="is a sequence the expansion of 1 of some base?")
    p.add_argument("--seq", required=True)
    common(p, beta=False)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("w-word", help="prefix of the substitution boundary word")
    p.add_argument("--n", type=int, required=True)
    common(p, beta=False)
    p.set_defaults(func=_cmd_w_word)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (OrbitUnresolved, PrecisionExhausted) as exc:
        print(f"unresolved: {exc}", file=sys.stderr)
        return 3
    except (SpecError, PrefixTooShort, SolveError, CanonicalizationCycle) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NegabetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
