"""Inverse problems: recover a base from its expansion of 1 and use
periodic approximants to exhibit nearby simple bases.

The value equation of an eventually periodic sequence clears to an
integer polynomial in the base; the wanted root is isolated by Sturm
counts (with a monotone digit-comparison bisection to pick among several)
and certified by exact re-expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CanonicalizationCycle,
    PrefixTooShort,
    SolveError,
    SpecError,
)
from .expansion import DEFAULT_BUDGET, DigitWord, EvPeriodic, expand, pi_of_one
from .numerics import Beta
from .order import is_self_admissible, is_valid_expansion_of_one
from . import polys


def value_equation_poly(target: EvPeriodic) -> polys.Poly:
    """Integer polynomial in beta whose roots satisfy evaluate(target) = 1.

    Writing s = -beta, the cleared equation is
    Q_pre(s) (s^p - 1) + Q_per(s) = s^a (s^p - 1) with
    Q_w(s) = sum of -w_i s^(|w|-i); the substitution s -> -beta flips
    the sign of odd-degree coefficients.
    """
    a, p = len(target.preperiod), len(target.period)

    def q_word(word: DigitWord) -> polys.Poly:
        return polys.make_poly([-word[len(word) - 1 - i] for i in range(len(word))])

    s_p = polys.make_poly([0] * p + [1])
    s_a = polys.make_poly([0] * a + [1])
    ring = polys.poly_sub(s_p, polys.make_poly([1]))  # s^p - 1
    lhs = polys.poly_add(polys.poly_mul(q_word(target.preperiod), ring),
                         q_word(target.period))
    g_s = polys.poly_sub(lhs, polys.poly_mul(s_a, ring))
    g_beta = tuple(c if i % 2 == 0 else -c for i, c in enumerate(g_s))
    ints = polys.primitive_int_coeffs(polys.make_poly(g_beta))
    return polys.make_poly(ints)


def _roots_above_one(g: polys.Poly) -> tuple[polys.Poly, list[tuple[Fraction, Fraction]]]:
    """Strip factors at 0 and 1, then isolate the roots in (1, infinity).

    Returns the stripped polynomial (used as the defining polynomial) and
    one isolating interval per root above 1.
    """
    x_minus_1 = polys.make_poly([-1, 1])
    while g and polys.poly_eval(g, Fraction(1)) == 0:
        g = polys.poly_divmod(g, x_minus_1)[0]
    while g and g[0] == 0:
        g = g[1:]
    if polys.degree(g) < 1:
        return g, []
    bound = polys.root_upper_bound(g)
    if bound <= 1:
        return g, []
    while polys.poly_eval(polys.squarefree_part(g), bound) == 0:
        bound += 1
    return g, polys.isolate_roots(g, Fraction(1), bound)


def _expand_rational_base(b: Fraction, n: int) -> DigitWord:
    """Digits of the expansion of 1 for an exact rational base (no guard)."""
    x = Fraction(1)
    out = []
    for _ in range(n):
        f = (b * x).numerator // (b * x).denominator
        out.append(f + 1)
        x = f + 1 - b * x
    return tuple(out)


def _compare_base_with_target(b: Fraction, target: EvPeriodic, g: polys.Poly) -> int:
    """Sign of pi(1) at base b against the target in alternating order.

    Returns 0 only when b itself solves the value equation with matching
    expansion (rational-base corner case).
    """
    n = 64
    while True:
        w = _expand_rational_base(b, n)
        for i in range(1, n + 1):
            a, c = w[i - 1], target.digit(i)
            if a != c:
                s = (a > c) - (a < c)
                return s if i % 2 == 1 else -s
        if polys.poly_eval(g, b) == 0:
            return 0
        n *= 2
        if n > 1 << 16:
            raise SolveError("digit comparison did not separate the base")


def _select_root(
    intervals: list[tuple[Fraction, Fraction]],
    target: EvPeriodic,
    g: polys.Poly,
) -> tuple[Fraction, Fraction]:
    """Pick the isolating interval of the base the target points at.

    With a single candidate it is taken directly; otherwise the monotone
    correspondence between bases and expansions of 1 drives a bisection
    that shrinks a bracket around the wanted root until it meets exactly
    one of the isolating intervals.
    """
    if len(intervals) == 1:
        return intervals[0]
    lo = Fraction(1, 1) + Fraction(1, 16)
    for _ in range(80):
        if _compare_base_with_target(lo, target, g) < 0:
            break
        lo = 1 + (lo - 1) / 2
    else:
        raise SolveError("no base below the target expansion")
    hi = Fraction(target.alphabet_max + 2)

    def intersecting():
        out = []
        for a, b in intervals:
            if (lo < a < hi) if a == b else (a < hi and b > lo):
                out.append((a, b))
        return out

    for _ in range(300):
        hits = intersecting()
        if len(hits) == 1:
            return hits[0]
        if not hits:
            break
        mid = (lo + hi) / 2
        s = _compare_base_with_target(mid, target, g)
        if s == 0:
            return (mid, mid)
        if s < 0:
            lo = mid
        else:
            hi = mid
    raise SolveError("bisection failed to isolate the matching root")


def _beta_from_interval(g: polys.Poly, iv: tuple[Fraction, Fraction]) -> Beta:
    coeffs_high = tuple(reversed(polys.primitive_int_coeffs(g)))
    lo, hi = iv
    if lo != hi:
        # keep the sign change while pushing the left endpoint above 1
        sf = polys.squarefree_part(g)
        s_lo = polys.poly_eval(sf, lo)
        while lo <= 1:
            mid = (lo + hi) / 2
            v = polys.poly_eval(sf, mid)
            if v == 0:
                lo = hi = mid
                break
            if s_lo * v < 0:
                hi = mid
            else:
                lo, s_lo = mid, v
    if lo == hi:
        # rational root: widen to an open interval still isolating it
        sf = polys.squarefree_part(g)
        eps = Fraction(1, 4)
        while True:
            a, b = lo - eps, lo + eps
            if a > 1 and polys.poly_eval(sf, a) != 0 and polys.poly_eval(sf, b) != 0 \
                    and polys.count_roots(sf, a, b) == 1:
                return Beta.from_poly(coeffs_high, a, b)
            eps /= 2
    return Beta.from_poly(coeffs_high, lo, hi)


def beta_from_expansion(
    target: EvPeriodic,
    tol: Fraction = Fraction(1, 10**12),
    require_valid: bool = True,
) -> Beta:
    """The exact base whose expansion of 1 equals the target.

    The defining polynomial comes from clearing the value equation; the
    result is certified by exact re-expansion, so an invalid target is
    always rejected (before or after solving).
    """
    if require_valid:
        rep = is_valid_expansion_of_one(target)
        if not rep.valid:
            raise SpecError(
                f"target is not a valid expansion of 1 "
                f"(condition {rep.failed_condition}, k={rep.witness})"
            )
    beta = _solve_value_equation(target)
    if beta is None:
        raise SolveError("value equation has no root above 1")
    pi = pi_of_one(beta, budget=target.tail_count() + 16)
    if not (pi.resolved and pi.sequence == target):
        raise SolveError("re-expansion does not reproduce the target")
    beta.refine(Fraction(tol))
    return beta


def _solve_value_equation(target: EvPeriodic) -> Beta | None:
    g, intervals = _roots_above_one(value_equation_poly(target))
    if not intervals:
        return None
    iv = _select_root(intervals, target, g)
    return _beta_from_interval(g, iv)


# ---------------------------------------------------------------------------
# periodic approximants


@dataclass(frozen=True)
class ApproximantPlan:
    """Self-admissible periodic candidates built from a certified prefix."""

    source_prefix: DigitWord
    candidates: tuple[EvPeriodic, ...]
    case_tags: tuple[str, ...]
    sides: tuple[str, ...]


def _side_of(candidate: EvPeriodic) -> str:
    return "below" if len(candidate.period) % 2 == 1 else "above"


def periodic_approximants(
    pi1: EvPeriodic | None,
    count: int,
    prefix: DigitWord | None = None,
) -> ApproximantPlan:
    """Periodic self-admissible sequences sharing growing prefixes with pi1.

    Pass the resolved expansion of 1, or (for bases whose orbit never
    resolves) just a certified digit prefix.  Construction follows the
    maximal-digit structure of the sequence: finitely many maximal digits
    yield plain prefix powers past the last one; infinitely many yield the
    self-overlap construction, with the cut parity deciding whether one or
    two extra digits close the period.
    """
    if count < 1:
        raise SpecError("need count >= 1")
    if pi1 is not None:
        if pi1.is_purely_periodic:
            raise SpecError("the base is already simple")
        digit = pi1.digit
        horizon = None
        amax = pi1.digit(1)
        finitely_many = amax not in pi1.period
        src = pi1.prefix(len(pi1.preperiod) + len(pi1.period))
    else:
        if not prefix:
            raise SpecError("need either a resolved expansion or a prefix")
        prefix = tuple(prefix)

        def digit(i: int) -> int:
            if i > len(prefix):
                raise PrefixTooShort(f"needed digit {i} beyond certified prefix")
            return prefix[i - 1]

        horizon = len(prefix)
        amax = prefix[0]
        finitely_many = amax not in prefix[2:]
        src = prefix

    candidates: list[EvPeriodic] = []
    tags: list[str] = []

    def push(word: DigitWord, tag: str) -> None:
        cand = EvPeriodic((), word, amax)
        if cand in candidates:
            return
        if not is_self_admissible(cand).result:
            return
        candidates.append(cand)
        tags.append(tag)

    if finitely_many:
        last = 1
        scan = horizon if horizon is not None else len(pi1.preperiod) + len(pi1.period)
        for i in range(1, scan + 1):
            if digit(i) == amax:
                last = i
        n_max = 2 * (last - 1) + count
        if horizon is not None and n_max > horizon:
            raise PrefixTooShort("prefix too short for the requested candidates")
        for n in range(1, count + 1):
            length = 2 * (last - 1) + n
            push(tuple(digit(i) for i in range(1, length + 1)), "finitely-many-max")
    else:
        n = 3
        guard = 0
        while len(candidates) < count:
            guard += 1
            if guard > 10_000:
                raise SolveError("candidate scan did not produce enough candidates")
            if horizon is not None and n > horizon:
                raise PrefixTooShort("prefix exhausted before enough candidates")
            if digit(n) != amax:
                n += 1
                continue
            j = None
            for jj in range(1, n):
                if all(digit(jj + i) == digit(i) for i in range(1, n - jj + 1)):
                    j = jj
                    break
            k = n
            cap = (horizon - 2) if horizon is not None else n + 4 * (len(pi1.preperiod) + len(pi1.period)) + 64
            while k <= cap and digit(k + 1) == digit(k + 1 - j):
                k += 1
            if k > cap:
                if horizon is not None:
                    raise PrefixTooShort("self-overlap scan left the certified prefix")
                n += 1
                continue
            length = k + 1 if (k - j) % 2 == 1 else k + 2
            push(tuple(digit(i) for i in range(1, length + 1)),
                 "odd-k-j" if (k - j) % 2 == 1 else "even-k-j")
            n += 1

    order = sorted(range(len(candidates)), key=lambda i: len(candidates[i].period))
    candidates = [candidates[i] for i in order]
    tags = [tags[i] for i in order]
    if pi1 is not None and candidates:
        src = pi1.prefix(max(len(c.period) for c in candidates))
    return ApproximantPlan(
        source_prefix=tuple(src),
        candidates=tuple(candidates),
        case_tags=tuple(tags),
        sides=tuple(_side_of(c) for c in candidates),
    )


def canonicalize_expansion_candidate(seq: EvPeriodic) -> EvPeriodic:
    """Rewrite a candidate into the valid expansion of 1 at the same base.

    A candidate failing one of the block-closure conditions is replaced by
    the distinguished member of its block family (prefix power for the
    lowered family, bumped prefix power for the raised one) until the
    validity test passes; the rewritten sequence provably solves the same
    value equation, which is checked, not assumed.
    """
    seen = {seq}
    trace = [seq]
    cur = seq
    for _ in range(64):
        rep = is_valid_expansion_of_one(cur)
        if rep.valid:
            if cur != seq:
                g0 = value_equation_poly(seq)
                g1 = value_equation_poly(cur)
                shared = polys.poly_gcd(g0, g1)
                if not _roots_above_one(shared)[1]:
                    raise SolveError("rewritten candidate lost the base root")
            return cur
        if rep.failed_condition == 3:
            partner = EvPeriodic((), cur.prefix(rep.witness))
        elif rep.failed_condition == 4:
            pre = cur.prefix(rep.witness)
            partner = EvPeriodic((), pre[:-1] + (pre[-1] + 1,))
        else:
            raise SolveError(
                f"candidate fails condition {rep.failed_condition}; no partner exists"
            )
        if partner in seen:
            raise CanonicalizationCycle(f"rewriting cycled: {[str(t) for t in trace]}")
        seen.add(partner)
        trace.append(partner)
        cur = partner
    raise CanonicalizationCycle(f"rewriting did not settle: {[str(t) for t in trace]}")


@dataclass(frozen=True)
class ApproximantResult:
    candidate: EvPeriodic
    case: str
    side: str
    beta_n: Beta | None
    gap: Fraction | None
    simple_certified: bool
    canonical: EvPeriodic | None

    def to_json(self, digits: int = 15) -> dict:
        return {
            "candidate": str(self.candidate),
            "case": self.case,
            "side": self.side,
            "beta_n": None if self.beta_n is None else self.beta_n.spec_string(),
            "beta_n_decimal": None if self.beta_n is None else self.beta_n.decimal_str(digits),
            "gap": None if self.gap is None else float(self.gap),
            "simple_certified": self.simple_certified,
            "canonical": None if self.canonical is None else str(self.canonical),
        }


def _gap(beta: Beta, other: Beta) -> Fraction:
    width = Fraction(1, 10**30)
    a1, b1 = beta.refine(width)
    a2, b2 = other.refine(width)
    return abs((a1 + b1) / 2 - (a2 + b2) / 2)


def solve_candidate(beta: Beta, cand: EvPeriodic, tag: str, side: str) -> ApproximantResult:
    """Solve one approximant candidate against the base it approximates."""
    solved = _solve_value_equation(cand)
    if solved is None:
        return ApproximantResult(cand, tag, side, None, None, False, None)
    rep = is_valid_expansion_of_one(cand)
    canonical = cand if rep.valid else canonicalize_expansion_candidate(cand)
    check = pi_of_one(solved, budget=canonical.tail_count() + 16)
    certified = bool(check.resolved and check.is_simple and check.sequence == canonical)
    return ApproximantResult(
        cand, tag, side, solved, _gap(beta, solved), certified, canonical
    )


def approximate_simple_numbers(
    beta: Beta,
    count: int,
    prefix_len: int = 64,
    budget: int = DEFAULT_BUDGET,
) -> list[ApproximantResult]:
    """Nearby simple bases from periodic approximants of the expansion of 1.

    Every candidate's value equation is solved exactly; candidates that
    fail the validity conditions are canonicalized to the genuine simple
    expansion at the same base, so each solved entry ends certified.
    Candidates whose value equation has no root above 1 (possible below
    the divergence index against the substitution word) are reported with
    an empty base.
    """
    pi = pi_of_one(beta, budget)
    if pi.resolved and pi.is_simple:
        return [ApproximantResult(pi.sequence, "already-simple", "exact", beta,
                                  Fraction(0), True, pi.sequence)]
    if pi.resolved:
        plan = periodic_approximants(pi.sequence, count)
    else:
        length = prefix_len
        while True:
            try:
                plan = periodic_approximants(None, count, prefix=expand(beta, 1, length))
                break
            except PrefixTooShort:
                if length >= 64 * prefix_len:
                    raise
                length *= 2

    return [
        solve_candidate(beta, cand, tag, side)
        for cand, tag, side in zip(plan.candidates, plan.case_tags, plan.sides)
    ]
