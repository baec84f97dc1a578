"""Alternating lexicographic order and admissibility of digit sequences.

Sequences are compared digit by digit; at the first difference the usual
order applies at odd positions and the reversed order at even positions.
On top of the comparator sit the self-admissibility test, the lower
boundary word of the shift, and the full validity test deciding whether a
sequence is the expansion of 1 for some base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import SpecError
from .expansion import DigitWord, EvPeriodic


class AltOrdering(NamedTuple):
    """Comparison outcome: result in {-1, 0, 1}, witness = first differing index."""

    result: int
    witness: int | None


def _diff_sign(a: int, b: int, position: int) -> int:
    """Order contribution of a single digit difference at a 1-based position."""
    s = (a > b) - (a < b)
    return s if position % 2 == 1 else -s


def alt_compare(x: EvPeriodic, y: EvPeriodic) -> AltOrdering:
    """Exact alternating comparison of two eventually periodic sequences."""
    bound = (
        len(x.preperiod)
        + len(y.preperiod)
        + math.lcm(len(x.period), len(y.period))
    )
    for i in range(1, bound + 1):
        a, b = x.digit(i), y.digit(i)
        if a != b:
            return AltOrdering(_diff_sign(a, b, i), i)
    return AltOrdering(0, None)


def rho_distance(x: EvPeriodic, y: EvPeriodic, alphabet_max: int | None = None) -> Fraction:
    """Metric (alphabet size)^-k with k the first differing index; 0 if equal."""
    if alphabet_max is None:
        alphabet_max = max(x.alphabet_max, y.alphabet_max)
    cmp = alt_compare(x, y)
    if cmp.witness is None:
        return Fraction(0)
    return Fraction(1, alphabet_max**cmp.witness)


# ---------------------------------------------------------------------------
# the substitution word: smallest admissible expansion-of-1 boundary

_W_CACHE: list[int] = [2]


def limit_word_prefix(n: int) -> DigitWord:
    """First n symbols of the fixed word of 2 -> 211, 1 -> 2.

    The image of 2 starts with 2, so successive images extend each other
    and the prefix stabilizes.
    """
    if n < 0:
        raise SpecError("prefix length must be nonnegative")
    global _W_CACHE
    while len(_W_CACHE) < n:
        _W_CACHE = [s for c in _W_CACHE for s in ((2, 1, 1) if c == 2 else (2,))]
    return tuple(_W_CACHE[:n])


def compare_with_limit_word(seq: EvPeriodic) -> AltOrdering:
    """Compare an eventually periodic sequence against the substitution word.

    The word is aperiodic, so a first difference always exists.
    """
    chunk = 64
    while True:
        w = limit_word_prefix(chunk)
        for i in range(1, chunk + 1):
            a, b = seq.digit(i), w[i - 1]
            if a != b:
                return AltOrdering(_diff_sign(a, b, i), i)
        chunk *= 2
        if chunk > 1 << 22:
            raise RuntimeError("no difference against the substitution word found")


# ---------------------------------------------------------------------------
# admissibility


class SelfAdmissibility(NamedTuple):
    result: bool
    violating_shift: int | None


def is_self_admissible(seq: EvPeriodic) -> SelfAdmissibility:
    """True iff every shifted tail is <= the sequence in alternating order."""
    for k in range(1, seq.tail_count() + 1):
        if alt_compare(seq.shift(k), seq).result > 0:
            return SelfAdmissibility(False, k)
    return SelfAdmissibility(True, None)


def star_zero(pi1: EvPeriodic) -> EvPeriodic:
    """The strict lower boundary word of the shift with expansion-of-1 pi1.

    Purely periodic pi1 with odd primitive period b_1..b_p yields the
    periodic word (1 b_1 .. b_{p-1} (b_p - 1)); otherwise the word is 1
    followed by pi1 itself.
    """
    if pi1.is_purely_periodic and len(pi1.period) % 2 == 1:
        b = pi1.period
        if b[-1] == 1:
            raise SpecError(
                "boundary word underflows (odd period ending in digit 1); "
                "no valid expansion of 1 has this shape"
            )
        block = (1,) + b[:-1] + (b[-1] - 1,)
        return EvPeriodic((), block, pi1.alphabet_max)
    return EvPeriodic((1,) + pi1.preperiod, pi1.period, pi1.alphabet_max)


def is_admissible(pi1: EvPeriodic, seq: EvPeriodic) -> bool:
    """True iff every tail of seq lies strictly above the lower boundary
    word and weakly below pi1."""
    lower = star_zero(pi1)
    for k in range(seq.tail_count()):
        t = seq.shift(k)
        if alt_compare(lower, t).result >= 0:
            return False
        if alt_compare(t, pi1).result > 0:
            return False
    return True


# ---------------------------------------------------------------------------
# validity of an expansion of 1


def _in_block_closure(seq: EvPeriodic, blocks: tuple[DigitWord, ...]) -> bool:
    """Is seq an infinite concatenation of the given blocks?

    Parse positions beyond the preperiod are identified modulo the period,
    giving a finite position graph; membership holds iff some reachable
    position lies on a cycle of block matches.
    """
    pre, per = len(seq.preperiod), len(seq.period)

    def norm(p: int) -> int:
        return p if p < pre else pre + (p - pre) % per

    def matches(p: int, block: DigitWord) -> bool:
        return all(seq.digit(p + i + 1) == block[i] for i in range(len(block)))

    succ: dict[int, list[int]] = {}
    stack, seen = [0], {0}
    while stack:
        p = stack.pop()
        outs = []
        for b in blocks:
            if b and all(d >= 1 for d in b) and matches(p, b):
                q = norm(p + len(b))
                outs.append(q)
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        succ[p] = outs

    color: dict[int, int] = {}

    def has_cycle(p: int) -> bool:
        color[p] = 1
        for q in succ[p]:
            c = color.get(q, 0)
            if c == 1:
                return True
            if c == 0 and has_cycle(q):
                return True
        color[p] = 2
        return False

    return has_cycle(0)


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    failed_condition: int | None = None
    witness: int | None = None

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "failed_condition": self.failed_condition,
            "witness_k": self.witness,
        }


def is_valid_expansion_of_one(seq: EvPeriodic) -> ValidityReport:
    """Decide whether seq is the expansion of 1 for some base > 1.

    Four conditions: (1) self-admissibility, (2) strictly above the
    substitution word, and two families of excluded block concatenations.
    Condition (3) excludes {d_1..d_{k-1}(d_k - 1) 1, d_1..d_k} mixtures
    (other than the pure power of the prefix itself) whenever the prefix
    power beats the substitution word; condition (4) excludes
    {d_1..d_k 1, d_1..d_{k-1}(d_k + 1)} mixtures under the analogous gate.
    The scan over k is finite: past preperiod + twice the period both the
    gates and the parses repeat.
    """
    ok, k = is_self_admissible(seq)
    if not ok:
        return ValidityReport(False, 1, k)

    cmp_w = compare_with_limit_word(seq)
    if cmp_w.result <= 0:
        return ValidityReport(False, 2, cmp_w.witness)

    kmax = len(seq.preperiod) + 2 * len(seq.period)
    for k in range(1, kmax + 1):
        prefix = seq.prefix(k)

        gate3 = EvPeriodic((), prefix)
        if compare_with_limit_word(gate3).result > 0:
            blocks = (prefix[:-1] + (prefix[-1] - 1, 1), prefix)
            if _in_block_closure(seq, blocks) and seq != gate3:
                return ValidityReport(False, 3, k)

        bumped = prefix[:-1] + (prefix[-1] + 1,)
        gate4 = EvPeriodic((), bumped)
        if compare_with_limit_word(gate4).result > 0:
            blocks = (prefix + (1,), bumped)
            if _in_block_closure(seq, blocks):
                return ValidityReport(False, 4, k)

    return ValidityReport(True)
