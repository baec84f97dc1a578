import json
import math
import random
from fractions import Fraction

import pytest

from negabeta import (
    EvPeriodic,
    automaton_entropy,
    brute_force_words,
    build_sft,
    count_words,
    entropy_estimate,
    expand,
    tail_bounds,
    word_in_shift,
)
from negabeta.shiftspace import SftAutomaton
from negabeta import polys

E = EvPeriodic

GOLDEN_SQ = E((), (3, 2))
BASE_212 = E((), (2, 1, 2))
BASE_3 = E((), (3,))
PHI_PI = E((2,), (1,))


def test_tail_bounds():
    tb = tail_bounds(GOLDEN_SQ)
    assert tb.lower == E((1,), (3, 2)) and tb.upper == GOLDEN_SQ
    assert tb.lower_strict and not tb.upper_strict
    tb = tail_bounds(BASE_212)
    assert tb.lower == E((), (1, 2, 1, 1))
    tb = tail_bounds(PHI_PI)
    assert tb.lower == E((1, 2), (1,))


def test_build_sft_flags():
    assert build_sft(GOLDEN_SQ).sft
    assert not build_sft(PHI_PI).sft


def test_counts_match_brute_force():
    for pi1 in (GOLDEN_SQ, BASE_212, BASE_3, PHI_PI):
        assert count_words(pi1, 9) == brute_force_words(pi1, 9)


def test_counts_basic_and_monotone():
    assert count_words(GOLDEN_SQ, 1) == [3]
    assert count_words(PHI_PI, 1) == [2]
    for pi1 in (GOLDEN_SQ, BASE_212, PHI_PI):
        counts = count_words(pi1, 10)
        assert all(a <= b for a, b in zip(counts, counts[1:]))


def test_word_in_shift_against_genuine_expansions(phi, phi2):
    # (3)^inf is the expansion of 3/(phi^2+1): the word 33 does occur
    b2 = phi2.beta_point()
    assert expand(phi2, 3 * (b2 + 1).inverse(), 4) == (3, 3, 3, 3)
    assert word_in_shift(GOLDEN_SQ, (3, 3))
    # likewise 22 in the golden shift
    b = phi.beta_point()
    assert expand(phi, 2 * (b + 1).inverse(), 4) == (2, 2, 2, 2)
    assert word_in_shift(PHI_PI, (2, 2))
    # a run past the expansion of 1 is forbidden
    assert not word_in_shift(PHI_PI, (2, 1, 1, 1, 2))
    assert word_in_shift(GOLDEN_SQ, (1,))
    assert not word_in_shift(GOLDEN_SQ, (4,))


def test_subword_closure():
    rng = random.Random(13)
    aut = build_sft(BASE_212)
    full = frozenset(range(aut.n_states))
    for _ in range(200):
        w = tuple(rng.randint(1, 2) for _ in range(rng.randint(2, 8)))
        if word_in_shift(BASE_212, w):
            for i in range(len(w)):
                for j in range(i + 1, len(w) + 1):
                    assert word_in_shift(BASE_212, w[i:j])


def _perron_log_oracle(aut: SftAutomaton) -> tuple[float, float]:
    """Exact characteristic-polynomial bracket for the spectral radius."""
    from negabeta.measure import _charpoly

    m = [[Fraction(0)] * aut.n_states for _ in range(aut.n_states)]
    for (s, _c), t in aut.transitions.items():
        m[s][t] += 1
    p = _charpoly(m)
    bound = polys.root_upper_bound(p)
    ivs = polys.isolate_roots(p, Fraction(1, 100), bound)
    assert ivs, "no positive dominant root found"
    lo, hi = ivs[-1]
    if lo == hi:
        return math.log(lo), math.log(hi)
    f = polys.squarefree_part(p)
    s_lo = polys.poly_eval(f, lo)
    while hi - lo > Fraction(1, 10**10):
        mid = (lo + hi) / 2
        v = polys.poly_eval(f, mid)
        if v == 0:
            lo = hi = mid
            break
        if s_lo * v < 0:
            hi = mid
        else:
            lo, s_lo = mid, v
    return math.log(lo), math.log(hi)


@pytest.mark.parametrize("pi1,logbeta", [
    (GOLDEN_SQ, math.log((3 + 5**0.5) / 2)),
    (BASE_3, math.log(2.0)),
])
def test_automaton_entropy_known_values(pi1, logbeta):
    h = automaton_entropy(build_sft(pi1))
    assert abs(h - logbeta) < 1e-6


def test_automaton_entropy_against_charpoly_oracle():
    for pi1 in (GOLDEN_SQ, BASE_212, BASE_3):
        aut = build_sft(pi1)
        h = automaton_entropy(aut)
        lo, hi = _perron_log_oracle(aut)
        assert lo - 1e-6 <= h <= hi + 1e-6


def test_single_loop_has_zero_entropy():
    aut = SftAutomaton(n_states=1, start=0, transitions={(0, 1): 0},
                       alphabet_max=1, sft=True)
    assert abs(automaton_entropy(aut)) < 1e-12


def test_entropy_estimates():
    est = entropy_estimate(GOLDEN_SQ, 18)
    assert abs(est.estimate - math.log((3 + 5**0.5) / 2)) < 0.08
    est = entropy_estimate(PHI_PI, 18)
    assert abs(est.estimate - math.log((1 + 5**0.5) / 2)) < 0.08
    est = entropy_estimate(BASE_3, 10)
    assert abs(est.estimate - math.log(2.0)) < 0.12
    assert est.upper_bound >= math.log(2.0) - 1e-12


def test_entropy_monotone_with_base():
    h212 = automaton_entropy(build_sft(BASE_212))
    h32 = automaton_entropy(build_sft(GOLDEN_SQ))
    assert h212 < h32  # 1.7549 < 2.618


def test_exports():
    aut = build_sft(GOLDEN_SQ)
    dot = aut.to_dot()
    assert dot.startswith("digraph") and 'label="3"' in dot
    blob = json.dumps(aut.to_json(), sort_keys=True)
    data = json.loads(blob)
    assert data["sft"] is True
    assert len(data["edges"]) == len(aut.transitions)
