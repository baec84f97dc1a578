"""The shift of a base: tail bounds, a recognizing automaton, and entropy.

Every sequence of the shift has all of its tails strictly above the lower
boundary word and weakly below the expansion of 1.  For a purely periodic
expansion of 1 the recognizer is a subshift of finite type; otherwise it
is the sofic bound-tracking automaton, flagged as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import PowerIterationError, SpecError
from .expansion import DigitWord, EvPeriodic
from .order import star_zero


class TailBounds(NamedTuple):
    lower: EvPeriodic
    upper: EvPeriodic
    lower_strict: bool = True
    upper_strict: bool = False


def tail_bounds(pi1: EvPeriodic) -> TailBounds:
    """Two-sided tail bounds of the shift defined by an expansion of 1."""
    return TailBounds(lower=star_zero(pi1), upper=pi1)


class _BoundTracker:
    """Digit access into a bound word with tie positions folded to a finite set.

    A tie of length L constrains the future through the tail at L and the
    parity of L; both survive reduction of L modulo an even multiple of the
    period once L passes the preperiod.
    """

    def __init__(self, word: EvPeriodic):
        self.word = word
        self.pre = len(word.preperiod)
        self.mod = math.lcm(2, len(word.period))

    def canon(self, length: int) -> int:
        if length < self.pre + self.mod:
            return length
        return self.pre + (length - self.pre) % self.mod

    def next_digit(self, tie_len: int) -> int:
        return self.word.digit(tie_len + 1)


@dataclass(frozen=True)
class SftAutomaton:
    """Deterministic labeled graph recognizing the shift's sequences.

    transitions maps (state, digit) -> state; every state is reachable and
    has at least one outgoing edge.  ``sft`` records whether the language
    is a genuine subshift of finite type (purely periodic expansion of 1).
    """

    n_states: int
    start: int
    transitions: dict
    alphabet_max: int
    sft: bool

    def successors(self, state: int) -> list[tuple[int, int]]:
        a = self.alphabet_max
        out = []
        for c in range(1, a + 1):
            t = self.transitions.get((state, c))
            if t is not None:
                out.append((c, t))
        return out

    def run_set(self, states: frozenset, word) -> frozenset:
        cur = states
        for c in word:
            cur = frozenset(
                t for s in cur
                if (t := self.transitions.get((s, c))) is not None
            )
            if not cur:
                break
        return cur

    def count_matrix(self) -> np.ndarray:
        m = np.zeros((self.n_states, self.n_states))
        for (s, _c), t in self.transitions.items():
            m[s, t] += 1
        return m

    def to_dot(self) -> str:
        lines = ["digraph shift {", f'  start [shape=point]; start -> {self.start};']
        for (s, c), t in sorted(self.transitions.items()):
            lines.append(f'  {s} -> {t} [label="{c}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "states": list(range(self.n_states)),
            "start": self.start,
            "alphabet_max": self.alphabet_max,
            "sft": self.sft,
            "edges": [
                {"from": s, "digit": c, "to": t}
                for (s, c), t in sorted(self.transitions.items())
            ],
        }


def _legal_or_tie(c: int, bound_digit: int, position: int, want_below: bool) -> tuple[bool, bool]:
    """(legal, still_tied) for one digit against a bound at a 1-based position."""
    if c == bound_digit:
        return True, True
    smaller = (c < bound_digit) if position % 2 == 1 else (c > bound_digit)
    return (smaller == want_below), False


@lru_cache(maxsize=128)
def build_sft(pi1: EvPeriodic) -> SftAutomaton:
    """Compile the shift's tail bounds into a deterministic automaton.

    States carry the set of positions at which the processed history still
    ties with the upper or lower bound word; a new comparison window opens
    at every step.  Determinization over tie sets keeps the construction
    correct without any assumption on how ties nest.
    """
    upper = _BoundTracker(pi1)
    lower = _BoundTracker(star_zero(pi1))
    a = pi1.alphabet_max

    def trans(state, c):
        uties, lties = state
        new_u, new_l = set(), set()
        for length in uties | {0}:
            ok, tied = _legal_or_tie(c, upper.next_digit(length), length + 1, want_below=True)
            if not ok:
                return None
            if tied:
                new_u.add(upper.canon(length + 1))
        for length in lties | {0}:
            ok, tied = _legal_or_tie(c, lower.next_digit(length), length + 1, want_below=False)
            if not ok:
                return None
            if tied:
                new_l.add(lower.canon(length + 1))
        return (frozenset(new_u), frozenset(new_l))

    start = (frozenset(), frozenset())
    states = {start}
    edges = {}
    frontier = [start]
    while frontier:
        s = frontier.pop()
        for c in range(1, a + 1):
            t = trans(s, c)
            if t is None:
                continue
            edges[(s, c)] = t
            if t not in states:
                states.add(t)
                frontier.append(t)

    # the shift of a valid expansion of 1 has no dead ends
    dead = {s for s in states if not any((s, c) in edges for c in range(1, a + 1))}
    if dead:
        raise SpecError("bound words admit no infinite continuation; is pi1 valid?")

    index = {s: i for i, s in enumerate(sorted(states, key=repr))}
    transitions = {(index[s], c): index[t] for (s, c), t in edges.items()}
    return SftAutomaton(
        n_states=len(states),
        start=index[start],
        transitions=transitions,
        alphabet_max=a,
        sft=pi1.is_purely_periodic,
    )


def word_in_shift(pi1: EvPeriodic, u: DigitWord) -> bool:
    """Does the word occur in some sequence of the shift?"""
    if any(d < 1 or d > pi1.alphabet_max for d in u):
        return False
    aut = build_sft(pi1)
    return bool(aut.run_set(frozenset(range(aut.n_states)), tuple(u)))


def count_words(pi1: EvPeriodic, n: int) -> list[int]:
    """Exact |B_k| for k = 1..n by path counting over state sets.

    Words may occur anywhere inside a sequence, so counting starts from
    the set of all states; determinism makes words and set-paths match up
    one to one.
    """
    if n < 1:
        raise SpecError("need n >= 1")
    aut = build_sft(pi1)
    full = frozenset(range(aut.n_states))

    @lru_cache(maxsize=None)
    def succ(node: frozenset, c: int) -> frozenset:
        return frozenset(
            t for s in node if (t := aut.transitions.get((s, c))) is not None
        )

    counts = []
    dist = {full: 1}
    for _ in range(n):
        ndist: dict = {}
        for node, cnt in dist.items():
            for c in range(1, aut.alphabet_max + 1):
                t = succ(node, c)
                if t:
                    ndist[t] = ndist.get(t, 0) + cnt
        counts.append(sum(ndist.values()))
        dist = ndist
    return counts


def brute_force_words(pi1: EvPeriodic, n: int) -> list[int]:
    """Test oracle: enumerate legal words directly from the tail bounds.

    Walks the tree of words keeping, for every suffix start, the length of
    its still-undecided comparison against each bound word.  Exponential;
    keep n at 12 or below.
    """
    if n > 12:
        raise SpecError("brute force enumeration is capped at n = 12")
    upper = pi1
    lower = star_zero(pi1)
    a = pi1.alphabet_max
    counts = [0] * (n + 1)

    def rec(depth, u_ties, l_ties):
        if depth == n:
            return
        for c in range(1, a + 1):
            ok = True
            nu, nl = [], []
            for m in u_ties + [0]:
                legal, tied = _legal_or_tie(c, upper.digit(m + 1), m + 1, want_below=True)
                if not legal:
                    ok = False
                    break
                if tied:
                    nu.append(m + 1)
            if ok:
                for m in l_ties + [0]:
                    legal, tied = _legal_or_tie(c, lower.digit(m + 1), m + 1, want_below=False)
                    if not legal:
                        ok = False
                        break
                    if tied:
                        nl.append(m + 1)
            if ok:
                counts[depth + 1] += 1
                rec(depth + 1, nu, nl)

    rec(0, [], [])
    return counts[1:]


class EntropyEstimate(NamedTuple):
    estimate: float
    upper_bound: float
    counts: tuple


def entropy_estimate(pi1: EvPeriodic, n: int) -> EntropyEstimate:
    """log |B_n| / n plus the subadditive upper bound min_k log |B_k| / k."""
    if n < 2:
        raise SpecError("need n >= 2")
    counts = count_words(pi1, n)
    est = math.log(counts[-1]) / n
    ub = min(math.log(c) / (k + 1) for k, c in enumerate(counts))
    return EntropyEstimate(est, ub, tuple(counts))


def automaton_entropy(aut: SftAutomaton, tol: float = 1e-10, max_iter: int = 100_000) -> float:
    """log of the spectral radius of the transition-count matrix.

    Power iteration on the matrix plus the identity (the shift removes
    periodicity without moving the dominant eigenvector); convergence is
    checked on the residual and non-convergence is an error.
    """
    if aut.n_states == 0:
        raise SpecError("empty automaton")
    m = aut.count_matrix() + np.eye(aut.n_states)
    v = np.ones(aut.n_states) / aut.n_states
    lam = 1.0
    for _ in range(max_iter):
        w = m @ v
        lam = float(np.max(w))
        if lam == 0:
            raise PowerIterationError("transition matrix is nilpotent")
        w /= lam
        if float(np.max(np.abs(m @ w - lam * w))) <= tol * lam:
            return math.log(lam - 1.0)
        v = w
    raise PowerIterationError(f"power iteration did not converge in {max_iter} steps")
