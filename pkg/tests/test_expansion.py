import random
from fractions import Fraction

import pytest

from negabeta import (
    EvPeriodic,
    SpecError,
    evaluate,
    expand,
    make_beta,
    orbit_of_one,
    pi_of_one,
    step,
    truncation_bound,
)
from negabeta.numerics import point_sign


def test_step_examples(phi, phi2):
    d, nxt = step(phi, phi.one())
    assert d == 2
    assert (nxt - (2 - phi.beta_point())).is_zero()
    # beta = phi^2 sends 2-phi back to 1 through an exact integer product
    d, nxt = step(phi2, 3 - phi2.beta_point())
    assert d == 2
    assert (nxt - 1).is_zero()
    d, nxt = step(make_beta("dec:2.5"), Fraction(1))
    assert (d, nxt) == (3, Fraction(1, 2))


def test_expand_examples(phi, phi2):
    assert expand(phi, 1, 5) == (2, 1, 1, 1, 1)
    assert expand(phi2, 1, 6) == (3, 2, 3, 2, 3, 2)
    assert expand(make_beta("dec:2.5"), 1, 4) == (3, 2, 2, 1)


def test_expand_rejects_points_outside_domain(phi):
    for x in (Fraction(0), Fraction(-1, 2), Fraction(3, 2)):
        with pytest.raises(SpecError):
            expand(phi, x, 3)
        with pytest.raises(SpecError):
            expand(make_beta("dec:2.5"), x, 3)


def test_orbit_classifications(phi, phi2, tribonacci):
    rec = orbit_of_one(phi)
    assert (rec.kind, rec.pre_len, rec.period_len) == ("eventually-periodic", 1, 1)
    assert (rec.points[1] - (2 - phi.beta_point())).is_zero()

    rec = orbit_of_one(phi2)
    assert (rec.kind, rec.period_len) == ("periodic", 2)

    rec = orbit_of_one(tribonacci)
    assert (rec.kind, rec.pre_len, rec.period_len) == ("eventually-periodic", 2, 1)
    fixed = 1 - (tribonacci.beta_point() ** 2).inverse()
    assert (rec.points[2] - fixed).is_zero()


def test_orbit_decimal():
    assert orbit_of_one(make_beta("dec:2.5"), 200).kind == "truncated"
    rec = orbit_of_one(make_beta("dec:2"))
    assert (rec.kind, rec.period_len) == ("periodic", 1)


def test_pi_of_one(phi, phi2, plastic):
    p = pi_of_one(phi2)
    assert p.is_simple and str(p.sequence) == "|32"
    p = pi_of_one(phi)
    assert not p.is_simple and str(p.sequence) == "2|1"
    p = pi_of_one(plastic)
    assert not p.is_simple and str(p.sequence) == "211|2"


def test_evaluate_closed_forms(phi, phi2):
    assert (evaluate(EvPeriodic((), (3, 2)), phi2) - 1).is_zero()
    assert (evaluate(EvPeriodic((2,), (1,)), phi) - 1).is_zero()
    assert evaluate(EvPeriodic((), (3,)), make_beta("dec:2")) == 1


def test_partial_sums_converge_to_closed_form(phi):
    """Brute-force prefixes of 2(1)^inf approach 1 within the stated bound."""
    seq = EvPeriodic((2,), (1,))
    prev = None
    for n in (5, 10, 20, 40):
        v = evaluate(seq.prefix(n), phi)
        err = v - 1
        err = err if err.sign() >= 0 else -err
        bound = truncation_bound(phi, n)
        assert point_sign(bound - err) >= 0
        if prev is not None:
            assert point_sign(prev - err) > 0
        prev = err


def test_round_trip_bound(phi, tribonacci):
    rng = random.Random(3)
    for beta in (phi, tribonacci):
        for _ in range(20):
            x = Fraction(rng.randint(1, 999), 1000)
            w = expand(beta, x, 40)
            assert all(1 <= d <= beta.alphabet_max for d in w)
            err = evaluate(w, beta) - x
            err = err if err.sign() >= 0 else -err
            assert point_sign(truncation_bound(beta, 40) - err) >= 0


def test_order_compatibility_sample(phi):
    rng = random.Random(11)
    for _ in range(30):
        a = Fraction(rng.randint(1, 998), 1000)
        b = Fraction(rng.randint(1, 998), 1000)
        if a == b:
            continue
        a, b = min(a, b), max(a, b)
        wa, wb = expand(phi, a, 64), expand(phi, b, 64)
        assert wa != wb
        k = next(i for i in range(64) if wa[i] != wb[i])
        if (k + 1) % 2 == 1:
            assert wa[k] < wb[k]
        else:
            assert wa[k] > wb[k]


def test_periodic_expansion_evaluates_to_one(phi2):
    pi = pi_of_one(phi2)
    assert (evaluate(pi.sequence, phi2) - 1).is_zero()
    b212 = make_beta("poly:[1,-2,1,-1]@(1.7,1.8)")
    pi = pi_of_one(b212)
    assert pi.is_simple
    assert (evaluate(pi.sequence, b212) - 1).is_zero()


def test_ev_periodic_canonicalization():
    assert EvPeriodic((2, 1), (1,)) == EvPeriodic((2,), (1,))
    assert EvPeriodic((), (3, 2, 3, 2)) == EvPeriodic((), (3, 2))
    s = EvPeriodic((2, 1), (2, 1))
    assert s.preperiod == () and s.period == (2, 1)
    with pytest.raises(SpecError):
        EvPeriodic((1,), ())


def test_ev_periodic_parse_str_round_trip():
    for text in ("2|1", "|32", "211|2", "|2111"):
        assert str(EvPeriodic.parse(text)) == text
    with pytest.raises(SpecError):
        EvPeriodic.parse("21")


def test_digit_and_shift():
    s = EvPeriodic((2, 1, 2), (1,))
    assert s.prefix(6) == (2, 1, 2, 1, 1, 1)
    assert s.shift(2) == EvPeriodic((2,), (1,))
    assert s.shift(5) == EvPeriodic((), (1,))
