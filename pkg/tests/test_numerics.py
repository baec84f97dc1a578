import random
from fractions import Fraction

import mpmath
import pytest

from negabeta import SpecError, compare_to_rational, floor_beta_times, make_beta
from negabeta.errors import PrecisionExhausted
from negabeta.numerics import Beta


def bisect_root(coeffs_high, lo, hi, width):
    """Independent oracle: plain bisection on exact rationals."""
    def ev(x):
        acc = Fraction(0)
        for c in coeffs_high:
            acc = acc * x + c
        return acc

    lo, hi = Fraction(lo), Fraction(hi)
    assert ev(lo) * ev(hi) < 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        if ev(lo) * ev(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


def test_make_beta_golden_ratio(phi):
    b = phi.beta_point()
    assert (b * b - b - 1).is_zero()
    lo, hi = phi.refine(Fraction(1, 10**12))
    mid = float((lo + hi) / 2)
    assert abs(mid - (1 + 5**0.5) / 2) < 1e-10


def test_make_beta_tribonacci_against_bisection(tribonacci):
    expected = bisect_root((1, -1, -1, -1), 1, 2, Fraction(1, 10**12))
    lo, hi = tribonacci.refine(Fraction(1, 10**12))
    assert abs((lo + hi) / 2 - expected) < Fraction(1, 10**10)
    assert str(tribonacci.decimal_str(10)) == "1.8392867552"


def test_make_beta_rejects_p_above_q():
    with pytest.raises(SpecError):
        make_beta("pisot2:p=2,q=1")


@pytest.mark.parametrize("spec", [
    "nonsense", "poly:[1,2", "pisot2:p=0,q=1", "multinacci:q=1,m=1",
    "dec:0.5", "poly:[1,-1,-1]@(0.5,2)",
])
def test_make_beta_rejects_bad_specs(spec):
    with pytest.raises(SpecError):
        make_beta(spec)


def test_spec_string_round_trip(phi, tribonacci, plastic):
    for beta in (phi, tribonacci, plastic, make_beta("dec:2.5")):
        again = make_beta(beta.spec_string())
        assert again == beta


def test_floor_examples(phi):
    assert floor_beta_times(phi, phi.one()) == 1
    x = 2 - phi.beta_point()
    assert floor_beta_times(phi, x) == 0


def test_floor_boundary_exact_one():
    # beta root of x^3 - 2x^2 + x - 1; beta * (1 - beta(2 - beta)) is exactly 1
    beta = make_beta("poly:[1,-2,1,-1]@(1.7,1.8)")
    b = beta.beta_point()
    x = 1 - b * (2 - b)
    assert (x.times_beta() - 1).is_zero()
    assert floor_beta_times(beta, x) == 1


def test_decimal_floor_and_tie_guard():
    d = make_beta("dec:2.5")
    assert floor_beta_times(d, Fraction(1, 2)) == 1
    tight = Beta.from_decimal(Fraction(5, 2), precision=8)
    x = Fraction(2, 5) + Fraction(1, 2**30)   # 2.5*x just above the integer 1
    with pytest.raises(PrecisionExhausted):
        floor_beta_times(tight, x)
    # an exact integer hit is legal, not a tie
    assert floor_beta_times(tight, Fraction(2, 5)) == 1


def test_compare_to_rational(phi, tribonacci):
    x = 2 - phi.beta_point()
    assert compare_to_rational(x, Fraction(1, 2)) == -1
    assert x.compare(2 - phi.beta_point()) == 0
    # high-precision ordering: 1 - 1/beta^2 vs 0.70444 needs real refinement
    y = 1 - (tribonacci.beta_point() ** 2).inverse()
    with mpmath.workdps(50):
        b = mpmath.findroot(lambda t: t**3 - t**2 - t - 1, 1.84)
        ref = 1 - 1 / b**2
        expected = -1 if ref < mpmath.mpf("0.70444") else 1
    assert compare_to_rational(y, Fraction(70444, 100000)) == expected


def test_pisot2_identities():
    for p in range(1, 4):
        for q in range(p, 5):
            beta = make_beta(f"pisot2:p={p},q={q}")
            b = beta.beta_point()
            assert (b * b - q * b - p).is_zero()
            assert beta.floor_value() == q


def _mp_beta(coeffs_high, approx):
    return mpmath.findroot(
        lambda t: sum(c * t ** (len(coeffs_high) - 1 - i) for i, c in enumerate(coeffs_high)),
        approx,
    )


def test_floor_matches_200_digit_evaluation(phi, tribonacci):
    """Exact floors agree with a 200-digit numeric oracle on random points."""
    from negabeta.numerics import FieldPoint

    rng = random.Random(20240817)
    cases = [(phi, 1.618033988749895), (tribonacci, 1.839286755214161)]
    with mpmath.workdps(200):
        for beta, approx in cases:
            b_mp = _mp_beta(beta.coeffs, approx)
            deg = beta.degree
            done = 0
            while done < 500:
                vec = [Fraction(rng.randint(-30, 30), rng.randint(1, 30)) for _ in range(deg)]
                val = sum(mpmath.mpf(c.numerator) / c.denominator * b_mp**i
                          for i, c in enumerate(vec))
                if not 0 < val <= 1:
                    continue
                # stay away from numeric-tie trouble in the oracle itself
                if abs(val * b_mp - mpmath.nint(val * b_mp)) < mpmath.mpf(10) ** -150:
                    continue
                x = FieldPoint(beta, vec)
                assert floor_beta_times(beta, x) == int(mpmath.floor(val * b_mp))
                done += 1


def test_order_consistent_with_decimal_evaluation(phi):
    rng = random.Random(7)
    from negabeta.numerics import FieldPoint

    with mpmath.workdps(60):
        b_mp = (1 + mpmath.sqrt(5)) / 2
        for _ in range(300):
            u = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(2)]
            v = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(2)]
            x, y = FieldPoint(phi, u), FieldPoint(phi, v)
            xv = mpmath.mpf(u[0].numerator) / u[0].denominator + \
                mpmath.mpf(u[1].numerator) / u[1].denominator * b_mp
            yv = mpmath.mpf(v[0].numerator) / v[0].denominator + \
                mpmath.mpf(v[1].numerator) / v[1].denominator * b_mp
            c = x.compare(y)
            if c == 0:
                assert abs(xv - yv) < mpmath.mpf(10) ** -50
            else:
                assert (xv < yv) == (c < 0)


def test_field_inverse(phi):
    x = 2 - phi.beta_point()
    assert (x * x.inverse() - 1).is_zero()
    with pytest.raises(ZeroDivisionError):
        (x - x).inverse()


def test_non_minimal_defining_polynomial():
    """(x^2-x-1)(x-3) is accepted; zero tests see through the extra factor."""
    beta = make_beta("poly:[1,-4,2,3]@(1.5,2.0)")
    b = beta.beta_point()
    assert (b * b - b - 1).is_zero()
    assert not (b - 3).is_zero()
    assert floor_beta_times(beta, beta.one()) == 1
