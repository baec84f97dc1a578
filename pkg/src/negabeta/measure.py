"""Invariant densities of the negative beta map and their comparison.

The density of the unique absolutely continuous invariant measure is a
piecewise constant function whose interior breakpoints are the orbit of 1
(excluding 1 itself).  When the orbit resolves to a finite set the density
and its normalization constant are computed in closed form, exactly;
comparison of two densities across different number fields is also exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import OrbitUnresolved, PrecisionExhausted, SpecError
from .expansion import orbit_of_one, DEFAULT_BUDGET
from .numerics import Beta, FieldPoint, as_point, point_inverse, point_sign
from . import polys


def _cmp(x, y) -> int:
    if isinstance(x, FieldPoint):
        return x.compare(y)
    if isinstance(y, FieldPoint):
        return -y.compare(x)
    return (x > y) - (x < y)


def _pmin(x, y):
    return x if _cmp(x, y) <= 0 else y


def _pmax(x, y):
    return x if _cmp(x, y) >= 0 else y


@dataclass(frozen=True)
class PiecewiseDensity:
    """Unnormalized invariant density: constant values on (x_i, x_{i+1}].

    breakpoints run from 0 to 1 inclusive; values[i] is the density on
    (breakpoints[i], breakpoints[i+1]]; K is the exact total integral.
    Values are nonnegative; bases below the golden ratio genuinely have
    intervals the dynamics never revisits, where the density is exactly 0.
    """

    beta: Beta
    breakpoints: tuple
    values: tuple
    K: object

    def __post_init__(self):
        if len(self.values) != len(self.breakpoints) - 1:
            raise SpecError("need one value per interval")
        for v in self.values:
            if point_sign(v) < 0:
                raise SpecError("density values must be nonnegative")
        total = None
        for i, v in enumerate(self.values):
            piece = v * (self.breakpoints[i + 1] - self.breakpoints[i])
            total = piece if total is None else total + piece
        if point_sign(total - self.K) != 0:
            raise SpecError("normalization constant does not match the integral")

    @property
    def interior_breakpoints(self) -> tuple:
        return self.breakpoints[1:-1]

    def value_at(self, x):
        """Density on the interval containing x, for 0 < x <= 1."""
        x = as_point(self.beta, x) if not isinstance(x, FieldPoint) else x
        if _cmp(x, 0) <= 0 or _cmp(x, 1) > 0:
            raise SpecError("density is defined on (0, 1]")
        for i in range(len(self.values)):
            if _cmp(x, self.breakpoints[i + 1]) <= 0:
                return self.values[i]
        return self.values[-1]

    def integral_raw(self, a, b):
        """Exact unnormalized integral of the density over (a, b)."""
        if not isinstance(a, FieldPoint):
            a = as_point(self.beta, a)
        if not isinstance(b, FieldPoint):
            b = as_point(self.beta, b)
        total = 0 * self.K
        for i, v in enumerate(self.values):
            lo = _pmax(a, self.breakpoints[i])
            hi = _pmin(b, self.breakpoints[i + 1])
            if _cmp(hi, lo) > 0:
                total = total + v * (hi - lo)
        return total

    def normalized_values(self) -> tuple:
        kinv = point_inverse(self.K)
        return tuple(v * kinv for v in self.values)

    def to_json(self, digits: int = 15) -> dict:
        from .numerics import point_decimal_str

        return {
            "breakpoints": [point_decimal_str(b, digits) for b in self.breakpoints],
            "values": [point_decimal_str(v, digits) for v in self.values],
            "K": point_decimal_str(self.K, digits),
            "normalized": False,
            "indicator": "geq",
        }


def _orbit_weights(beta: Beta, budget: int):
    """Orbit points of 1 paired with their total series weight.

    Summing over all iterates with a fixed eventually periodic index class
    collapses to one geometric factor per class.
    """
    rec = orbit_of_one(beta, budget)
    if not rec.resolved:
        raise OrbitUnresolved(
            f"orbit of 1 did not resolve within budget {budget}"
        )
    if beta.is_exact:
        neg_inv = -beta.beta_point().inverse()
    else:
        neg_inv = Fraction(-1) / beta.value
    k = rec.pre_len if rec.kind == "eventually-periodic" else 0
    m = rec.period_len
    cycle_scale = point_inverse(1 - neg_inv**m)
    pairs = []
    for n, x in enumerate(rec.points):
        w = neg_inv**n
        if n < k:
            pairs.append((x, w))
        else:
            pairs.append((x, w * cycle_scale))
    return rec, pairs


def density(beta: Beta, budget: int = DEFAULT_BUDGET) -> PiecewiseDensity:
    """Exact piecewise constant invariant density (unnormalized).

    Requires the orbit of 1 to resolve within the budget; the indicator
    convention is "orbit point >= x", so each value is attached to the
    half open interval ending at its right breakpoint.
    """
    rec, pairs = _orbit_weights(beta, budget)
    interior = []
    for x, _w in pairs[1:]:
        if _cmp(x, 1) == 0:
            continue
        if all(_cmp(x, b) != 0 for b in interior):
            interior.append(x)
    interior.sort(key=_SortKey)
    zero = as_point(beta, 0)
    one = as_point(beta, 1)
    bps = [zero] + interior + [one]
    values = []
    for i in range(len(bps) - 1):
        rep = bps[i + 1]
        total = None
        for x, w in pairs:
            if _cmp(x, rep) >= 0:
                total = w if total is None else total + w
        values.append(total)
    # adjacent intervals never share a value: the density jumps at orbit points
    for a, b in zip(values, values[1:]):
        if point_sign(a - b) == 0:
            raise SpecError("density failed to jump at an orbit breakpoint")
    k_int = None
    for i, v in enumerate(values):
        piece = v * (bps[i + 1] - bps[i])
        k_int = piece if k_int is None else k_int + piece
    k_series = _normalization_series(beta, rec, pairs)
    if point_sign(k_int - k_series) != 0:
        raise SpecError("series and integral forms of K disagree")
    return PiecewiseDensity(beta, tuple(bps), tuple(values), k_series)


class _SortKey:
    """Exact comparison adapter for sorting field points."""

    def __init__(self, x):
        self.x = x

    def __lt__(self, other):
        return _cmp(self.x, other.x) < 0


def _normalization_series(beta: Beta, rec, pairs):
    total = None
    for x, w in pairs:
        piece = x * w
        total = piece if total is None else total + piece
    return total


def normalization(beta: Beta, budget: int = DEFAULT_BUDGET):
    """K = sum of orbit-point / (-beta)^n in exact closed form."""
    rec, pairs = _orbit_weights(beta, budget)
    return _normalization_series(beta, rec, pairs)


def density_at(beta: Beta, x, tol=Fraction(1, 10**12)):
    """Density value at x: exact when the orbit of 1 resolves quickly,
    otherwise a partial sum whose tail is below tol.

    Term comparisons are exact; for a decimal base a point that ties an
    orbit point within the working precision is refused, since the
    indicator is discontinuous there.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise SpecError("tolerance must be positive")
    x = as_point(beta, x) if not isinstance(x, FieldPoint) else x
    if _cmp(x, 0) <= 0 or _cmp(x, 1) > 0:
        raise SpecError("density is defined on (0, 1]")
    lo, _hi = beta.refine(Fraction(1, 16)) if beta.is_exact else (beta.value, beta.value)
    lo = max(lo, Fraction(101, 100))
    n_terms = max(2, math.ceil(
        math.log(1 / float(tol * (1 - 1 / lo))) / math.log(float(lo))
    ) + 2)
    guard = Fraction(1, 2**beta.precision) if not beta.is_exact else None

    def indicator(pt) -> bool:
        if guard is not None:
            diff = pt - x
            if diff != 0 and abs(diff) < guard:
                raise PrecisionExhausted("x ties an orbit point within the precision")
        return _cmp(pt, x) >= 0

    try:
        rec, pairs = _orbit_weights(beta, n_terms)
    except OrbitUnresolved:
        rec = orbit_of_one(beta, n_terms)
        pairs = None
    if pairs is not None:
        total = None
        for pt, w in pairs:
            if indicator(pt):
                total = w if total is None else total + w
        return total if total is not None else as_point(beta, 0)
    if beta.is_exact:
        neg_inv = -beta.beta_point().inverse()
    else:
        neg_inv = Fraction(-1) / beta.value
    total = None
    power = neg_inv**0 if beta.is_exact else Fraction(1)
    for n, pt in enumerate(rec.points[:n_terms]):
        if n > 0:
            power = power * neg_inv
        if indicator(pt):
            total = power if total is None else total + power
    return total if total is not None else as_point(beta, 0)


def measure_interval(d: PiecewiseDensity, a, b):
    """Normalized invariant measure of the interval (a, b)."""
    raw = d.integral_raw(a, b)
    return raw * point_inverse(d.K)


@dataclass(frozen=True)
class Limits:
    at_zero: object
    at_one: object | None   # None when the orbit did not resolve


def limits(beta: Beta, budget: int = DEFAULT_BUDGET) -> Limits:
    """One-sided limits of the density at 0+ and 1-.

    at_zero is beta/(beta+1) always; at_one depends on whether the orbit
    of 1 returns to 1 (periodic case) or stays below it.
    """
    if beta.is_exact:
        b = beta.beta_point()
        at_zero = b * (b + 1).inverse()
    else:
        at_zero = beta.value / (beta.value + 1)
    rec = orbit_of_one(beta, budget)
    if not rec.resolved:
        return Limits(at_zero, None)
    if rec.kind == "periodic":
        m = rec.period_len
        if beta.is_exact:
            bm = beta.beta_point() ** m
            at_one = bm * (bm - (-1) ** m).inverse()
        else:
            bm = beta.value**m
            at_one = bm / (bm - (-1) ** m)
    else:
        at_one = as_point(beta, 1)
    return Limits(at_zero, at_one)


# ---------------------------------------------------------------------------
# exact equality of algebraic numbers across different fields


def _mult_matrix(x: FieldPoint):
    d = x.beta.degree
    cols = []
    e = x
    basis_pows = []
    t = x.beta.point_from_rational(1)
    for i in range(d):
        basis_pows.append(t)
        t = t.times_beta()
    for i in range(d):
        cols.append((x * basis_pows[i]).coeffs)
    # rows indexed by basis coordinate, columns by basis power
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _charpoly(m) -> polys.Poly:
    """Characteristic polynomial (monic) by the trace recursion."""
    n = len(m)

    def mat_mul(a, b):
        return [
            [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]

    def trace(a):
        return sum(a[i][i] for i in range(n))

    coeffs = [Fraction(1)]
    nmat = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        nmat[i][i] = Fraction(1)
    work = nmat
    cs = []
    for k in range(1, n + 1):
        work = mat_mul(m, work)
        c = -trace(work) / k
        cs.append(c)
        for i in range(n):
            work[i][i] += c
    # x^n + cs[0] x^(n-1) + ... + cs[n-1], lowest degree first
    return polys.make_poly(list(reversed(cs)) + [Fraction(1)])


def _interval_of(x, width: Fraction):
    if isinstance(x, FieldPoint):
        return x.interval(width)
    x = Fraction(x)
    return (x, x)


def algebraic_equal(x, y) -> bool:
    """Exact equality of two real algebraic numbers, fields may differ."""
    if not isinstance(x, FieldPoint) and not isinstance(y, FieldPoint):
        return Fraction(x) == Fraction(y)
    if not isinstance(x, FieldPoint):
        return y.compare(Fraction(x)) == 0
    if not isinstance(y, FieldPoint):
        return x.compare(Fraction(y)) == 0
    if x.beta == y.beta:
        return (x - y).is_zero()
    p = _charpoly(_mult_matrix(x))
    # y must satisfy x's characteristic polynomial...
    acc = y.beta.point_from_rational(0)
    for c in reversed(p):
        acc = acc * y + c
    if not acc.is_zero():
        return False
    # ... and be the same real root of it
    sf = polys.squarefree_part(p)
    width = Fraction(1, 2**40)
    for _ in range(60):
        ax, bx = _interval_of(x, width)
        ay, by = _interval_of(y, width)
        if bx < ay or by < ax:
            return False
        lo, hi = min(ax, ay), max(bx, by)
        if polys.poly_eval(sf, lo) != 0 and polys.poly_eval(sf, hi) != 0 \
                and polys.count_roots(sf, lo, hi) == 1:
            return True
        width /= 2**8
    raise RuntimeError("algebraic equality refinement did not settle")


@dataclass(frozen=True)
class CoincidenceReport:
    verdict: str                 # "Coincide" | "Differ" | "Unresolved"
    predicted: bool | None       # the quadratic-pair criterion
    detail: str

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "predicted": self.predicted, "detail": self.detail}


def _quadratic_pair_prediction(b1: Beta, b2: Beta) -> bool:
    """Is {b1, b2} = {root of x^2 - qx - p with p <= q, that root + 1}?"""

    def beta_value_point(b: Beta):
        return b.beta_point() if b.is_exact else b.value

    x1, x2 = beta_value_point(b1), beta_value_point(b2)
    # order the pair numerically
    w = Fraction(1, 2**24)
    while True:
        a1, c1 = _interval_of(x1, w)
        a2, c2 = _interval_of(x2, w)
        if c1 < a2:
            small_b, small, big = b1, x1, x2
            break
        if c2 < a1:
            small_b, small, big = b2, x2, x1
            break
        w /= 2**8
    if not algebraic_equal(small + 1, big):
        return False
    q = small_b.floor_value()
    if isinstance(small, FieldPoint):
        z = small * small - q * small
        for p in range(1, q + 1):
            if (z - p).is_zero():
                return True
        return False
    z = small * small - q * small
    return z.denominator == 1 and 1 <= z <= q


def densities_coincide(
    beta1: Beta, beta2: Beta, budget: int = DEFAULT_BUDGET
) -> CoincidenceReport:
    """Exact comparison of the two normalized invariant densities.

    The verdict compares breakpoints and normalized values; the report
    also carries the quadratic-pair prediction for when they should
    coincide.
    """
    same = algebraic_equal(
        beta1.beta_point() if beta1.is_exact else beta1.value,
        beta2.beta_point() if beta2.is_exact else beta2.value,
    )
    if same:
        raise SpecError("bases must differ")
    predicted = _quadratic_pair_prediction(beta1, beta2)
    try:
        d1 = density(beta1, budget)
        d2 = density(beta2, budget)
    except OrbitUnresolved:
        return CoincidenceReport("Unresolved", predicted, "an orbit did not resolve")
    in1, in2 = d1.interior_breakpoints, d2.interior_breakpoints
    if len(in1) != len(in2):
        return CoincidenceReport(
            "Differ", predicted,
            f"breakpoint counts differ ({len(in1)} vs {len(in2)})",
        )
    for a, b in zip(in1, in2):
        if not algebraic_equal(a, b):
            return CoincidenceReport("Differ", predicted, "breakpoints differ")
    for a, b in zip(d1.normalized_values(), d2.normalized_values()):
        if not algebraic_equal(a, b):
            return CoincidenceReport("Differ", predicted, "normalized values differ")
    return CoincidenceReport("Coincide", predicted, "breakpoints and values agree")


def check_invariance(d: PiecewiseDensity) -> bool:
    """Does the density satisfy exact invariance on its own intervals?

    The mass of every breakpoint interval must equal the mass of its full
    preimage, assembled branch by branch from the map's linear pieces.
    """
    beta = d.beta
    if beta.is_exact:
        binv = beta.beta_point().inverse()
    else:
        binv = 1 / beta.value
    amax = beta.alphabet_max
    one = as_point(beta, 1)
    zero = as_point(beta, 0)
    for i in range(len(d.values)):
        a, b = d.breakpoints[i], d.breakpoints[i + 1]
        direct = d.integral_raw(a, b)
        pulled = None
        for dig in range(1, amax + 1):
            lo = (dig - b) * binv
            hi = (dig - a) * binv
            lo = _pmax(lo, zero)
            hi = _pmin(hi, one)
            if _cmp(hi, lo) > 0:
                piece = d.integral_raw(lo, hi)
                pulled = piece if pulled is None else pulled + piece
        if pulled is None or point_sign(direct - pulled) != 0:
            return False
    return True
