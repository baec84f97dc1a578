from fractions import Fraction

import pytest

from negabeta import make_beta


@pytest.fixture(scope="session")
def phi():
    return make_beta("pisot2:p=1,q=1")


@pytest.fixture(scope="session")
def phi2(phi):
    return phi.plus_one()


@pytest.fixture(scope="session")
def tribonacci():
    return make_beta("multinacci:q=1,m=3")


@pytest.fixture(scope="session")
def plastic():
    # real root of x^3 - x - 1, about 1.324717
    return make_beta("poly:[1,0,-1,-1]@(1.2,1.4)")


def refine_float(beta, digits=25):
    lo, hi = beta.refine(Fraction(1, 10**digits))
    return float((lo + hi) / 2)
