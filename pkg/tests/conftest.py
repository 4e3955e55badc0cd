from fractions import Fraction

import pytest

from lcivt.dsl import parse_literal
from lcivt.lcnum import LC, Exponent, LcNumber


def L(text):
    """lc-mode literal."""
    return parse_literal(text, LC)


def E(q):
    """lc-mode exponent."""
    return Exponent.lc(Fraction(q))


@pytest.fixture
def lc_one():
    return LcNumber.one(LC)
