from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pachner.bounds import BOUNDS, NonPositiveT, UnknownName, bound, compare_bounds, digits


def doubling(n):
    x = 1
    for _ in range(n):
        x += x
    return x


def test_examples():
    assert bound("hass", 1) == 512
    assert bound("hass", 2) == 131072
    assert bound("kneser", 3) == 18
    assert bound("pieces", 1) == 2**300


def test_main_digits_by_logarithm():
    # 6e6 * 2^50000: floor(log10) + 1 from a high-precision logarithm
    getcontext().prec = 60
    log10 = Decimal(6 * 10**6).log10() + 50000 * Decimal(2).log10()
    assert digits(bound("main", 1)) == int(log10) + 1 == 15059


@pytest.mark.parametrize("t", range(1, 6))
def test_main_over_subdivision(t):
    assert Fraction(bound("main", t), bound("subdivision", t)) == Fraction(6, 5)


@given(st.integers(1, 40))
def test_hass_by_doubling(t):
    assert bound("hass", t) == 4 * t * doubling(7 * t)
    assert bound("kneser", t) == 6 * t


@given(st.integers(1, 30))
def test_digits(n):
    x = 10**n
    assert digits(x) == n + 1 and digits(x - 1) == n


def test_errors():
    with pytest.raises(UnknownName):
        bound("haken", 1)
    for t in (0, -3, 1.5, True, "2"):
        with pytest.raises(NonPositiveT):
            bound("hass", t)


def test_compare_table():
    text = compare_bounds(1)
    lines = text.splitlines()
    assert lines[0] == "bounds at t=1"
    assert [ln.split()[0] for ln in lines[1:]] == list(BOUNDS)
    hass = next(ln for ln in lines if ln.startswith("hass"))
    assert hass.endswith(" 512") and "digits=3" in hass
    assert "131072" in next(ln for ln in compare_bounds(2).splitlines() if ln.startswith("hass"))
    assert compare_bounds(3) == compare_bounds(3)


@pytest.mark.parametrize("name", list(BOUNDS))
def test_monotone(name):
    values = [bound(name, t) for t in range(1, 6)]
    assert values == sorted(values) and len(set(values)) == 5
