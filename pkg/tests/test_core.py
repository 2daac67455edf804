import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cosign.core import (
    Configuration,
    ConfigurationError,
    CosSign,
    PiFraction,
    WidthOverflow,
    cos_sign_at,
    decimal_string,
    lcm_checked,
    normalize,
)

increasing = st.lists(st.integers(1, 200), min_size=1, max_size=5, unique=True).map(lambda xs: Configuration(tuple(sorted(xs))))


@pytest.mark.parametrize(
    "freqs, expected",
    [((2, 6, 18), (1, 3, 9)), ((1, 3, 9), (1, 3, 9)), ((15, 21, 33), (5, 7, 11))],
)
def test_normalize_examples(freqs, expected):
    assert normalize(Configuration(freqs)).freqs == expected


@pytest.mark.parametrize("bad", [(), (0, 1), (3, 1), (1, 1, 2), (-1, 2), (1.5, 2)])
def test_configuration_rejects(bad):
    with pytest.raises(ConfigurationError):
        Configuration(bad)


def test_parse():
    assert Configuration.parse("1, 3,9").freqs == (1, 3, 9)
    with pytest.raises(ConfigurationError):
        Configuration.parse("1,x")
    with pytest.raises(ConfigurationError):
        Configuration.parse("9,3,1")


@given(increasing, st.integers(1, 50))
def test_normalize_idempotent_and_scale_free(config, k):
    once = normalize(config)
    assert normalize(once) == once
    assert once.gcd == 1
    assert normalize(config.scaled(k)) == once


@pytest.mark.parametrize(
    "a, num, den, expected",
    [
        (1, 0, 1, CosSign.POSITIVE),
        (1, 1, 2, CosSign.ZERO),
        (3, 1, 2, CosSign.ZERO),
        (3, 1, 3, CosSign.NEGATIVE),
        (2, 1, 1, CosSign.POSITIVE),
        (1, 2, 1, CosSign.POSITIVE),
        (5, 3, 10, CosSign.ZERO),
    ],
)
def test_cos_sign_examples(a, num, den, expected):
    assert cos_sign_at(a, PiFraction(num, den)) is expected


@given(st.integers(1, 10**4), st.integers(1, 10**4), st.data())
def test_cos_sign_matches_float(a, v, data):
    u = data.draw(st.integers(0, 2 * v))
    value = math.cos(math.pi * a * u / v)
    sign = cos_sign_at(a, PiFraction(u, v))
    if abs(value) > 1e-9:
        assert sign == (CosSign.POSITIVE if value > 0 else CosSign.NEGATIVE)


@given(st.integers(1, 10**4), st.integers(1, 10**4), st.data())
def test_cos_sign_even(a, v, data):
    u = data.draw(st.integers(0, 2 * v))
    x = PiFraction(u, v)
    assert cos_sign_at(a, x) == cos_sign_at(a, x.mirrored())


def test_cos_sign_overflow_is_reported():
    with pytest.raises(WidthOverflow):
        cos_sign_at(2**100, PiFraction(2**30 - 1, 2**30))


@pytest.mark.parametrize(
    "values, expected",
    [((1, 3, 9), 9), ((1, 3, 11, 35, 105), 1155), ((1, 3, 11), 33)],
)
def test_lcm_examples(values, expected):
    assert lcm_checked(values) == expected


def test_lcm_overflow_carries_partial():
    with pytest.raises(WidthOverflow) as info:
        lcm_checked([2**61 - 1, 2**89 - 1])
    assert info.value.partial == 2**61 - 1


def test_pifraction_order_and_reduction():
    assert PiFraction(2, 4) == PiFraction(1, 2)
    assert PiFraction(1, 3) < PiFraction(1, 2) < PiFraction(3, 2)
    assert sorted([PiFraction(3, 2), PiFraction(0, 1), PiFraction(1, 7)])[1] == PiFraction(1, 7)
    with pytest.raises(ValueError):
        PiFraction(5, 2)


rationals = st.fractions(max_denominator=10**30)


@given(rationals, rationals, rationals)
def test_rational_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z
    if x:
        assert x * (1 / x) == 1


def test_decimal_string():
    assert decimal_string(Fraction(1, 9)) == "0.111111111111"
    assert decimal_string(Fraction(1)) == "1.000000000000"
    assert decimal_string(Fraction(-1, 3)) == "-0.333333333333"
