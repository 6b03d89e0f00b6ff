from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mvlat.errors import DomainError
from mvlat.geocode import (
    GeometricCode,
    PairCode,
    check_conditions,
    code_from_comb,
    cond31,
    cond32,
    decode_code,
    decode_pair,
    encode_pair,
    encode_triple,
)


def test_pair_code():
    assert encode_pair(3, 7) == PairCode(1, 3, 2)
    assert decode_pair(PairCode(1, 3, 2)) == (3, 7)


@pytest.mark.parametrize("a,n", [(0, 5), (5, 5), (6, 5)])
def test_pair_code_rejects(a, n):
    with pytest.raises(DomainError):
        encode_pair(a, n)


@pytest.mark.parametrize(
    "triple,code",
    [
        ((2, 26, 121), (17, 26, 0, 2, 0, 2)),
        ((2, 3, 7), (1, 1, 0, 2, 1, 1)),
        ((1, 5, 13), (3, 2, 0, 1, 1, 2)),
    ],
)
def test_known_codes(triple, code):
    c = encode_triple(*triple)
    assert (c.alpha, c.beta, c.gamma, c.a, c.t, c.u) == code
    assert decode_code(c) == triple


def test_code_text_and_json():
    c = encode_triple(2, 26, 121)
    assert str(c) == "alpha=17 beta=26 gamma=0 a=2 t=0 u=2"
    assert c.to_json() == {"alpha": 17, "beta": 26, "gamma": 0, "a": 2, "t": 0, "u": 2}
    assert c.comb == (17, 26, 0, 2)


@pytest.mark.parametrize("triple", [(2, 4, 8), (2, 1, 7), (0, 3, 7), (2, 3, 0)])
def test_encode_rejects(triple):
    with pytest.raises(DomainError):
        encode_triple(*triple)


def test_decode_rejects_range_violation():
    with pytest.raises(DomainError):
        decode_code(GeometricCode(3, 7, 0, 2, 1, 1))  # beta >= alpha*a
    with pytest.raises(DomainError):
        decode_code(GeometricCode(5, 3, 0, 2, 0, 1))  # alpha >= b


def test_encode_decode_exhaustive():
    count = 0
    for a in range(1, 5):
        for alpha in range(1, 9):
            for beta in range(alpha * a):
                for gamma in range(a):
                    for t in range(4):
                        for u in range(4):
                            c = GeometricCode(alpha, beta, gamma, a, t, u)
                            if not cond31(alpha, beta, gamma, a, t, u):
                                continue
                            assert encode_triple(*decode_code(c)) == c
                            count += 1
    assert count > 5000


@given(st.integers(1, 8), st.integers(2, 200), st.integers(3, 3000))
def test_decode_encode_roundtrip(a, b, n):
    if n % b == 0:
        return
    c = encode_triple(a, b, n)
    assert decode_code(c) == (a, b, n)
    assert check_conditions(c)["cond31"]


@given(st.integers(1, 6), st.integers(2, 120), st.integers(3, 1500))
def test_coprimality_matches_cond32(a, b, n):
    if n % b == 0:
        return
    c = encode_triple(a, b, n)
    assert (gcd(a, n) == 1 and gcd(b, n) == 1) == cond32(*c.comb)


def test_code_from_comb():
    c = code_from_comb((7, 2, 1, 2), 1, 2)
    assert (c.b, c.N) == (16, 16 * 5 + 7)
