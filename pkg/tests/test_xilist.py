from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvlat.errors import DomainError
from mvlat.geocode import code_from_comb, encode_triple
from mvlat.minima import LatticeSpec, lattice_vrm
from mvlat.xilist import (
    affine_form_check,
    inverse_of_b,
    list_size,
    partition_intervals,
    vrm_fast,
    xi_list,
)

GAMMA_237 = {(1, 2, 3), (2, 3, 1), (3, 1, 2), (7, 0, 0), (0, 7, 0), (0, 0, 7)}


def test_vrm_fast_small():
    assert vrm_fast(LatticeSpec(2, 3, 7)) == GAMMA_237


@pytest.mark.parametrize("triple", [(2, 5, 21), (2, 26, 121), (3, 7, 47), (1, 13, 34), (5, 9, 301)])
def test_vrm_fast_matches_brute(triple):
    spec = LatticeSpec(*triple)
    assert vrm_fast(spec) == lattice_vrm(spec)


def test_bound_for_t0_code():
    spec = LatticeSpec(2, 26, 121)
    assert len(vrm_fast(spec)) <= 17 + 10 + 3


def test_list_shape_237():
    code = encode_triple(2, 3, 7)
    xs = xi_list(code)
    assert len(xs) == list_size(code) == 14
    assert [e.kind for e in xs] == ["1"] * 2 + ["2"] * 8 + ["3"] + ["axis"] * 3
    (t3,) = [e for e in xs if e.kind == "3"]
    assert t3.point[2] == 1 and t3.provenance == (1,)
    assert [e.slot for e in xs] == list(range(14))


def test_list_contains_vrm_237():
    pts = {e.point for e in xi_list(encode_triple(2, 3, 7))}
    assert lattice_vrm(LatticeSpec(2, 3, 7)) <= pts


def test_t0_list_has_no_type2():
    code = encode_triple(2, 26, 121)
    xs = xi_list(code)
    assert not any(e.kind == "2" for e in xs)
    assert len(xs) == list_size(code) == 2 + 26 + 3
    assert all(e.bound == 26 for e in xs if e.kind == "3")


def test_inverse_of_b():
    for b, n in [(3, 7), (26, 121), (13, 34)]:
        assert abs((b * inverse_of_b(b, n)) % n) in (1, n - 1)


def test_partition_237_bounds():
    parts = partition_intervals(encode_triple(2, 3, 7))
    assert min(v[0] for v in parts[0].values()) == 0
    assert parts[0]["I3"][1] == Fraction(7, 4)
    assert max(v[1] for v in parts[1].values()) == Fraction(7, 2)


def _covers(parts, lo, hi):
    pieces = sorted(parts.values())
    assert pieces[0][0] == lo and pieces[-1][1] == hi
    for (a0, a1), (b0, b1) in zip(pieces, pieces[1:]):
        assert a1 == b0 and a0 < a1


@pytest.mark.parametrize("triple", [(2, 7, 47), (3, 16, 167), (4, 11, 131)])
def test_partition_is_disjoint_cover(triple):
    code = encode_triple(*triple)
    n, a = code.N, code.a
    for k, parts in enumerate(partition_intervals(code)):
        _covers(parts, Fraction(k * n, 2 * a), Fraction((k + 1) * n, 2 * a))
        if k % 2 == 0 and "I2" in parts:
            lo, hi = parts["I2"]
            assert hi - lo == a * code.u + code.gamma - 1


def test_partition_t0_has_two_parts():
    for parts in partition_intervals(encode_triple(2, 26, 121)):
        assert set(parts) == {"I1", "I3"}


def test_work_independent_of_parameters():
    comb = (3, 2, 1, 2)
    sizes = {len(xi_list(code_from_comb(comb, t, u))) for t in range(1, 8) for u in range(1, 8)}
    assert sizes == {3 + 5 * 2 + 3}


GRID = [(t, u) for t in range(1, 5) for u in range(1, 5)]


@pytest.mark.parametrize("comb", [(3, 2, 1, 2), (5, 3, 0, 2), (2, 1, 1, 3), (4, 3, 1, 2), (6, 5, 1, 2)])
def test_affine_forms_exact(comb):
    n = list_size(code_from_comb(comb, 1, 1))
    for s in range(n):
        assert affine_form_check(comb, s, GRID).ok


def test_affine_forms_smallest_comb_need_t2():
    # b = 3 at t = 1: the signed second coordinate sits on the other side of N/2
    comb = (1, 1, 0, 2)
    n = list_size(code_from_comb(comb, 1, 1))
    assert [s for s in range(n) if not affine_form_check(comb, s, GRID).ok] == [3, 5, 10]
    grid2 = [(t, u) for t in range(2, 6) for u in range(2, 6)]
    assert all(affine_form_check(comb, s, grid2).ok for s in range(n))


def test_affine_form_shapes():
    comb = (3, 2, 1, 2)
    xs = xi_list(code_from_comb(comb, 1, 1))
    for s, e in enumerate(xs):
        form = affine_form_check(comb, s, GRID)
        if e.kind == "3":
            assert form.coeffs[2] == (0, 0, e.provenance[0])
        if e.kind == "axis":
            assert form.coeffs[e.provenance[0]][0] == 1
    assert form.checked == len(GRID)


def test_affine_form_degenerate():
    with pytest.raises(DomainError):
        affine_form_check((3, 2, 1, 2), 1, [(1, 1), (1, 2), (1, 3)])


def test_affine_form_missing_slot():
    with pytest.raises(DomainError):
        affine_form_check((3, 2, 1, 2), 99, GRID)


@st.composite
def lattices(draw):
    a = draw(st.integers(1, 6))
    n = draw(st.integers(5, 600))
    b = draw(st.integers(2, n - 1))
    spec = LatticeSpec(a, b, n)
    if n % b == 0 or not spec.coprime:
        return None
    return spec


@settings(max_examples=120)
@given(lattices())
def test_fast_equals_brute_random(spec):
    if spec is None:
        return
    fast = vrm_fast(spec)
    assert fast == lattice_vrm(spec)
    code = encode_triple(spec.a, spec.b, spec.N)
    if code.t >= 1:
        assert len(fast) <= code.alpha + 5 * code.a + 3
