from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

import invariants as inv

coeffs = st.lists(st.integers(-20, 20), min_size=3, max_size=3)
shift = st.integers(0, 3)

# about 40 cases per base and property keeps the whole suite well above 200 cases
CASES = settings(max_examples=40)


@pytest.mark.parametrize("poly", inv.BASES)
@CASES
@given(c=coeffs, s=shift, k=st.integers(0, 5))
def test_refinement_identity(poly, c, s, k):
    inv.check_refinement(poly, c, s, k)


@pytest.mark.parametrize("poly", inv.BASES)
@CASES
@given(c=coeffs, s=shift, k=st.integers(0, 6))
def test_monotone_nesting(poly, c, s, k):
    inv.check_nesting(poly, c, s, k)


@pytest.mark.parametrize("poly", inv.BASES)
@CASES
@given(c=coeffs, s=shift, k=st.integers(0, 6))
def test_translation_identity(poly, c, s, k):
    inv.check_translation(poly, c, s, k)


@pytest.mark.parametrize("poly", inv.BASES)
@CASES
@given(c=coeffs, k=st.integers(0, 6))
def test_integral_slice_consistency(poly, c, k):
    inv.check_integral_slice(poly, c, k)


@pytest.mark.parametrize("poly", inv.BASES)
@CASES
@given(cx=coeffs, cy=coeffs, k=st.integers(0, 6))
def test_preimage_partition(poly, cx, cy, k):
    inv.check_partition(poly, cx, cy, k)


@pytest.mark.parametrize("poly", inv.BASES)
@CASES
@given(c=st.lists(st.integers(-10**6, 10**6), min_size=3, max_size=3), k=st.integers(0, 12))
def test_finite_address_round_trip(poly, c, k):
    inv.check_address_round_trip(poly, c, k)


@pytest.mark.parametrize("poly", inv.QUADRATIC)
@CASES
@given(cx=coeffs, cy=coeffs, k=st.integers(0, 8))
def test_quadratic_order_relation(poly, cx, cy, k):
    inv.check_quadratic_order(poly, cx, cy, k)
