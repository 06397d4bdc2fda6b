from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from betatiles.errors import DegreeTooSmall, NotIntegral, NotIrreducible, NotPisot, OutOfDomain
from betatiles.field import address_value, compare, finite_address, floor_mul_beta, make_beta, parse_poly

from conftest import GOLDEN, SMALLEST, THREE_TWO, TWO_TWO, field
from oracles import Alg, residue_address

BASES = [GOLDEN, TWO_TWO, THREE_TWO, SMALLEST, (1, -2, 1, -1)]


def test_parse_poly_literal():
    assert parse_poly("1,-3,-2") == (1, -3, -2)
    assert parse_poly(" 1, 0,-1 ,-1") == (1, 0, -1, -1)


def test_three_two_field_data():
    beta = field(THREE_TWO)
    lo, hi = beta.beta_interval()
    # (3 + sqrt 17) / 2
    ref = (3 + mpmath.sqrt(17)) / 2
    assert lo < Fraction(str(mpmath.nstr(ref, 30))) + Fraction(1, 10**25)
    assert float(lo) == pytest.approx(3.5615528128088303, abs=1e-15)
    assert beta.norm == -2
    assert list(beta.alphabet) == [0, 1, 2, 3]
    (place,) = beta.places
    assert place.real
    assert beta.beta.conj(0) == pytest.approx(-0.5615528128088303, abs=1e-12)


def test_smallest_pisot_has_complex_pair():
    beta = field(SMALLEST)
    assert beta.beta_float == pytest.approx(1.324717957244746, abs=1e-12)
    assert len(beta.places) == 1 and not beta.places[0].real
    assert abs(beta.places[0].center) < 1


@pytest.mark.parametrize(
    "poly, err",
    [
        ((1, -1, -6), NotIrreducible),
        ((1, 0, -2), NotPisot),
        ((1, -1, 1), NotPisot),
        ((1, 0, 0, -2), NotPisot),
        ((1, -2), DegreeTooSmall),
    ],
)
def test_make_beta_rejects(poly, err):
    with pytest.raises(err):
        make_beta(poly)


def test_compare_examples():
    b22 = field(TWO_TWO)
    assert compare(b22.beta - 2, b22.zero) == 1
    x = b22.element((3, -1))
    assert compare(x, x) == 0
    b32 = field(THREE_TWO)
    assert compare(b32.beta * (b32.beta - 3), b32.integer(2)) == 0


def test_floor_mul_beta_examples():
    b = field(THREE_TWO)
    assert floor_mul_beta(b.one) == 3
    assert floor_mul_beta(b.zero) == 0
    assert floor_mul_beta(b.beta - 3) == 2
    with pytest.raises(OutOfDomain):
        floor_mul_beta(-b.one)


def test_inverse_of_beta():
    b = field(THREE_TWO)
    assert b.beta.inverse() == (b.beta - 3) / 2
    assert b.beta.inverse() * b.beta == b.one


def test_finite_address_examples():
    b = field(TWO_TWO)
    assert finite_address(b.beta, 3) == (0, 1, 0)
    assert address_value((0, 1, 0), 2) == Fraction(1, 4)
    assert finite_address(b.one, 2) == (1, 0)
    assert address_value((1, 0), 2) == Fraction(1, 2)
    assert finite_address(b.zero, 4) == (0, 0, 0, 0)
    with pytest.raises(NotIntegral):
        finite_address(b.one / 3, 2)
    assert finite_address(field(GOLDEN).beta, 5) == ()


@pytest.mark.parametrize("poly", [TWO_TWO, THREE_TWO])
def test_finite_address_matches_oracle(poly):
    b = field(poly)
    alg = Alg(poly)
    for coeffs in [(0, 1), (1, 0), (3, -1), (-5, 7), (2, 2)]:
        assert finite_address(b.element(coeffs), 6) == residue_address(alg, coeffs, 6)


@pytest.mark.parametrize("poly", [TWO_TWO, THREE_TWO])
def test_residue_system_complete(poly):
    b = field(poly)
    n = abs(b.norm)
    for a in range(n):
        for c in range(a + 1, n):
            assert not ((b.integer(a) - c).div_beta()).is_integral()


def test_z_beta_inverse_membership():
    b = field(THREE_TWO)
    assert b.beta.inverse().in_z_beta_inv()
    assert not (b.one / 3).in_z_beta_inv()
    # 2 = beta (beta - 3) and beta - 3 is a different prime of norm -2
    assert (b.one / 2).z_beta_inv_exponent() is None
    assert b.power(-3).z_beta_inv_exponent() == 3


def test_repr_forms():
    b = field(THREE_TWO)
    assert repr(b.beta - 3) == "b-3"
    assert repr((b.beta - 3) / 2) == "(b-3)/2"


coef = st.integers(-50, 50)


@pytest.mark.parametrize("poly", BASES)
@given(data=st.data())
def test_ring_axioms(poly, data):
    b = field(poly)
    d = b.degree
    x, y, z = (b.element(data.draw(st.lists(coef, min_size=d, max_size=d))) for _ in range(3))
    den = data.draw(st.integers(1, 9))
    z = z / den
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x.mul_beta().div_beta() == x
    if x:
        assert x * x.inverse() == b.one


@pytest.mark.parametrize("poly", BASES)
@given(data=st.data())
def test_compare_matches_high_precision(poly, data):
    b = field(poly)
    alg = Alg(poly)
    c = data.draw(st.lists(coef, min_size=b.degree, max_size=b.degree))
    x = b.element(c)
    val = alg.value(alg.poly([Fraction(v) for v in c]))
    sign = compare(x, b.zero)
    if val > 1e-60:
        assert sign == 1
    elif val < -1e-60:
        assert sign == -1
    lo, hi = x.interval()
    assert lo <= Fraction(mpmath.nstr(val, 60)) + Fraction(1, 10**50)
    assert hi >= Fraction(mpmath.nstr(val, 60)) - Fraction(1, 10**50)


@pytest.mark.parametrize("poly", [TWO_TWO, THREE_TWO])
@given(c=st.lists(coef, min_size=2, max_size=2), k=st.integers(0, 8))
def test_address_round_trip(poly, c, k):
    b = field(poly)
    x = b.element(c)
    digits = finite_address(x, k)
    rest = x - sum((b.power(j) * dj for j, dj in enumerate(digits)), b.zero)
    assert (rest / b.power(k)).is_integral()


@pytest.mark.parametrize("poly", BASES)
@given(data=st.data())
def test_conjugate_enclosures_multiply(poly, data):
    """Enclosures of a*b and a, b overlap with the product of enclosures and contain the float value."""
    b = field(poly)
    d = b.degree
    x = b.element(data.draw(st.lists(st.integers(-9, 9), min_size=d, max_size=d)))
    y = b.element(data.draw(st.lists(st.integers(-9, 9), min_size=d, max_size=d)))
    for i in range(len(b.places)):
        ex, ey, exy = x.conj_enclosure(i), y.conj_enclosure(i), (x * y).conj_enclosure(i)
        prod = ex * ey
        if b.places[i].real:
            assert exy.a <= prod.b and prod.a <= exy.b
            assert exy.a - 1e-9 <= (x * y).conj(i) <= exy.b + 1e-9
            # the enclosure holds the 80-digit conjugate of the oracle
            alg = Alg(poly)
            root = min((r for r in alg.roots if abs(r.imag) < 1e-40 and abs(r) < 1), key=lambda r: abs(r - b.places[i].center))
            true = alg.value(alg.poly((x * y).coeffs), root.real)
            assert mpmath.mpf(exy.a) <= true <= mpmath.mpf(exy.b)
        else:
            assert exy.real.a <= prod.real.b and prod.real.a <= exy.real.b
            assert exy.imag.a <= prod.imag.b and prod.imag.a <= exy.imag.b
