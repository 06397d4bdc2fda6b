from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from betatiles.dynamics import t_step
from betatiles.errors import OutOfDomain
from betatiles.natext import (
    NatExtPoint,
    covering_degree_estimate,
    domain_slices,
    nat_ext_contains,
    nat_ext_step,
    tile_bases,
)
from betatiles.periodicity import is_purely_periodic

from conftest import GOLDEN, SMALLEST, THREE_TWO, TWO_TWO, field, parry

BASES = [GOLDEN, TWO_TWO, THREE_TWO, SMALLEST]


def test_step_is_t_on_the_diagonal():
    b = field(THREE_TWO)
    x = b.one / 7
    p = NatExtPoint(x)
    for _ in range(10):
        q = nat_ext_step(p)
        assert q.x == t_step(p.x)
        p = q
    with pytest.raises(OutOfDomain):
        nat_ext_step(NatExtPoint(b.one))
    with pytest.raises(OutOfDomain):
        nat_ext_step(NatExtPoint(x, as_diagonal=False))


def test_contains_examples():
    b = field(THREE_TWO)
    assert nat_ext_contains(b.zero)
    assert nat_ext_contains(b.one / 7)
    assert not nat_ext_contains(b.one / 2)
    assert not nat_ext_contains(b.one)
    assert not nat_ext_contains(-b.one / 7)


@pytest.mark.parametrize("poly", [GOLDEN, THREE_TWO])
def test_domain_is_invariant_on_the_diagonal(poly):
    """delta(T(x)) lies in the domain whenever delta(x) does."""
    b = field(poly)
    for q in range(2, 30):
        for p_ in range(q):
            x = b.rational(Fraction(p_, q))
            if nat_ext_contains(x):
                assert nat_ext_contains(nat_ext_step(NatExtPoint(x)).x)
                assert is_purely_periodic(x).preperiod == 0


@pytest.mark.parametrize("poly", BASES)
def test_slices_partition_unit_interval(poly):
    p = parry(poly)
    sl = domain_slices(p, 3)
    assert sl[0].v == 0 and sl[-1].v_hat == 1
    for a, c in zip(sl, sl[1:]):
        assert a.v_hat == c.v
        assert a.v < a.v_hat


@pytest.mark.parametrize("poly", BASES)
def test_level_zero_slices_are_single_points(poly):
    for s in domain_slices(parry(poly), 0):
        assert s.coords.shape[0] == 1
        assert np.allclose(s.coords, 0.0)


def test_slice_addresses_two_two():
    p = parry(TWO_TWO)
    for s in domain_slices(p, 4):
        assert s.addresses is not None and s.addresses.shape == (len(s.coords), 4)
        vals = s.address_values()
        assert np.all((vals >= 0) & (vals < 1))


def test_tile_bases_contain_zero():
    p = parry(THREE_TWO)
    bases = tile_bases(p, [(-1.0, 1.0)])
    assert p.field.zero in bases
    assert all(x.is_integral() and 0 <= x < 1 for x in bases)


def test_covering_golden_is_single():
    rep = covering_degree_estimate(parry(GOLDEN), 10, 2000)
    assert rep.modal == 1 and rep.fraction_modal >= 0.95
    assert rep.in_stripe == 2000 and rep.out_of_stripe == 0


def test_covering_deterministic():
    p = parry(TWO_TWO)
    a = covering_degree_estimate(p, 6, 500, seed=3)
    b = covering_degree_estimate(p, 6, 500, seed=3)
    assert a == b


def test_covering_out_of_stripe():
    rep = covering_degree_estimate(parry(TWO_TWO), 6, 300, address_window=(1.5, 2.0))
    assert rep.in_stripe == 0 and rep.out_of_stripe == 300 and rep.histogram == {}
    assert rep.fraction_modal == 0.0


def test_covering_window_dimension():
    with pytest.raises(OutOfDomain):
        covering_degree_estimate(parry(TWO_TWO), 4, 10, window=[(-1, 1), (-1, 1)])


def test_covering_never_misses():
    """Outer boxes can over-count at boundaries but every sample is covered."""
    rep = covering_degree_estimate(parry(THREE_TWO), 8, 2000)
    assert rep.histogram.get(0, 0) == 0
    assert rep.modal == 1
