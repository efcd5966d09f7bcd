from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosetvoa.liealg import (AlgebraSpec, InvalidAlgebraError, build_algebra, cartan_matrix,
                             congruence_class, in_root_lattice, inner_product, is_dominant, level,
                             long_root_index, orbit_size, reflect, to_dominant, weight_system,
                             weyl_dimension, weyl_orbit)

ALL_TYPES = [("A", 1), ("A", 2), ("A", 3), ("A", 5), ("B", 2), ("B", 3), ("B", 4), ("C", 3),
             ("C", 4), ("D", 4), ("D", 5), ("D", 6), ("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]

# (dual Coxeter, |positive roots|, |P/Q|, J)
KNOWN = {
    ("A", 1): (2, 1, 2, (1,)),
    ("A", 2): (3, 3, 3, (1, 2)),
    ("A", 3): (4, 6, 4, (1, 2, 3)),
    ("B", 2): (3, 4, 2, (1,)),
    ("B", 3): (5, 9, 2, (1,)),
    ("C", 3): (4, 9, 2, (3,)),
    ("D", 4): (6, 12, 4, (1, 3, 4)),
    ("D", 5): (8, 20, 4, (1, 4, 5)),
    ("E", 6): (12, 36, 3, (1, 6)),
    ("E", 7): (18, 63, 2, (7,)),
    ("E", 8): (30, 120, 1, ()),
    ("F", 4): (9, 24, 1, ()),
    ("G", 2): (4, 6, 1, ()),
}


@pytest.mark.parametrize("series,rank", sorted(KNOWN))
def test_invariants(series, rank):
    d = build_algebra(series, rank)
    assert (d.dual_coxeter, len(d.positive_roots), d.center_order, d.J) == KNOWN[series, rank]


@pytest.mark.parametrize("series,rank", ALL_TYPES)
def test_structure(series, rank):
    d = build_algebra(series, rank)
    assert inner_product(d, d.theta, d.theta) == 2
    # h^v = <rho, theta> + 1 and sum of comarks + 1
    assert inner_product(d, d.rho, d.theta) + 1 == d.dual_coxeter
    assert sum(d.comarks) + 1 == d.dual_coxeter
    assert d.center_order == len(d.J) + 1
    assert d.dim == d.rank + 2 * len(d.positive_roots)
    assert level(d, d.theta) == 2
    assert all(in_root_lattice(d, r) for r in d.positive_roots)


def test_cartan_conventions():
    assert cartan_matrix(AlgebraSpec("B", 2)) == ((2, -1), (-2, 2))
    assert cartan_matrix(AlgebraSpec("G", 2))[0][1] * cartan_matrix(AlgebraSpec("G", 2))[1][0] == 3
    assert str(AlgebraSpec("E", 8)) == "E8"


@pytest.mark.parametrize("series,rank", [("Z", 1), ("A", 0), ("B", 1), ("E", 9), ("G", 3), ("D", 2)])
def test_bad_spec(series, rank):
    with pytest.raises(InvalidAlgebraError):
        AlgebraSpec(series, rank)


def test_long_root_index():
    assert long_root_index(build_algebra("A", 2)) == 3
    assert long_root_index(build_algebra("B", 2)) == 4
    assert long_root_index(build_algebra("C", 3)) == 8
    assert long_root_index(build_algebra("G", 2)) == 3
    assert long_root_index(build_algebra("E", 8)) == 1


def test_inner_product_rejects_mismatch():
    with pytest.raises(ValueError):
        inner_product(build_algebra("A", 2), (1, 0), (1,))


def test_congruence_classes_a2():
    d = build_algebra("A", 2)
    assert congruence_class(d, (1, 0)) == (Fraction(2, 3), Fraction(1, 3))
    assert congruence_class(d, (1, 1)) == (0, 0)
    assert not in_root_lattice(d, (1, 0))


FREUDENTHAL_CASES = [("A", 1, (3,)), ("A", 2, (1, 0)), ("A", 2, (1, 1)), ("A", 2, (2, 1)),
                     ("A", 3, (1, 0, 0)), ("A", 3, (0, 1, 0)), ("A", 3, (1, 0, 1)),
                     ("B", 2, (1, 0)), ("B", 2, (0, 1)), ("B", 2, (1, 1)),
                     ("G", 2, (1, 0)), ("G", 2, (0, 1)), ("C", 3, (0, 0, 1)), ("D", 4, (0, 1, 0, 0)),
                     ("E", 8, (0, 0, 0, 0, 0, 0, 0, 1)), ("E", 8, (1, 0, 0, 0, 0, 0, 0, 0))]


@pytest.mark.parametrize("series,rank,top", FREUDENTHAL_CASES)
def test_freudenthal_total_matches_weyl(series, rank, top):
    d = build_algebra(series, rank)
    ws = weight_system(d, top)
    assert sum(m * orbit_size(d, mu) for mu, m in ws.items()) == weyl_dimension(d, top)


def test_known_multiplicities():
    d = build_algebra("A", 2)
    assert weight_system(d, (1, 1))[(0, 0)] == 2
    e8 = build_algebra("E", 8)
    adj = weight_system(e8, e8.theta)
    assert adj[(0,) * 8] == 8
    assert weyl_dimension(e8, e8.theta) == 248
    assert weyl_dimension(e8, (1, 0, 0, 0, 0, 0, 0, 0)) == 3875


def test_orbit_sizes():
    d = build_algebra("A", 2)
    assert len(weyl_orbit(d, (1, 1))) == 6
    assert len(weyl_orbit(d, (1, 0))) == 3
    assert orbit_size(build_algebra("E", 8), (0, 0, 0, 0, 0, 0, 0, 1)) == 240


def _weights(rank, lo=-6, hi=6):
    return st.tuples(*[st.integers(lo, hi)] * rank)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([("A", 2), ("B", 2), ("G", 2), ("A", 3), ("C", 3)]), st.data())
def test_to_dominant_properties(alg, data):
    d = build_algebra(*alg)
    lam = data.draw(_weights(d.rank))
    dom, sign = to_dominant(d, lam)
    assert is_dominant(dom)
    # same norm, same congruence class
    assert inner_product(d, dom, dom) == inner_product(d, lam, lam)
    assert congruence_class(d, dom) == congruence_class(d, lam)
    # shifting by rho: sign of the dot action is zero exactly on walls
    shifted = tuple(a + 1 for a in lam)
    dom2, sign2 = to_dominant(d, shifted)
    assert (sign2 == 0) == (0 in dom2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("A", 2), ("B", 2), ("G", 2)]), st.data())
def test_reflection_is_involution(alg, data):
    d = build_algebra(*alg)
    lam = data.draw(_weights(d.rank))
    i = data.draw(st.integers(0, d.rank - 1))
    assert reflect(d, reflect(d, lam, i), i) == tuple(lam)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([("A", 1), ("A", 2), ("B", 2), ("G", 2)]), st.data())
def test_weight_multiplicities_are_orbit_invariant(alg, data):
    d = build_algebra(*alg)
    top = data.draw(_weights(d.rank, 0, 3))
    ws = weight_system(d, top)
    assert ws[top] == 1
    assert all(m > 0 for m in ws.values())
    orbit = weyl_orbit(d, top)
    assert len({tuple(r) for r in np.asarray(orbit)}) == len(orbit)
