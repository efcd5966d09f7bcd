from fractions import Fraction
from math import pi, sqrt, sin

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosetvoa.affine import (LevelSpec, central_charge, conformal_weight, congruence_class_sums,
                             enumerate_level_weights, s_matrix, s_matrix_weyl_sum, s_row_vacuum,
                             simple_current_action, simple_current_automorphisms, weyl_group)
from cosetvoa.liealg import build_algebra, level

SMALL = [("A", 1, k) for k in range(1, 5)] + [("A", 2, k) for k in range(1, 5)] + \
        [("B", 2, k) for k in range(1, 4)] + [("G", 2, k) for k in range(1, 4)] + \
        [("A", 3, 1), ("A", 3, 2), ("C", 3, 1), ("D", 4, 1), ("D", 4, 2), ("E", 6, 1), ("E", 7, 1),
         ("E", 8, 1), ("E", 8, 2), ("F", 4, 1)]


def spec(series, rank, k):
    return LevelSpec(build_algebra(series, rank), k)


def t_matrix(s):
    c = central_charge(s)
    h = [conformal_weight(s, lam) - c / 24 for lam in enumerate_level_weights(s)]
    return np.diag([np.exp(2j * pi * float(x % 1)) for x in h])


def test_level_spec_rejects_nonpositive():
    with pytest.raises(ValueError):
        spec("A", 1, 0)


def test_level_weight_counts():
    assert len(enumerate_level_weights(spec("A", 1, 5))) == 6
    assert len(enumerate_level_weights(spec("A", 2, 2))) == 6
    assert len(enumerate_level_weights(spec("E", 8, 1))) == 1
    assert len(enumerate_level_weights(spec("E", 8, 2))) == 3
    assert len(enumerate_level_weights(spec("E", 8, 3))) == 5
    # canonical ordering: by level, then labels
    ws = enumerate_level_weights(spec("A", 2, 2)).weights
    assert ws == ((0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0))


@pytest.mark.parametrize("k", range(1, 9))
def test_a1_closed_form(k):
    S = s_matrix(spec("A", 1, k)).entries
    n = k + 2
    ref = np.array([[sqrt(2 / n) * sin(pi * (a + 1) * (b + 1) / n) for b in range(k + 1)]
                    for a in range(k + 1)])
    assert np.max(np.abs(S - ref)) < 1e-10


@pytest.mark.parametrize("series,rank,k", SMALL)
def test_modular_relations(series, rank, k):
    s = spec(series, rank, k)
    S = s_matrix(s).entries
    n = len(S)
    assert np.allclose(S, S.T, atol=1e-10)
    assert np.allclose(S @ S.conj().T, np.eye(n), atol=1e-10)
    C = S @ S
    # S^2 is a permutation (charge conjugation)
    assert np.allclose(C, np.rint(C.real), atol=1e-9)
    assert np.allclose(np.abs(np.rint(C.real)).sum(axis=0), 1)
    T = t_matrix(s)
    ST = S @ T
    assert np.allclose(ST @ ST @ ST, C, atol=1e-8)
    assert abs(np.sum(S[0].real ** 2) - 1) < 1e-9


@pytest.mark.parametrize("series,rank,k", [(s, r, k) for s, r in [("A", 1), ("A", 2), ("B", 2), ("G", 2)]
                                           for k in range(1, 5)] + [("A", 3, 1), ("A", 3, 2), ("C", 3, 1)])
def test_weyl_sum_oracle(series, rank, k):
    s = spec(series, rank, k)
    assert np.max(np.abs(s_matrix(s).entries - s_matrix_weyl_sum(s))) < 1e-8


def test_weyl_group_orders():
    assert len(weyl_group(build_algebra("A", 2))) == 6
    assert len(weyl_group(build_algebra("B", 2))) == 8
    assert len(weyl_group(build_algebra("G", 2))) == 12
    assert len(weyl_group(build_algebra("A", 3))) == 24
    assert len(weyl_group(build_algebra("C", 3))) == 48
    with pytest.raises(ValueError):
        weyl_group(build_algebra("D", 4))


def test_e8_level1_trivial():
    S = s_matrix(spec("E", 8, 1)).entries
    assert S.shape == (1, 1) and abs(S[0, 0] - 1) < 1e-12


@pytest.mark.parametrize("series,rank,k", [(s, r, k) for s, r in [("A", 1), ("A", 2)] for k in range(1, 7)]
                         + [("B", 2, 2), ("C", 3, 2), ("D", 4, 2), ("E", 6, 2), ("E", 7, 2), ("A", 3, 3)])
def test_congruence_class_sums(series, rank, k):
    s = spec(series, rank, k)
    sums = congruence_class_sums(s)
    assert len(sums) == s.datum.center_order
    for v in sums.values():
        assert abs(v - 1 / s.datum.center_order) < 1e-9


def test_vacuum_row_matches_full_matrix():
    s = spec("B", 2, 3)
    assert np.allclose(s_row_vacuum(s), s_matrix(s).entries[0].real)


def test_conformal_weights_and_central_charge():
    assert conformal_weight(spec("A", 1, 1), (1,)) == Fraction(1, 4)
    assert conformal_weight(spec("A", 1, 2), (1,)) == Fraction(3, 16)
    assert conformal_weight(spec("A", 2, 1), (1, 0)) == Fraction(1, 3)
    assert conformal_weight(spec("E", 8, 2), (0, 0, 0, 0, 0, 0, 0, 1)) == Fraction(15, 16)   # 248
    assert conformal_weight(spec("E", 8, 2), (1, 0, 0, 0, 0, 0, 0, 0)) == Fraction(3, 2)     # 3875
    assert central_charge(spec("E", 8, 1)) == 8
    assert central_charge(spec("A", 1, 2)) == Fraction(3, 2)
    with pytest.raises(ValueError):
        conformal_weight(spec("A", 1, 1), (2,))


def test_a2_simple_current_cycle():
    act = simple_current_action(spec("A", 2, 1))
    assert act.apply(1, (0, 0)) == (1, 0)
    assert act.apply(1, (1, 0)) == (0, 1)
    assert act.apply(1, (0, 1)) == (0, 0)


@pytest.mark.parametrize("series,rank", [("A", 1), ("A", 3), ("B", 3), ("C", 3), ("D", 4), ("D", 5),
                                         ("E", 6), ("E", 7), ("E", 8), ("G", 2), ("F", 4)])
def test_simple_current_group(series, rank):
    d = build_algebra(series, rank)
    autos = simple_current_automorphisms(d)
    assert sorted(autos) == sorted(d.coweight_reps)
    table = simple_current_action(LevelSpec(d, 2))
    classes = list(table.maps)
    for a in classes:
        for b in classes:
            c = table.compose(a, b)
            assert c in classes
            assert table.compose(b, a) == c
    if series == "D" and rank % 2 == 0:
        assert all(table.compose(a, a) == 0 for a in classes)       # Klein four
    if series == "D" and rank % 2 == 1:
        assert table.compose(rank, rank) == 1                       # cyclic of order 4


@pytest.mark.parametrize("series,rank,k", SMALL)
def test_simple_currents_fix_vacuum_row_and_phase(series, rank, k):
    s = spec(series, rank, k)
    S = s_matrix(s).entries
    table = simple_current_action(s)
    for node, perm in table.maps.items():
        perm = np.array(perm)
        assert np.allclose(S[0, perm], S[0], atol=1e-10)
        # S_{J a, b} = phase(b) S_{a, b} with a phase independent of a
        ratio = S[perm[0]] / S[0]
        assert np.allclose(S[perm], S * ratio[None, :], atol=1e-9)
        levels = [level(s.datum, w) for w in enumerate_level_weights(s)]
        assert all(x <= k for x in levels)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([("A", 1), ("A", 2), ("A", 3), ("B", 2), ("D", 4)]), st.integers(1, 4))
def test_simple_currents_permute_level_weights(alg, k):
    s = spec(*alg, k)
    table = simple_current_action(s)
    n = len(enumerate_level_weights(s))
    for perm in table.maps.values():
        assert sorted(perm) == list(range(n))


def test_exact_phase_sums_match_naive():
    from cosetvoa.affine import _phase_sums
    from cosetvoa.liealg import all_weights
    d = build_algebra("B", 2)
    s = spec("B", 2, 3)
    pts = np.array(enumerate_level_weights(s).weights) + 1
    w, m = all_weights(d, (2, 1))
    period = s.shift * d.form_den
    naive = m @ np.exp(-2j * pi * np.mod(w @ d.form_int @ pts.T, period) / period)
    assert np.allclose(_phase_sums(d, w, m, pts, s.shift), naive, atol=1e-9)


def test_e8_high_level_stays_unitary():
    # multiplicities here run to millions; naive phase sums lose ~1e-9
    S = s_matrix(spec("E", 8, 4)).entries
    assert np.max(np.abs(S @ S.conj().T - np.eye(len(S)))) < 1e-12
