from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import factor_connectivity, necklace_count

from embcalc.errors import InvalidArgument, UnsupportedRange
from embcalc.extint import ExtInt
from embcalc.spaces import GenericCW, Loop, Point, Sphere, connectivity, normalize
from embcalc.tower import contractible_factors, factor_expr, knot_tower, layer_factors, tower_summary


def rows(factors):
    return [(str(f.word), normalize(f.expr), int(f.connectivity)) for f in factors]


def test_layer_two_over_a_point():
    (f,) = layer_factors(2, 6, Point(), 50)
    assert (str(f.word), f.alpha, f.beta) == ("z2", 1, 0)
    assert normalize(f.expr) == Loop(2, Sphere(5)) and f.connectivity == 2


def test_layer_three_over_a_point():
    assert rows(layer_factors(3, 6, Point(), 10)) == [
        ("[z2,z3]", Loop(3, Sphere(9)), 5),
        ("[z2,[z2,z3]]", Loop(3, Sphere(13)), 9),
        ("[[z2,z3],z3]", Loop(3, Sphere(13)), 9),
    ]


def test_layer_two_over_a_sphere():
    # weight-4 words all land in Ω²S⁹ (connectivity 6), above the cutoff
    assert rows(layer_factors(2, 4, Sphere(2), 5)) == [
        ("z2", Loop(2, Sphere(3)), 0),
        ("[z1,z2]", Loop(2, Sphere(5)), 2),
        ("[z1,[z1,z2]]", Loop(2, Sphere(7)), 4),
        ("[[z1,z2],z2]", Loop(2, Sphere(7)), 4),
    ]


def test_factor_expression_shape():
    f = layer_factors(2, 4, GenericCW("Y", 0), 4)[2]
    assert f.expr == factor_expr(2, 4, GenericCW("Y", 0), f.alpha, f.beta)
    assert f.connectivity == connectivity(f.expr)


@pytest.mark.parametrize("n", [0, 3])
def test_layers_need_n_at_least_four(n):
    with pytest.raises(UnsupportedRange):
        layer_factors(2, n, Point(), 10)


def test_layers_reject_bad_input():
    with pytest.raises(InvalidArgument):
        layer_factors(1, 5, Point(), 10)
    with pytest.raises(InvalidArgument):
        layer_factors(2, 5, Sphere(0), 10)
    with pytest.raises(InvalidArgument):
        layer_factors(2, 5, Point(), "inf")
    assert layer_factors(2, 5, Point(), "-inf") == []


@pytest.mark.parametrize("k, n", [(2, 4), (3, 5), (4, 4), (4, 6)])
def test_point_target_counts_are_witt_numbers(k, n):
    # over a point only words in z_2..z_k survive
    cutoff = 14
    factors = layer_factors(k, n, Point(), cutoff)
    assert all(f.beta == 0 for f in factors)
    got = Counter(f.word.multidegree.degrees for f in factors)
    expected = Counter()
    for tail in product(range(1, 16), repeat=k - 1):
        alpha = sum(tail)
        if factor_connectivity(k, n, alpha, 0, None) <= cutoff:
            expected[(0,) + tail] = necklace_count((0,) + tail)
    assert got == +expected


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 4),
    st.integers(4, 7),
    st.one_of(st.none(), st.integers(0, 3)),
    st.integers(-2, 9),
    st.integers(0, 4),
)
def test_layer_invariants(k, n, conn_y, cutoff, extra):
    Y = Point() if conn_y is None else GenericCW("Y", conn_y)
    low = layer_factors(k, n, Y, cutoff)
    high = layer_factors(k, n, Y, cutoff + extra)
    assert set(f.word for f in low) <= set(f.word for f in high)
    keys = [(f.connectivity, f.word.sort_key()) for f in high]
    assert keys == sorted(keys)
    for f in high:
        assert f.connectivity <= cutoff + extra
        assert f.connectivity == factor_connectivity(k, n, f.alpha, f.beta, conn_y)
        assert all(d >= 1 for d in f.word.multidegree.degrees[1:])
        assert f.alpha + f.beta == f.word.weight


def test_contractible_factors_only_for_a_point():
    # weight budget: alpha * 3 + beta <= 2 + 2
    dropped = contractible_factors(2, 5, Point(), 2)
    assert [str(f.word) for f in dropped] == ["[z1,z2]"]
    dropped = contractible_factors(2, 5, Point(), 4)
    assert [str(f.word) for f in dropped] == ["[z1,z2]", "[z1,[z1,z2]]", "[z1,[z1,[z1,z2]]]"]
    assert all(normalize(f.expr) == Point() for f in dropped)
    assert contractible_factors(2, 5, Sphere(3), 4) == []
    assert contractible_factors(2, 5, Point(), "-inf") == []


def test_tower_n6():
    s = tower_summary(6, Point(), 2, 50)
    assert [st.label for st in s.stages] == ["immersions", "layer"]
    assert rows(s.stages[1].factors) == [("z2", Loop(2, Sphere(5)), 2)]
    assert s.stages[1].map_connectivity == 3  # -3 + 2(4 - 1)


def test_tower_first_stage_only():
    s = tower_summary(4, Point(), 1, 7)
    assert len(s.stages) == 1 and s.stages[0].label == "immersions"


def test_tower_n5_stage_three():
    # Ω³S⁷ is (6 - 3)-connected and Ω³S¹⁰ is (9 - 3)-connected
    s = tower_summary(5, Point(), 3, 8)
    assert [(normalize(f.expr), int(f.connectivity)) for f in s.stages[2].factors] == [
        (Loop(3, Sphere(7)), 3),
        (Loop(3, Sphere(10)), 6),
        (Loop(3, Sphere(10)), 6),
    ]
    assert [st.map_connectivity for st in s.stages[1:]] == [ExtInt(2), ExtInt(4)]


def test_tower_handle_index_flag():
    s = tower_summary(7, Point(), 3, 5, q=0)
    assert [int(st.map_connectivity) for st in s.stages[1:]] == [-4 + 2 * 5, -4 + 3 * 5]


def test_tower_rejects():
    with pytest.raises(InvalidArgument):
        tower_summary(5, Point(), 0, 5)
    with pytest.raises(UnsupportedRange):
        tower_summary(3, Point(), 2, 5)


@pytest.mark.parametrize("n, base_conn, sphere", [(6, 4, 5), (4, 2, 3), (9, 7, 8)])
def test_knot_tower(n, base_conn, sphere):
    kt = knot_tower(n, 2, 50)
    assert kt.fibration.base_connectivity == base_conn
    assert kt.fibration.base_dimension == 2 * n - 1
    assert kt.fibration.base == f"O({n + 1})/O({n - 1})"
    assert [normalize(f.expr) for f in kt.tower.stages[1].factors] == [Loop(2, Sphere(sphere))]


def test_knot_tower_needs_n_at_least_four():
    with pytest.raises(UnsupportedRange):
        knot_tower(3, 2, 10)
