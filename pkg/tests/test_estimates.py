import pytest
from hypothesis import given, strategies as st

from embcalc.errors import InvalidArgument, PreconditionViolation, UnsupportedRange
from embcalc.estimates import (
    AnalyticCofunctor,
    HandleProfile,
    agrees_by_analyticity,
    analytic_cube_cartesianness,
    converges,
    emb_analyticity,
    emb_eta_connectivity,
    emb_tower_converges,
    eta_connectivity,
    excision_cartesianness,
    haefliger_metastable,
    homogeneous_analyticity,
    layer_map_connectivity,
)
from embcalc.extint import INF, NEG_INF, ExtInt

F43 = AnalyticCofunctor(4, -3)
F32 = AnalyticCofunctor(3, -2)


@pytest.mark.parametrize(
    "n, qs, expected",
    [(6, [0, 0], 5), (5, [1, 2], 1), (6, ["-inf", 0], INF), (7, [0, 1, 2], 3 - 7 + 5 + 4 + 3)],
)
def test_excision(n, qs, expected):
    assert excision_cartesianness(HandleProfile(n, qs)) == expected


def test_excision_errors():
    with pytest.raises(InvalidArgument):
        excision_cartesianness(HandleProfile(6, [0]))
    with pytest.raises(PreconditionViolation):
        excision_cartesianness(HandleProfile(6, [0, 4]))


@pytest.mark.parametrize("n, rho, c", [(6, 4, -3), (5, 3, -2), (3, 1, 0)])
def test_emb_analyticity(n, rho, c):
    F = emb_analyticity(n)
    assert (F.rho, F.c) == (rho, c)
    assert ("boundary" in F.label) == (n == 3)


def test_emb_analyticity_range():
    with pytest.raises(UnsupportedRange):
        emb_analyticity(2)


@pytest.mark.parametrize(
    "F, qs, expected",
    [(F43, [0, 0], 5), (F43, [1, 1, 1], 6), (AnalyticCofunctor(2, 0), ["-inf", 0], INF)],
)
def test_analytic_cube(F, qs, expected):
    assert analytic_cube_cartesianness(F, qs) == expected


def test_analytic_cube_precondition():
    with pytest.raises(PreconditionViolation):
        analytic_cube_cartesianness(F43, [0, 4])


@pytest.mark.parametrize("F, q, j, expected", [(F43, 1, 1, 3), (F43, 1, 2, 6), (F32, "-inf", 5, INF)])
def test_eta(F, q, j, expected):
    assert eta_connectivity(F, q, j) == expected


def test_eta_refuses_j_zero_and_large_q():
    with pytest.raises(InvalidArgument):
        eta_connectivity(F43, 1, 0)
    with pytest.raises(PreconditionViolation):
        eta_connectivity(F43, 4, 1)


@pytest.mark.parametrize("n, q, k, expected", [(6, 1, 1, 3), (4, 1, 2, 2)])
def test_emb_eta(n, q, k, expected):
    assert emb_eta_connectivity(n, q, k) == expected
    assert emb_eta_connectivity(n, q, k) == eta_connectivity(emb_analyticity(n), q, k)


def test_emb_eta_precondition():
    with pytest.raises(PreconditionViolation):
        emb_eta_connectivity(5, 3, 1)


@pytest.mark.parametrize("F, q, expected", [(F43, 1, True), (F43, 4, False), (F43, "-inf", True)])
def test_converges(F, q, expected):
    assert converges(F, q) is expected


@pytest.mark.parametrize("F, q, k, expected", [(F43, 1, 2, 3), (F43, 1, 0, -3), (F32, 0, 3, 7)])
def test_layer_map(F, q, k, expected):
    assert layer_map_connectivity(F, q, k) == expected


def test_layer_map_precondition():
    with pytest.raises(PreconditionViolation):
        layer_map_connectivity(F43, 5, 2)


@pytest.mark.parametrize("k, conn, rho, m, c", [(2, 7, 4, 3, 0), (0, -1, 5, 1, 0), (3, 10, 3, 3, 2)])
def test_homogeneous(k, conn, rho, m, c):
    F = homogeneous_analyticity(k, conn, rho, m)
    assert (F.rho, F.c) == (rho, c)
    # the certified excess satisfies the hypothesis with equality
    assert F.c - 1 + k * F.rho == conn


def test_homogeneous_absent_below_m():
    assert homogeneous_analyticity(2, 7, 2, 3) is None


@pytest.mark.parametrize("m, n, square, s", [(1, 4, True, 2), (2, 5, True, 1), (3, 5, False, -2)])
def test_haefliger(m, n, square, s):
    h = haefliger_metastable(m, n)
    assert (h.square_1_cartesian, h.s) == (square, s)


def test_haefliger_rejects_m_above_n():
    with pytest.raises(InvalidArgument):
        haefliger_metastable(6, 5)


@given(st.integers(2, 12), st.integers(-8, 4), st.data())
def test_monotone_in_degree(rho, c, data):
    F = AnalyticCofunctor(rho, c)
    q = data.draw(st.one_of(st.integers(0, rho - 1), st.just(NEG_INF)))
    for j in range(1, 8):
        if q == NEG_INF:
            assert eta_connectivity(F, q, j) == INF
        else:
            assert eta_connectivity(F, q, j + 1) > eta_connectivity(F, q, j)
            assert layer_map_connectivity(F, q, j) > layer_map_connectivity(F, q, j - 1)


@given(st.integers(4, 20), st.data())
def test_eta_indexing_matches_layer_maps(n, data):
    # eta_j and r_(j+1) carry the same bound c + (j+1)(rho - q)
    q = data.draw(st.integers(0, n - 3))
    j = data.draw(st.integers(1, 30))
    F = emb_analyticity(n)
    assert eta_connectivity(F, q, j) == layer_map_connectivity(F, q, j + 1)


def test_convergence_predicates():
    assert emb_tower_converges(1, 4, True)
    assert emb_tower_converges(2, 4, False)
    assert not emb_tower_converges(2, 4, True)
    assert emb_tower_converges(3, 4, True, q=1)
    assert not emb_tower_converges(3, 4, True, q=2)
    assert agrees_by_analyticity(4, 3, True)
    assert not agrees_by_analyticity(4, 4, True)
    assert not agrees_by_analyticity(4, 0, False)


def test_handle_profile_coerces():
    p = HandleProfile(6, ["-inf", 1])
    assert p.q_list == (NEG_INF, ExtInt(1)) and p.r == 1
