from itertools import combinations_with_replacement

import pytest
from hypothesis import given, strategies as st

from embcalc.engine import (
    RULES,
    ConnFact,
    DerivationTrace,
    Step,
    apply_rule,
    derive_eta_bound,
    derive_homogeneous_cartesianness,
)
from embcalc.errors import InvalidArgument, PreconditionViolation
from embcalc.estimates import AnalyticCofunctor, eta_connectivity
from embcalc.extint import INF, NEG_INF, ExtInt


def cart(b):
    return ConnFact("X", "cartesian", b)


def conn(b):
    return ConnFact("f", "connected", b)


def test_r3_strip_instance():
    # c = -1, rho = 4, q = [2, 1]: g inherits c + sum(rho - q_i) from f
    out = apply_rule("R3", [cart(INF), cart(-1 + 1 + 2 + 3)])
    assert out.bound == ExtInt(-1 + 2 + 3)


def test_r4_punctured_cube():
    c, k, rho, q = -3, 3, 4, 2
    out = apply_rule("R4", [conn(c + k * (rho - q + 1))], cube_size=k)
    assert out.bound == ExtInt(c + k * (rho - q + 1) - k + 1) and out.kind == "connected"


def test_r5_min():
    assert apply_rule("R5", [conn(6), conn(7)]).bound == ExtInt(6)


@pytest.mark.parametrize(
    "rule, inputs, params",
    [("R2", [cart(1)], {}), ("R3", [cart(1), cart(2), cart(3)], {}), ("R4", [conn(1)], {}), ("W", [cart(2)], {}), ("Q", [cart(1)], {})],
)
def test_rule_misuse(rule, inputs, params):
    with pytest.raises(InvalidArgument):
        apply_rule(rule, inputs, **params)


def test_weakening_cannot_strengthen():
    with pytest.raises(InvalidArgument):
        apply_rule("W", [cart(3)], bound=4)
    assert apply_rule("W", [cart(3)], bound=1).bound == ExtInt(1)


bounds = st.one_of(st.integers(-20, 20).map(ExtInt), st.just(INF))


@given(bounds, bounds, st.integers(0, 5))
def test_rule_soundness(a, b, bump):
    for rule in ("R2", "R3", "R5"):
        mk = conn if rule == "R5" else cart
        out = apply_rule(rule, [mk(a), mk(b)]).bound
        assert out <= max(a, b) + 1
        # monotone in each input
        assert apply_rule(rule, [mk(a + bump), mk(b)]).bound >= out
        assert apply_rule(rule, [mk(a), mk(b + bump)]).bound >= out


@pytest.mark.parametrize(
    "rho, c, q, k, expected",
    [(4, -3, 1, 3, 6), (4, -3, 0, 2, 5), (3, -2, 2, 2, 0)],
)
def test_eta_examples(rho, c, q, k, expected):
    trace = derive_eta_bound(AnalyticCofunctor(rho, c), q, k)
    assert trace.conclusion.bound == ExtInt(expected)
    assert trace.conclusion.bound == eta_connectivity(AnalyticCofunctor(rho, c), q, k - 1)


def test_eta_intermediate_punctured_cube_fact():
    trace = derive_eta_bound(AnalyticCofunctor(3, -2), 2, 2)
    r4 = [s.output.bound for s in trace.steps if s.rule == "R4"]
    assert r4[-1] == ExtInt(1)


@pytest.mark.parametrize("balls", [0, 1, 2, 3, 6])
def test_eta_ball_count_does_not_change_the_bound(balls):
    F = AnalyticCofunctor(4, -3)
    trace = derive_eta_bound(F, 1, 3, balls=balls)
    assert trace.conclusion.bound == ExtInt(6)


def test_eta_preconditions():
    with pytest.raises(PreconditionViolation):
        derive_eta_bound(AnalyticCofunctor(3, 0), 3, 2)
    with pytest.raises(InvalidArgument):
        derive_eta_bound(AnalyticCofunctor(3, 0), 1, 1)


@pytest.mark.parametrize(
    "k, c, rho, m, qs, expected",
    [
        (2, 0, 4, 3, [0, 0], 8),
        (3, -1, 4, 3, [2, 1], 4),
        (2, 0, 4, 3, [0, 0, 0], INF),
        (2, 0, 4, 3, ["-inf", 1], INF),
        (0, 5, 4, 3, [1], INF),
    ],
)
def test_homogeneous_examples(k, c, rho, m, qs, expected):
    trace = derive_homogeneous_cartesianness(k, c, rho, m, qs)
    assert trace.conclusion.bound == ExtInt(expected)


@pytest.mark.parametrize("base", [(0,), (0, 0), (1, 0), (2, 1, 0), ()])
def test_homogeneous_base_decomposition_does_not_matter(base):
    trace = derive_homogeneous_cartesianness(3, -1, 4, 3, [2, 1], base_handles=base)
    assert trace.conclusion.bound == ExtInt(4)


def test_homogeneous_preconditions():
    with pytest.raises(PreconditionViolation):
        derive_homogeneous_cartesianness(2, 0, 2, 3, [0])
    with pytest.raises(PreconditionViolation):
        derive_homogeneous_cartesianness(2, 0, 4, 3, [4])
    with pytest.raises(InvalidArgument):
        derive_homogeneous_cartesianness(2, 0, 4, 3, [])


@pytest.mark.parametrize("rho", range(2, 9))
def test_eta_grid(rho):
    for c in range(-6, 3):
        for q in range(rho):
            for k in range(2, 7):
                trace = derive_eta_bound(AnalyticCofunctor(rho, c), q, k)
                trace.validate()
                assert trace.conclusion.bound == ExtInt(c + k * (rho - q))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_homogeneous_grid(k):
    for rho in range(2, 6):
        for m in range(rho + 1):
            for r1 in range(1, k + 1):
                for qs in combinations_with_replacement(range(m + 1), r1):
                    trace = derive_homogeneous_cartesianness(k, 0, rho, m, qs)
                    trace.validate()
                    assert trace.conclusion.bound == ExtInt(sum(rho - q for q in qs))


def test_trace_text_and_dict():
    trace = derive_eta_bound(AnalyticCofunctor(3, -2), 1, 2)
    lines = trace.to_text().splitlines()
    assert len(lines) == len(trace.steps) + 1
    assert lines[-1].startswith("conclusion\t")
    for i, line in enumerate(lines[:-1]):
        index, rule, inputs = line.split("\t")[:3]
        assert index == f"#{i}" and (rule in RULES or rule == "axiom")
        assert inputs == "-" or all(int(t[1:]) < i for t in inputs.split(","))
    d = trace.to_dict()
    assert d["conclusion"]["bound"] == trace.conclusion.bound.to_json()
    assert len(d["steps"]) == len(trace.steps)


def test_validate_catches_forward_references():
    good = ConnFact("a", "cartesian", 1)
    trace = DerivationTrace([Step("R5", (1,), good), Step("axiom", (), good)], good)
    with pytest.raises(InvalidArgument):
        trace.validate()
    with pytest.raises(InvalidArgument):
        DerivationTrace([Step("axiom", (), good)], ConnFact("b", "cartesian", 1)).validate()


def test_fact_kind_checked():
    with pytest.raises(InvalidArgument):
        ConnFact("x", "homotopic", 1)
    assert str(ConnFact("x", "connected", NEG_INF)) == "x is -inf-connected"
