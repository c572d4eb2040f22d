"""Structural model semantics: validation, lifting, interventions."""

from fractions import Fraction as F

import pytest

from causaldp import (
    CyclicModel,
    Dist,
    DomainMismatch,
    ExogenousTarget,
    MissingEquation,
    ProbabilisticSem,
    Sem,
    StochasticEquation,
    UnknownVariable,
    ValueOutOfDomain,
    constant_equation,
    copy_equation,
    deterministic_equation,
)


def coin_eq(target, parent, p_heads):
    return StochasticEquation(
        target,
        (parent,),
        {
            (0,): {0: 1 - p_heads, 1: p_heads},
            (1,): {0: p_heads, 1: 1 - p_heads},
        },
    )


def chain_model() -> Sem:
    # U -> X -> Y, all binary
    return Sem(
        ("U", "X", "Y"),
        {"U": (0, 1), "X": (0, 1), "Y": (0, 1)},
        {"X": coin_eq("X", "U", F(1, 3)), "Y": coin_eq("Y", "X", F(1, 4))},
    )


def test_equation_rows_must_sum_to_one():
    with pytest.raises(DomainMismatch):
        StochasticEquation("X", (), {(): {0: F(1, 2)}})


def test_equation_row_key_arity():
    with pytest.raises(DomainMismatch):
        StochasticEquation("X", ("A",), {(): {0: F(1)}})


def test_exogenous_endogenous_split():
    m = chain_model()
    assert m.exogenous == ("U",)
    assert m.endogenous == ("X", "Y")
    assert m.parents_of("Y") == ("X",)
    assert m.ancestors_of("Y") == frozenset({"X", "U"})


def test_validate_catches_cycles():
    m = Sem(
        ("A", "B"),
        {"A": (0, 1), "B": (0, 1)},
        {"A": copy_equation("A", "B", (0, 1)),
         "B": copy_equation("B", "A", (0, 1))},
    )
    with pytest.raises(CyclicModel):
        m.validate()


def test_validate_catches_unknown_parent():
    m = Sem(("A",), {"A": (0, 1)}, {"A": copy_equation("A", "Z", (0, 1))})
    with pytest.raises(UnknownVariable):
        m.validate()


def test_validate_catches_missing_row_coverage():
    eq = StochasticEquation("X", ("U",), {(0,): {0: F(1)}})  # no row for U=1
    m = Sem(("U", "X"), {"U": (0, 1), "X": (0, 1)}, {"X": eq})
    with pytest.raises(DomainMismatch):
        m.validate()


def test_validate_catches_value_outside_domain():
    eq = StochasticEquation("X", (), {(): {7: F(1)}})
    m = Sem(("X",), {"X": (0, 1)}, {"X": eq})
    with pytest.raises(ValueOutOfDomain):
        m.validate()


def test_missing_equation_means_exogenous_not_error():
    m = Sem(("U",), {"U": (0, 1)}, {})
    assert m.validate() == ("U",)
    assert m.exogenous == ("U",)


def test_semantics_given_exogenous_exact():
    m = chain_model()
    d = m.semantics_given_exogenous({"U": 0})
    # X = 1 w.p. 1/3; Y = 1 w.p. X==0 -> 1/4, X==1 -> 3/4
    assert d.prob({"X": 1}) == F(1, 3)
    assert d.prob({"Y": 1}) == F(2, 3) * F(1, 4) + F(1, 3) * F(3, 4)


def test_semantics_requires_full_exogenous_assignment():
    m = chain_model()
    with pytest.raises(DomainMismatch):
        m.semantics_given_exogenous({})
    with pytest.raises(DomainMismatch):
        m.semantics_given_exogenous({"U": 0, "X": 1})


def test_lift_mixes_exogenous_distribution():
    m = Sem(
        ("U", "X"),
        {"U": ("a", "b"), "X": (0, 1)},
        {
            "X": StochasticEquation(
                "X", ("U",),
                {("a",): {1: F(1)}, ("b",): {0: F(1, 2), 1: F(1, 2)}},
            )
        },
    )
    psem = ProbabilisticSem(
        m, Dist(("U",), {("a",): F(1, 3), ("b",): F(2, 3)})
    )
    joint = psem.lift()
    assert joint.prob({"X": 1}) == F(1, 3) + F(2, 3) * F(1, 2)
    assert joint.prob({"U": "a", "X": 0}) == 0


def test_intervention_replaces_equation():
    m = chain_model()
    forced = m.intervene("X", 1)
    d = forced.semantics_given_exogenous({"U": 0})
    assert d.prob({"X": 1}) == 1
    assert d.prob({"Y": 1}) == F(3, 4)


def test_intervention_breaks_upstream_dependence_only():
    psem = ProbabilisticSem(chain_model(), Dist.uniform(("U",), [(0,), (1,)]))
    forced = psem.intervene("X", 1)
    joint = forced.lift()
    # U unaffected, Y follows the forced X
    assert joint.prob({"U": 1}) == F(1, 2)
    assert joint.prob({"Y": 1}) == F(3, 4)


def test_intervene_twice_last_wins():
    m = chain_model()
    again = m.intervene("X", 0).intervene("X", 1)
    d = again.semantics_given_exogenous({"U": 1})
    assert d.prob({"X": 1}) == 1


def test_intervene_rejects_exogenous_and_bad_values():
    m = chain_model()
    with pytest.raises(ExogenousTarget):
        m.intervene("U", 0)
    with pytest.raises(ValueOutOfDomain):
        m.intervene("X", 9)
    with pytest.raises(UnknownVariable):
        m.intervene("Q", 0)


def test_intervention_is_pure():
    m = chain_model()
    m.intervene("X", 1)
    assert "X" in m.equations
    assert m.equations["X"].parents == ("U",)


def test_pin_exogenous_is_surgery_not_conditioning():
    # correlated exogenous pair: pinning one must not drag the other along
    m = Sem(
        ("U", "V", "X"),
        {"U": (0, 1), "V": (0, 1), "X": (0, 1)},
        {"X": copy_equation("X", "V", (0, 1))},
    )
    correlated = Dist(
        ("U", "V"), {(0, 0): F(1, 2), (1, 1): F(1, 2)}
    )
    psem = ProbabilisticSem(m, correlated)
    pinned = psem.pin_exogenous("U", 1)
    joint = pinned.lift()
    # conditioning on U=1 would force V=1; surgery keeps V's marginal
    assert joint.prob({"V": 1}) == F(1, 2)
    assert joint.prob({"U": 1}) == 1
    # pinning a zero-probability value is legal
    uniform_v = psem.pin_exogenous("U", 1).exogenous_dist.marginal(("V",))
    assert uniform_v.weight_of((0,)) == F(1, 2)


def test_pin_rejects_endogenous():
    psem = ProbabilisticSem(chain_model(), Dist.uniform(("U",), [(0,), (1,)]))
    with pytest.raises(DomainMismatch):
        psem.pin_exogenous("X", 1)


def test_do_dispatches_by_variable_kind():
    psem = ProbabilisticSem(chain_model(), Dist.uniform(("U",), [(0,), (1,)]))
    out = psem.do({"U": 0, "X": 1}).lift()
    assert out.prob({"U": 0}) == 1
    assert out.prob({"X": 1}) == 1
    assert out.prob({"Y": 1}) == F(3, 4)


def test_parents_rule_conditioning_equals_intervening():
    # for X with a single parent U: Fr[X | U = u] == Fr[X | do-ish pin U = u]
    psem = ProbabilisticSem(chain_model(), Dist.uniform(("U",), [(0,), (1,)]))
    lifted = psem.lift()
    for u in (0, 1):
        conditioned = lifted.condition({"U": u}).prob({"X": 1})
        pinned = psem.pin_exogenous("U", u).lift().prob({"X": 1})
        assert conditioned == pinned


def test_query_interventions_then_conditions():
    psem = ProbabilisticSem(chain_model(), Dist.uniform(("U",), [(0,), (1,)]))
    # Fr[Y=1 | do(X=1), U=0] : conditioning happens in the intervened model
    got = psem.query({"Y": 1}, [("X", 1)], {"U": 0})
    assert got == F(3, 4)
    plain = psem.query({"Y": 1})
    assert plain == psem.lift().prob({"Y": 1})


def test_downstream_only_influence():
    # intervening on Y must not change X's distribution
    psem = ProbabilisticSem(chain_model(), Dist.uniform(("U",), [(0,), (1,)]))
    base = psem.lift().prob({"X": 1})
    forced = psem.intervene("Y", 1).lift().prob({"X": 1})
    assert base == forced


def test_deterministic_and_constant_equations():
    m = Sem(
        ("A", "B", "S"),
        {"A": (0, 1), "B": (0, 1), "S": (0, 1, 2)},
        {
            "S": deterministic_equation(
                "S", ("A", "B"), [(0, 1), (0, 1)], lambda a, b: a + b
            )
        },
    )
    psem = ProbabilisticSem(
        m, Dist.uniform(("A", "B"), [(a, b) for a in (0, 1) for b in (0, 1)])
    )
    assert psem.lift().prob({"S": 1}) == F(1, 2)
    c = constant_equation("S", 2)
    assert c.rows == {(): {2: F(1)}}
