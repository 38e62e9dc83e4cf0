"""
Tests for presentations and the parameter-raising rewrite
"""
import random

import pytest

from src.algebra import (
    EMPTY,
    PrimeField,
    RationalField,
    contains_variable_at_most,
    count_words_up_to,
    deglex_key,
    min_monomial,
)
from src.errors import PresentationError, ResourceLimitError
from src.parser import parse_poly
from src.presentation import (
    Achiever,
    Presentation,
    PresentationTerm,
    RelationSystem,
    ResourceLimits,
    bare_term,
    certify_min_monomial,
    evaluate,
    improve_once,
    parameter_tau,
    tau_achievers,
)

from .randomized import random_normalized_system, random_presentation

Q = RationalField()
NAMES = ["x1", "x2", "x3"]


def poly(text, names=NAMES):
    return parse_poly(text, Q, names)


def term(c, left, index, right):
    return PresentationTerm(Q.from_int(c), left, index, right)


@pytest.fixture
def system():
    """f1 = x1 + x3^2, f2 = x2 over three variables."""
    return RelationSystem(Q, 3, (poly("x1 + x3*x3"), poly("x2")))


@pytest.fixture
def worked(system):
    return Presentation(system, (term(1, EMPTY, 1, (2,)), term(-1, (1,), 2, EMPTY)))


class TestRelationSystem:
    """Test the normalized flag."""

    def test_normalized(self, system):
        assert system.normalized

    def test_not_normalized(self):
        assert not RelationSystem(Q, 2, (poly("x2 - x1*x1", ["x1", "x2"]),)).normalized
        assert not RelationSystem(Q, 2, (poly("x1 + x2", ["x1", "x2"]),)).normalized

    def test_relation_index(self, system):
        with pytest.raises(PresentationError):
            system.relation(3)


class TestEvaluate:
    """Test evaluation and the parameter τ."""

    def test_worked_example(self, worked):
        assert evaluate(worked) == poly("x3^2*x2")
        assert parameter_tau(worked) == (1, 2)

    def test_empty(self, system):
        assert evaluate(Presentation(system)).is_zero()
        with pytest.raises(PresentationError):
            parameter_tau(Presentation(system))

    def test_bare_term(self):
        system = RelationSystem(Q, 2, (poly("x1 + x2*x2", ["x1", "x2"]),))
        single = Presentation(system, (bare_term(system, 1),))
        assert evaluate(single) == poly("x1 + x2^2", ["x1", "x2"])
        assert parameter_tau(single) == (1,)

    def test_terms_merge(self, system):
        merged = Presentation(system, (term(1, EMPTY, 1, EMPTY), term(-1, EMPTY, 1, EMPTY), term(2, (1,), 1, EMPTY)))
        assert merged.terms == (term(2, (1,), 1, EMPTY),)
        assert deglex_key(parameter_tau(merged)) > deglex_key((1,))

    def test_bad_index(self, system):
        with pytest.raises(PresentationError):
            Presentation(system, (term(1, EMPTY, 3, EMPTY),))


class TestImprove:
    """Test achievers and one rewrite step."""

    def test_achievers(self, worked):
        assert tau_achievers(worked) == [Achiever(term_index=0, position=1), Achiever(term_index=1, position=2)]

    def test_improve_worked_example(self, worked):
        improved = improve_once(worked)
        assert improved.terms == (term(1, (3, 3), 2, EMPTY),)
        assert parameter_tau(improved) == (3, 3, 2)
        assert evaluate(improved) == evaluate(worked)

    def test_tau_equals_minimum(self, system):
        single = Presentation(system, (bare_term(system, 1),))
        with pytest.raises(PresentationError, match="m\\(s\\)"):
            improve_once(single)

    def test_zero_evaluation(self, system):
        zero = Presentation(system, (term(1, (2,), 2, EMPTY), term(-1, EMPTY, 2, (2,))))
        assert len(zero) == 2
        with pytest.raises(PresentationError, match="evaluates to 0"):
            improve_once(zero)

    def test_unnormalized(self):
        system = RelationSystem(Q, 2, (poly("x2 - x1*x1", ["x1", "x2"]),))
        with pytest.raises(PresentationError, match="normalized"):
            improve_once(Presentation(system, (term(1, EMPTY, 1, EMPTY),)))

    def test_term_cap(self, worked):
        with pytest.raises(ResourceLimitError):
            improve_once(worked, ResourceLimits(term_cap=0))


class TestCertifyMinMonomial:
    """Test the improvement loop."""

    def test_one_step(self, worked):
        trace = []
        final, m = certify_min_monomial(worked, trace=trace)
        assert m == (3, 3, 2)
        assert trace == [(1, 2), (3, 3, 2)]
        assert contains_variable_at_most(m, 2)
        assert evaluate(final) == poly("x3^2*x2")

    def test_already_minimal(self):
        names = ["x1", "x2"]
        system = RelationSystem(Q, 2, (poly("x1 + x2*x2", names),))
        start = Presentation(system, (term(1, (2,), 1, EMPTY), term(-1, EMPTY, 1, (2,))))
        assert evaluate(start) == poly("x2*x1 - x1*x2", names)
        final, m = certify_min_monomial(start)
        assert final == start
        assert m == (1, 2)

    def test_bare_term(self, system):
        _, m = certify_min_monomial(Presentation(system, (bare_term(system, 2),)))
        assert m == (2,)

    def test_step_cap(self, worked):
        with pytest.raises(ResourceLimitError):
            certify_min_monomial(worked, ResourceLimits(step_cap=0))


def _improvement_trial(rng, field):
    """One randomized run; returns False when the presentation evaluates to zero."""
    nvars = rng.randint(1, 5)
    k = rng.randint(1, min(3, nvars))
    system = random_normalized_system(rng, field, nvars, k)
    start = random_presentation(rng, system)
    s = evaluate(start)
    if s.is_zero():
        return False
    m = min_monomial(s)
    assert deglex_key(parameter_tau(start)) <= deglex_key(m)

    current = start
    steps = 0
    while parameter_tau(current) != m:
        tau = parameter_tau(current)
        achievers = tau_achievers(current)
        total = field.zero
        for a in achievers:
            total = total + current.terms[a.term_index].coefficient
        assert field.is_zero(total)

        following = improve_once(current)
        assert evaluate(following) == s
        assert deglex_key(parameter_tau(following)) > deglex_key(tau)
        current = following
        steps += 1

    assert steps <= count_words_up_to(nvars, len(m))
    final, certified = certify_min_monomial(start)
    assert certified == m
    assert evaluate(final) == s
    assert contains_variable_at_most(m, k)
    return True


class TestImprovementProperties:
    """Randomized checks of preservation, progress and the minimal-monomial property."""

    @pytest.mark.parametrize("field", [RationalField(), PrimeField(7)], ids=["Q", "GF7"])
    def test_randomized(self, field):
        rng = random.Random(2024)
        nonzero = sum(_improvement_trial(rng, field) for _ in range(120))
        assert nonzero > 60

    @pytest.mark.acceptance
    @pytest.mark.parametrize("field", [RationalField(), PrimeField(7)], ids=["Q", "GF7"])
    def test_randomized_full(self, field):
        rng = random.Random(1)
        for _ in range(1000):
            _improvement_trial(rng, field)
