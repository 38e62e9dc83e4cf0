"""
Tests for the bounded-degree oracle
"""
import random

import pytest
import sympy

from src.algebra import NcPoly, RationalField, apply_linear_map
from src.certifier import certify_freeness
from src.errors import ResourceLimitError, ZeroPolynomialError
from src.instance import AlgebraPresentation, CandidateSystem, verify_generation_witness
from src.oracle import (
    dependency_search_bounded,
    generation_search_bounded,
    ideal_span_up_to,
    normalizing_change,
)
from src.parser import parse_poly
from src.presentation import evaluate

from .randomized import magnus_instance, random_invertible, random_poly

Q = RationalField()
NAMES = ["x1", "x2"]


def poly(text, names=NAMES):
    return parse_poly(text, Q, names)


def slot(text, n=1):
    return parse_poly(text, Q, [f"z{i}" for i in range(1, n + 1)])


@pytest.fixture
def commutator():
    return AlgebraPresentation(Q, 2, (poly("x1*x2 - x2*x1"),))


@pytest.fixture
def worked():
    return AlgebraPresentation(Q, 2, (poly("x2 - x1*x1"),))


def linear_transform(rng, candidates):
    transform = random_invertible(rng, Q, candidates.n)
    out = []
    for row in transform.matrix:
        total = NcPoly.zero(Q, candidates.generators[0].nvars)
        for coeff, g in zip(row, candidates.generators):
            total = total + coeff * g
        out.append(total)
    return out


class TestIdealSpan:
    """Test the truncated ideal subspace."""

    def test_commutator_degree_two(self, commutator):
        space = ideal_span_up_to(commutator, 2)
        assert space.dimension == 6
        assert space.ideal_dimension == 1
        assert space.reduced_basis() == [poly("x1*x2 - x2*x1")]

    def test_no_relations(self):
        space = ideal_span_up_to(AlgebraPresentation(Q, 2), 3)
        assert space.ideal_dimension == 0
        assert space.reduced_basis() == []

    def test_worked_degree_two(self, worked):
        space = ideal_span_up_to(worked, 2)
        assert space.ideal_dimension == 4
        assert space.contains(poly("x2 - x1*x1"))
        assert space.contains(poly("x1*x2 + x2*x2"))
        assert not space.contains(poly("x1"))
        assert not space.contains(poly("x1*x1"))

    def test_reduced_basis_is_reduced(self, worked):
        space = ideal_span_up_to(worked, 3)
        basis = space.reduced_basis()
        leading = [p.terms[0][0] for p in basis]
        for p in basis:
            assert p.terms[0][1] == Q.one
            assert all(p.coefficient(w) == Q.zero for w in leading if w != p.terms[0][0])

    def test_degree_must_be_positive(self, worked):
        with pytest.raises(ValueError):
            ideal_span_up_to(worked, 0)

    def test_coordinate_cap(self, worked):
        with pytest.raises(ResourceLimitError, match="cap 10"):
            ideal_span_up_to(worked, 3, coordinate_cap=10)

    def test_normalizing_change(self, worked, commutator):
        assert normalizing_change(worked, CandidateSystem((poly("x1"),))) is None
        assert normalizing_change(commutator, CandidateSystem((poly("x1"),))) is None
        assert normalizing_change(worked, None) is None
        change = normalizing_change(worked, CandidateSystem((poly("x1 + x2"),)))
        assert change.matrix == ((Q.one, -Q.one), (Q.zero, Q.one))

    def test_normalized_coordinates_span_the_same_ideal(self, worked):
        change = normalizing_change(worked, CandidateSystem((poly("x1 + x2"),)))
        plain = ideal_span_up_to(worked, 3)
        normalized = ideal_span_up_to(worked, 3, change=change)
        assert normalized.change is change
        assert normalized.ideal_dimension == plain.ideal_dimension
        assert all(normalized.contains(p) for p in plain.reduced_basis())
        assert all(plain.contains(p) for p in normalized.reduced_basis())
        assert not normalized.contains(poly("x1"))


class TestDependencySearch:
    """Test the bounded dependency search."""

    def test_commutator(self, commutator):
        dependency = dependency_search_bounded(commutator, CandidateSystem((poly("x1"), poly("x2"))), 2)
        assert dependency.phi == slot("z1*z2 - z2*z1", 2)
        assert dependency.exact
        assert evaluate(dependency.presentation) == poly("x1*x2 - x2*x1")

    def test_monotone(self, commutator):
        candidates = CandidateSystem((poly("x1"), poly("x2")))
        assert dependency_search_bounded(commutator, candidates, 1) is None
        for degree in range(2, 5):
            assert dependency_search_bounded(commutator, candidates, degree) is not None

    def test_free_algebra(self):
        free = AlgebraPresentation(Q, 2)
        for degree in range(1, 4):
            assert dependency_search_bounded(free, CandidateSystem((poly("x1"), poly("x2"))), degree) is None

    def test_worked_instance(self, worked):
        assert dependency_search_bounded(worked, CandidateSystem((poly("x1"),)), 5) is None

    def test_truncated_dependency_is_flagged(self):
        # x2 = x1^3 in the algebra, so x2 vanishes only modulo degree > 2
        algebra = AlgebraPresentation(Q, 2, (poly("x2 - x1*x1*x1"),))
        dependency = dependency_search_bounded(algebra, CandidateSystem((poly("x1"), poly("x2"))), 2)
        assert dependency is not None
        assert dependency.phi == slot("z2", 2)
        assert not dependency.exact

    def _rank_trials(self, count, seed):
        rng = random.Random(seed)
        for _ in range(count):
            nvars = rng.randint(1, 3)
            n = rng.randint(1, 3)
            generators = []
            while len(generators) < n:
                g = random_poly(rng, Q, nvars, max_degree=1, max_terms=2)
                if not g.is_zero():
                    generators.append(g)
            rank = sympy.Matrix(
                [[sympy.Rational(str(g.coefficient((i,)))) for i in range(1, nvars + 1)] for g in generators]
            ).rank()
            found = dependency_search_bounded(AlgebraPresentation(Q, nvars), CandidateSystem(tuple(generators)), 1)
            assert (found is not None) == (rank < n)

    def test_degree_one_matches_rank(self):
        self._rank_trials(40, seed=21)

    @pytest.mark.acceptance
    def test_degree_one_matches_rank_full(self):
        self._rank_trials(200, seed=210)

    def test_commutator_invariance(self, commutator):
        rng = random.Random(4)
        candidates = CandidateSystem((poly("x1 + x1*x2"), poly("x2")))
        for _ in range(5):
            mixed = CandidateSystem(tuple(linear_transform(rng, candidates)))
            for degree in range(1, 4):
                before = dependency_search_bounded(commutator, candidates, degree) is None
                after = dependency_search_bounded(commutator, mixed, degree) is None
                assert before == after

    def _invariance_trials(self, count, max_degree, seed):
        """NONE/FOUND at each degree is unchanged when G is replaced by T·G."""
        rng = random.Random(seed)
        outcomes = set()
        for _ in range(count):
            nvars = rng.randint(2, 3)
            relations = tuple(
                h for h in (random_poly(rng, Q, nvars, max_degree=2, max_terms=3) for _ in range(rng.randint(0, 2)))
                if not h.is_zero()
            )
            generators = tuple(
                g for g in (random_poly(rng, Q, nvars, max_degree=2, max_terms=3) for _ in range(rng.randint(1, 3)))
                if not g.is_zero()
            )
            if not generators:
                continue
            algebra, candidates = AlgebraPresentation(Q, nvars, relations), CandidateSystem(generators)
            try:
                mixed = CandidateSystem(tuple(linear_transform(rng, candidates)))
            except ZeroPolynomialError:
                continue
            for degree in range(1, max_degree + 1):
                before = dependency_search_bounded(algebra, candidates, degree) is None
                after = dependency_search_bounded(algebra, mixed, degree) is None
                assert before == after
                outcomes.add(before)
        assert outcomes == {True, False}

    def test_linear_transformation_invariance(self):
        self._invariance_trials(25, 3, seed=4)

    @pytest.mark.acceptance
    def test_linear_transformation_invariance_full(self):
        self._invariance_trials(200, 3, seed=40)


class TestGenerationSearch:
    """Test the bounded generation-witness search."""

    def test_worked_instance(self, worked):
        witness = generation_search_bounded(worked, CandidateSystem((poly("x1"),)), 2)
        assert witness.entries[1].phi == slot("z1")
        assert witness.entries[2].phi == slot("z1^2")
        assert evaluate(witness.entries[2].ideal_part) == poly("x2 - x1*x1")

    def test_mixed_candidate_has_none(self, worked):
        assert generation_search_bounded(worked, CandidateSystem((poly("x1 + x2"),)), 6) is None

    def test_free_algebra(self):
        free = AlgebraPresentation(Q, 2)
        witness = generation_search_bounded(free, CandidateSystem((poly("x1"), poly("x2"))), 3)
        assert witness.entries[1].phi == slot("z1", 2)
        assert witness.entries[2].phi == slot("z2", 2)

    def test_mixed_coordinates(self):
        """Witnesses found through the change of variables are stated in the original letters."""
        rng = random.Random(31)
        for _ in range(6):
            mix = random_invertible(rng, Q, 2)
            algebra = AlgebraPresentation(Q, 2, (apply_linear_map(mix, poly("x2 - x1*x1")),))
            candidates = CandidateSystem((apply_linear_map(mix, poly("x1")),))
            witness = generation_search_bounded(algebra, candidates, 2)
            assert witness is not None
            assert verify_generation_witness(witness, algebra, candidates)
            for entry in witness.entries.values():
                assert entry.ideal_part.system == algebra.relation_system()

    def test_found_witnesses_verify(self):
        rng = random.Random(30)
        for _ in range(10):
            algebra, candidates = magnus_instance(rng, Q, rng.randint(1, 2), 1)
            witness = generation_search_bounded(algebra, candidates, 3)
            if witness is not None:
                assert verify_generation_witness(witness, algebra, candidates)


class TestOracleAgreement:
    """Certified instances never show a dependency."""

    def _trials(self, count, max_degree, seed):
        rng = random.Random(seed)
        for _ in range(count):
            n = rng.randint(1, 3)
            k = rng.randint(1, 2) if n < 3 else 1
            mix = random_invertible(rng, Q, n + k) if rng.random() < 0.5 else None
            algebra, candidates = magnus_instance(rng, Q, n, k, mix)
            assert certify_freeness(algebra, candidates).certified
            change = normalizing_change(algebra, candidates)
            for degree in range(1, max_degree + 1):
                space = ideal_span_up_to(algebra, degree, change=change)
                assert dependency_search_bounded(algebra, candidates, degree, space=space) is None

    def test_agreement(self):
        self._trials(10, 3, seed=6)

    @pytest.mark.acceptance
    def test_agreement_full(self):
        self._trials(100, 5, seed=60)
