"""
Tests for the freeness certifier
"""
import random

import pytest

from src.algebra import LinearMap, NcPoly, PrimeField, RationalField
from src.algebra.linalg import identity_matrix, matmul
from src.certifier import (
    Verdict,
    build_phi,
    certify_freeness,
    linear_parts_matrix,
    rank_and_invert,
    verify_eq3,
)
from src.errors import ArityMismatchError, ZeroPolynomialError
from src.instance import (
    AlgebraPresentation,
    CandidateSystem,
    GenerationWitness,
    WitnessEntry,
    verify_generation_witness,
)
from src.oracle import dependency_search_bounded
from src.parser import parse_poly
from src.presentation import Presentation, bare_term

from .randomized import magnus_instance, random_invertible, random_poly

Q = RationalField()
NAMES = ["x1", "x2"]


def poly(text, names=NAMES, field=Q):
    return parse_poly(text, field, names)


def slot(text, n=1):
    return parse_poly(text, Q, [f"z{i}" for i in range(1, n + 1)])


def matrix(*rows):
    return tuple(tuple(Q.from_int(v) for v in row) for row in rows)


@pytest.fixture
def worked():
    """A = Q<x1,x2>/id(x2 - x1^2) with candidate x1."""
    return AlgebraPresentation(Q, 2, (poly("x2 - x1*x1"),)), CandidateSystem((poly("x1"),))


@pytest.fixture
def mixed(worked):
    return worked[0], CandidateSystem((poly("x1 + x2"),))


@pytest.fixture
def commutator():
    return AlgebraPresentation(Q, 2, (poly("x1*x2 - x2*x1"),)), CandidateSystem((poly("x1"),))


def worked_witness(algebra, phi="z1^2"):
    system = algebra.relation_system()
    return GenerationWitness({2: WitnessEntry(slot(phi), Presentation(system, (bare_term(system, 1),)))})


class TestLinearParts:
    """Test the β matrix and its inversion."""

    def test_identity_case(self, worked):
        beta, ys = linear_parts_matrix(*worked)
        assert beta == matrix([1, 0], [0, 1])
        assert ys == [poly("x1"), poly("x2")]

    def test_mixed_case(self, mixed):
        beta, _ = linear_parts_matrix(*mixed)
        assert beta == matrix([1, 1], [0, 1])
        assert rank_and_invert(Q, beta).alpha.matrix == matrix([1, -1], [0, 1])

    def test_zero_row(self, commutator):
        beta, _ = linear_parts_matrix(*commutator)
        assert beta[1] == (Q.zero, Q.zero)
        result = rank_and_invert(Q, beta)
        assert result.rejected
        assert result.rank == 1

    def test_identity_inverse(self):
        assert rank_and_invert(Q, identity_matrix(Q, 3)).alpha.matrix == identity_matrix(Q, 3)


class TestBuildPhi:
    """Test the change of variables and the linear-part check."""

    def test_identity_is_verbatim(self, worked):
        algebra, candidates = worked
        transformed = build_phi(LinearMap.identity(Q, 2), algebra, candidates)
        assert transformed.candidates == candidates.generators
        assert transformed.relations == algebra.relations

    def test_mixed_example(self, mixed):
        algebra, candidates = mixed
        alpha = rank_and_invert(Q, linear_parts_matrix(algebra, candidates)[0]).alpha
        transformed = build_phi(alpha, algebra, candidates)
        assert transformed.candidates == (poly("x1"),)
        assert transformed.relations == (poly("x2 - x1*x1 + x1*x2 + x2*x1 - x2*x2"),)
        assert verify_eq3(transformed)

    def test_corrupted_alpha(self, mixed):
        algebra, candidates = mixed
        transformed = build_phi(LinearMap.identity(Q, 2), algebra, candidates)
        assert not verify_eq3(transformed)

    def test_normalized_system_swaps_blocks(self, mixed):
        algebra, candidates = mixed
        alpha = rank_and_invert(Q, linear_parts_matrix(algebra, candidates)[0]).alpha
        transformed = build_phi(alpha, algebra, candidates)
        assert transformed.relabeling() == {1: 2, 2: 1}
        system = transformed.normalized_system()
        assert system.normalized
        assert system.relations == (poly("x1 - x2*x2 + x2*x1 + x1*x2 - x1*x1"),)
        assert transformed.relabeled_names(["y1", "y2"]) == ["y2", "y1"]


class TestGenerationWitness:
    """Test exact witness verification."""

    def test_valid(self, worked):
        algebra, candidates = worked
        assert verify_generation_witness(worked_witness(algebra), algebra, candidates)

    def test_wrong_phi(self, worked):
        algebra, candidates = worked
        assert not verify_generation_witness(worked_witness(algebra, "z1"), algebra, candidates)

    def test_empty_witness(self, worked):
        algebra, candidates = worked
        assert not verify_generation_witness(GenerationWitness(), algebra, candidates)
        free = AlgebraPresentation(Q, 2)
        assert verify_generation_witness(GenerationWitness(), free, CandidateSystem((poly("x1"), poly("x2"))))

    def test_arity_mismatch(self, worked):
        algebra, candidates = worked
        with pytest.raises(ArityMismatchError):
            witness = GenerationWitness({2: WitnessEntry(slot("z1*z2", 2), Presentation(algebra.relation_system()))})
            verify_generation_witness(witness, algebra, candidates)

    def test_constructed_witnesses(self):
        rng = random.Random(17)
        for _ in range(40):
            n, k = rng.randint(1, 3), rng.randint(1, 2)
            nvars = n + k
            entries = {}
            relations = []
            for j in range(1, k + 1):
                w = NcPoly.zero(Q, n)
                while w.is_zero():
                    w = random_poly(rng, Q, n, max_degree=3, min_degree=2)
                relations.append(NcPoly.variable(Q, nvars, n + j) - NcPoly.from_terms(Q, nvars, w.terms))
                entries[n + j] = w
            algebra = AlgebraPresentation(Q, nvars, tuple(relations))
            system = algebra.relation_system()
            witness = GenerationWitness(
                {i: WitnessEntry(w, Presentation(system, (bare_term(system, i - n),))) for i, w in entries.items()}
            )
            candidates = CandidateSystem(tuple(NcPoly.variable(Q, nvars, i) for i in range(1, n + 1)))
            assert verify_generation_witness(witness, algebra, candidates)


class TestCertifyFreeness:
    """Test the end-to-end verdicts."""

    def test_full_freeness_with_witness(self, worked):
        algebra, candidates = worked
        certificate = certify_freeness(algebra, candidates, witness=worked_witness(algebra))
        assert certificate.verdict == Verdict.FULL_FREENESS_CERTIFIED
        assert certificate.free_rank == 1
        assert certificate.rank == 2
        assert certificate.eq3 is True
        assert "generation witnessed" in certificate.assumptions

    def test_free_subalgebra_only(self, mixed):
        certificate = certify_freeness(*mixed)
        assert certificate.verdict == Verdict.FREE_SUBALGEBRA_CERTIFIED
        assert "generation not established" in certificate.assumptions

    def test_assume_generation(self, mixed):
        certificate = certify_freeness(*mixed, assume_generation=True)
        assert certificate.verdict == Verdict.FULL_FREENESS_CERTIFIED
        assert "generation assumed" in certificate.assumptions

    def test_rejected(self, commutator):
        certificate = certify_freeness(*commutator)
        assert certificate.verdict == Verdict.REJECTED
        assert certificate.reason == "rank 1 < 2"
        assert certificate.alpha is None
        assert not certificate.certified

    def test_failed_witness_is_inconclusive(self, worked):
        algebra, candidates = worked
        certificate = certify_freeness(algebra, candidates, witness=worked_witness(algebra, "z1"))
        assert certificate.verdict == Verdict.INCONCLUSIVE
        assert certificate.reason

    def test_bounded_search(self, worked, mixed):
        certificate = certify_freeness(*worked, search_degree=2)
        assert certificate.verdict == Verdict.FULL_FREENESS_CERTIFIED
        assert certificate.witness is not None
        assert certify_freeness(*mixed, search_degree=4).verdict == Verdict.FREE_SUBALGEBRA_CERTIFIED

    def test_count_mismatch(self):
        algebra = AlgebraPresentation(Q, 3, (poly("x2 - x1*x1", ["x1", "x2", "x3"]),))
        with pytest.raises(ArityMismatchError, match="n \\+ k = 2 ≠ 3"):
            certify_freeness(algebra, CandidateSystem((poly("x1", ["x1", "x2", "x3"]),)))

    def test_alpha_is_exact_inverse(self, mixed):
        certificate = certify_freeness(*mixed)
        assert matmul(Q, certificate.beta, certificate.alpha.matrix) == identity_matrix(Q, 2)


def _random_eq3_instance(rng, field):
    n, k = rng.randint(1, 3), rng.randint(1, 2)
    nvars = n + k
    beta = random_invertible(rng, field, nvars)
    polys = []
    for row in beta.matrix:
        linear = NcPoly.from_terms(field, nvars, [((r + 1,), v) for r, v in enumerate(row)])
        polys.append(linear + random_poly(rng, field, nvars, max_degree=3, min_degree=2))
    return AlgebraPresentation(field, nvars, tuple(polys[n:])), CandidateSystem(tuple(polys[:n]))


def _mixed_generators(rng, candidates):
    """T·G for a random invertible n x n matrix T."""
    field = candidates.generators[0].field
    transform = random_invertible(rng, field, candidates.n)
    mixed = []
    for row in transform.matrix:
        total = NcPoly.zero(field, candidates.generators[0].nvars)
        for coeff, g in zip(row, candidates.generators):
            total = total + coeff * g
        mixed.append(total)
    return CandidateSystem(tuple(mixed))


class TestCertifierProperties:
    """Randomized linear-part, invariance and soundness checks."""

    def _eq3_trials(self, count, field):
        rng = random.Random(99)
        for _ in range(count):
            algebra, candidates = _random_eq3_instance(rng, field)
            beta, _ = linear_parts_matrix(algebra, candidates)
            inversion = rank_and_invert(field, beta)
            assert not inversion.rejected
            assert matmul(field, beta, inversion.alpha.matrix) == identity_matrix(field, algebra.nvars)
            assert verify_eq3(build_phi(inversion.alpha, algebra, candidates))

    @pytest.mark.parametrize("field", [RationalField(), PrimeField(7)], ids=["Q", "GF7"])
    def test_eq3(self, field):
        self._eq3_trials(60, field)

    @pytest.mark.acceptance
    def test_eq3_full(self):
        self._eq3_trials(500, Q)

    def _invariance_trials(self, count, seed):
        rng = random.Random(seed)
        seen = set()
        for _ in range(count):
            n, k = rng.randint(1, 2), rng.randint(1, 2)
            nvars = n + k
            relations = tuple(
                random_poly(rng, Q, nvars, max_degree=2) or NcPoly.variable(Q, nvars, 1) for _ in range(k)
            )
            generators = tuple(
                random_poly(rng, Q, nvars, max_degree=2) or NcPoly.variable(Q, nvars, 1) for _ in range(n)
            )
            algebra, candidates = AlgebraPresentation(Q, nvars, relations), CandidateSystem(generators)
            try:
                mixed = _mixed_generators(rng, candidates)
            except ZeroPolynomialError:
                continue
            before = certify_freeness(algebra, candidates)
            after = certify_freeness(algebra, mixed)
            assert before.verdict == after.verdict
            assert before.rank == after.rank
            seen.add(before.verdict)
        assert seen == {Verdict.REJECTED, Verdict.FREE_SUBALGEBRA_CERTIFIED}

    def test_linear_transformation_invariance(self):
        self._invariance_trials(60, seed=5)

    @pytest.mark.acceptance
    def test_linear_transformation_invariance_full(self):
        self._invariance_trials(200, seed=50)

    def test_certified_instances_have_no_dependency(self):
        rng = random.Random(8)
        for _ in range(8):
            n, k = rng.randint(1, 2), 1
            mix = random_invertible(rng, Q, n + k) if rng.random() < 0.5 else None
            algebra, candidates = magnus_instance(rng, Q, n, k, mix)
            assert certify_freeness(algebra, candidates).certified
            for degree in range(1, 4):
                assert dependency_search_bounded(algebra, candidates, degree) is None

