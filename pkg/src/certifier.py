# Freeness certification: linear parts, change of variables, verdict
import logging
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import Optional, Sequence

from .algebra import Field, LinearMap, NcPoly, apply_linear_map, linear_part
from .algebra.linalg import Matrix, invert_matrix
from .algebra.words import permute_word
from .errors import ArityMismatchError, InternalConsistencyError
from .instance import AlgebraPresentation, CandidateSystem, GenerationWitness, verify_generation_witness
from .oracle import DEFAULT_COORDINATE_CAP, generation_search_bounded
from .presentation import RelationSystem

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    FREE_SUBALGEBRA_CERTIFIED = "FREE_SUBALGEBRA_CERTIFIED"
    FULL_FREENESS_CERTIFIED = "FULL_FREENESS_CERTIFIED"
    REJECTED = "REJECTED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class InversionResult:
    """Outcome of the rank check: α = β⁻¹, or a rejection with the rank found."""

    rank: int
    size: int
    alpha: Optional[LinearMap] = None

    @property
    def rejected(self) -> bool:
        return self.alpha is None


@dataclass(frozen=True)
class TransformedInstance:
    """φg_1..φg_n and φh_1..φh_k over the y-alphabet."""

    alpha: LinearMap
    candidates: tuple[NcPoly, ...]
    relations: tuple[NcPoly, ...]

    @property
    def n(self) -> int:
        return len(self.candidates)

    @property
    def k(self) -> int:
        return len(self.relations)

    @property
    def nvars(self) -> int:
        return self.alpha.dimension

    def relabeling(self) -> dict[int, int]:
        """Swap the blocks {1..n} and {n+1..n+k} so relation j gets linear part x_j."""
        n, k = self.n, self.k
        return {r: (r - n if r > n else r + k) for r in range(1, self.nvars + 1)}

    def normalized_system(self) -> RelationSystem:
        relabel = self.relabeling()
        field = self.alpha.field
        relations = tuple(
            NcPoly.from_terms(field, self.nvars, ((permute_word(w, relabel), c) for w, c in h.terms))
            for h in self.relations
        )
        return RelationSystem(field, self.nvars, relations)

    def relabeled_names(self, names: Sequence[str]) -> list[str]:
        """Variable names listed in the order of the normalized system."""
        result = [""] * self.nvars
        for old, new in self.relabeling().items():
            result[new - 1] = names[old - 1]
        return result


@dataclass
class Certificate:
    """Verdict of the freeness pipeline plus everything needed to replay it."""

    verdict: Verdict
    rank: int
    beta: Matrix
    alpha: Optional[LinearMap] = None
    transformed: Optional[TransformedInstance] = None
    eq3: Optional[bool] = None
    assumptions: list[str] = dataclass_field(default_factory=list)
    reason: str = ""
    witness: Optional[GenerationWitness] = None
    free_rank: Optional[int] = None  # n, once the candidates are certified independent

    @property
    def certified(self) -> bool:
        return self.verdict in (Verdict.FREE_SUBALGEBRA_CERTIFIED, Verdict.FULL_FREENESS_CERTIFIED)

    @property
    def phi_candidates(self) -> tuple[NcPoly, ...]:
        return self.transformed.candidates if self.transformed else ()

    @property
    def phi_relations(self) -> tuple[NcPoly, ...]:
        return self.transformed.relations if self.transformed else ()


def linear_parts_matrix(
    algebra: AlgebraPresentation, candidates: CandidateSystem
) -> tuple[Matrix, list[NcPoly]]:
    """
    Linear parts y_j of g_1..g_n, h_1..h_k and their coordinate rows β.

    Zero rows are allowed here; the rank check comes next.
    """
    candidates.check_against(algebra)
    ys = [linear_part(p) for p in candidates.generators + algebra.relations]
    beta = tuple(
        tuple(y.coefficient((col,)) for col in range(1, algebra.nvars + 1)) for y in ys
    )
    return beta, ys


def rank_and_invert(field: Field, beta: Matrix) -> InversionResult:
    """Exact Gaussian elimination; α = β⁻¹ when β has full rank."""
    rank, inverse = invert_matrix(field, beta)
    if inverse is None:
        logger.info(f"Rank check failed: rank {rank} < {len(beta)}")
        return InversionResult(rank=rank, size=len(beta))
    return InversionResult(rank=rank, size=len(beta), alpha=LinearMap(field, inverse, beta))


def build_phi(
    alpha: LinearMap, algebra: AlgebraPresentation, candidates: CandidateSystem
) -> TransformedInstance:
    """Apply φ(x_i) = Σ_r α[i][r]·y_r to every candidate and relation."""
    return TransformedInstance(
        alpha=alpha,
        candidates=tuple(apply_linear_map(alpha, g) for g in candidates.generators),
        relations=tuple(apply_linear_map(alpha, h) for h in algebra.relations),
    )


def verify_eq3(instance: TransformedInstance) -> bool:
    """Check L(φg_j) = y_j for j = 1..n+k."""
    field = instance.alpha.field
    transformed = instance.candidates + instance.relations
    return all(
        linear_part(p) == NcPoly.variable(field, instance.nvars, j)
        for j, p in enumerate(transformed, start=1)
    )


def certify_freeness(
    algebra: AlgebraPresentation,
    candidates: CandidateSystem,
    witness: Optional[GenerationWitness] = None,
    assume_generation: bool = False,
    search_degree: int = 0,
    coordinate_cap: int = DEFAULT_COORDINATE_CAP,
) -> Certificate:
    """
    Run the rank check, the change of variables and the linear-part check, then grade generation.

    The g_i are certified algebraically independent in A whenever the rank
    check passes; full freeness of A additionally needs generation, which is
    taken from a verified witness, a bounded search, or an explicit assumption.
    """
    n, k, nvars = candidates.n, algebra.k, algebra.nvars
    if n + k != nvars:
        raise ArityMismatchError(f"n + k = {n + k} ≠ {nvars} variables")

    beta, _ = linear_parts_matrix(algebra, candidates)
    inversion = rank_and_invert(algebra.field, beta)
    if inversion.rejected:
        return Certificate(
            verdict=Verdict.REJECTED,
            rank=inversion.rank,
            beta=beta,
            reason=f"rank {inversion.rank} < {nvars}",
        )

    transformed = build_phi(inversion.alpha, algebra, candidates)
    if not verify_eq3(transformed):
        raise InternalConsistencyError("L(φg_j) ≠ y_j after a passing rank check")
    logger.info(f"Rank {nvars} and L(φg_j) = y_j verified; candidates are algebraically independent")

    certificate = Certificate(
        verdict=Verdict.FREE_SUBALGEBRA_CERTIFIED,
        rank=inversion.rank,
        beta=beta,
        alpha=inversion.alpha,
        transformed=transformed,
        eq3=True,
        free_rank=n,
        assumptions=["linear parts independent: g_1..g_n generate a free subalgebra of rank n"],
    )

    if witness is not None:
        if verify_generation_witness(witness, algebra, candidates):
            certificate.verdict = Verdict.FULL_FREENESS_CERTIFIED
            certificate.witness = witness
            certificate.assumptions.append("generation witnessed")
        else:
            certificate.verdict = Verdict.INCONCLUSIVE
            certificate.reason = "supplied generation witness failed verification"
            certificate.assumptions.append("generation not established")
    elif assume_generation:
        certificate.verdict = Verdict.FULL_FREENESS_CERTIFIED
        certificate.assumptions.append("generation assumed")
    elif search_degree > 0:
        found = generation_search_bounded(algebra, candidates, search_degree, coordinate_cap)
        if found is not None:
            certificate.verdict = Verdict.FULL_FREENESS_CERTIFIED
            certificate.witness = found
            certificate.assumptions.append(f"generation witnessed (bounded search, degree {search_degree})")
        else:
            certificate.assumptions.append(f"no generation witness up to degree {search_degree}")
    else:
        certificate.assumptions.append("generation not established")

    logger.info(f"Verdict: {certificate.verdict.value}")
    return certificate
