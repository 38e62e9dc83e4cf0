# Problem instances: A = k<X>/id(h_1..h_k), candidate generators and witnesses
import logging
from dataclasses import dataclass, field as dataclass_field
from typing import Optional

from .algebra import Field, NcPoly, substitute
from .errors import ArityMismatchError, FieldMismatchError, ZeroPolynomialError
from .presentation import Presentation, RelationSystem, evaluate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlgebraPresentation:
    """The algebra k<x_1..x_N>/id(h_1..h_k) without unity."""

    field: Field
    nvars: int
    relations: tuple[NcPoly, ...] = ()

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("an algebra needs at least one generator")
        for index, relation in enumerate(self.relations, start=1):
            if relation.field != self.field or relation.nvars != self.nvars:
                raise FieldMismatchError(f"relation {index} is not over {self.field}<{self.nvars}>")
            if relation.is_zero():
                raise ZeroPolynomialError(f"relation {index} is zero")

    @property
    def k(self) -> int:
        return len(self.relations)

    def relation_system(self) -> RelationSystem:
        return RelationSystem(self.field, self.nvars, self.relations)


@dataclass(frozen=True)
class CandidateSystem:
    """Candidate generators g_1..g_n."""

    generators: tuple[NcPoly, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a candidate system needs at least one generator")
        for index, g in enumerate(self.generators, start=1):
            if g.is_zero():
                raise ZeroPolynomialError(f"candidate {index} is zero")
            if g.field != self.generators[0].field or g.nvars != self.generators[0].nvars:
                raise FieldMismatchError(f"candidate {index} is over a different field or alphabet")

    @property
    def n(self) -> int:
        return len(self.generators)

    def check_against(self, algebra: AlgebraPresentation) -> None:
        for index, g in enumerate(self.generators, start=1):
            if g.field != algebra.field or g.nvars != algebra.nvars:
                raise FieldMismatchError(f"candidate {index} is not over {algebra.field}<{algebra.nvars}>")


@dataclass(frozen=True)
class WitnessEntry:
    """x_i = Φ_i(g_1..g_n) + d_i with d_i given by a presentation."""

    phi: NcPoly
    ideal_part: Presentation


@dataclass(frozen=True)
class GenerationWitness:
    """Witness entries keyed by variable index (1-based)."""

    entries: dict[int, WitnessEntry] = dataclass_field(default_factory=dict)


def resolve_entry(
    index: int,
    witness: GenerationWitness,
    algebra: AlgebraPresentation,
    candidates: CandidateSystem,
) -> Optional[WitnessEntry]:
    """The entry for x_index; a missing entry defaults to Φ = z_r when x_index is g_r."""
    entry = witness.entries.get(index)
    if entry is not None:
        return entry

    x = NcPoly.variable(algebra.field, algebra.nvars, index)
    for r, g in enumerate(candidates.generators, start=1):
        if g == x:
            return WitnessEntry(
                phi=NcPoly.variable(algebra.field, candidates.n, r),
                ideal_part=Presentation(algebra.relation_system()),
            )
    return None


def verify_generation_witness(
    witness: GenerationWitness,
    algebra: AlgebraPresentation,
    candidates: CandidateSystem,
) -> bool:
    """Check x_i = Φ_i(g) + d_i exactly for every variable."""
    candidates.check_against(algebra)
    system = algebra.relation_system()

    for index in range(1, algebra.nvars + 1):
        entry = resolve_entry(index, witness, algebra, candidates)
        if entry is None:
            logger.info(f"No witness entry for x{index}")
            return False
        if entry.phi.nvars != candidates.n:
            raise ArityMismatchError(f"Φ_{index} has {entry.phi.nvars} slots for {candidates.n} candidates")
        if entry.ideal_part.system != system:
            raise FieldMismatchError(f"d_{index} is presented over a different relation system")

        value = substitute(entry.phi, candidates.generators) + evaluate(entry.ideal_part)
        if value != NcPoly.variable(algebra.field, algebra.nvars, index):
            logger.info(f"Witness entry for x{index} does not reproduce x{index}")
            return False

    return True
