# Bounded-degree verification in the truncated algebra
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .algebra import (
    Field,
    LinearMap,
    NcPoly,
    Scalar,
    Word,
    apply_linear_map,
    count_words_up_to,
    enumerate_words,
    linear_part,
    poly_mul,
    substitute,
    truncate,
    words_up_to,
)
from .algebra.linalg import SparseVector, TrackedEchelon, identity_matrix, invert_matrix
from .errors import InternalConsistencyError, ResourceLimitError
from .instance import (
    AlgebraPresentation,
    CandidateSystem,
    GenerationWitness,
    WitnessEntry,
    verify_generation_witness,
)
from .presentation import Presentation, PresentationTerm, RelationSystem, evaluate

logger = logging.getLogger(__name__)

DEFAULT_COORDINATE_CAP = 200_000


def check_coordinate_cap(nvars: int, max_degree: int, cap: int, what: str = "ambient space") -> int:
    """Raise ResourceLimitError when Σ_{d<=D} N^d exceeds the cap; returns the count."""
    count = count_words_up_to(nvars, max_degree)
    if count > cap:
        raise ResourceLimitError(
            f"{what} has {count} coordinates for N={nvars}, D={max_degree} (cap {cap})"
        )
    return count


def normalizing_change(
    algebra: AlgebraPresentation, candidates: Optional[CandidateSystem]
) -> Optional[LinearMap]:
    """
    The change of variables that turns the linear parts of g_1..g_n, h_1..h_k into y_1..y_{n+k}.

    None when there is no such change (wrong count, dependent linear parts)
    or when it is the identity. Oracle answers are the same in either set of
    coordinates, but the ideal span is far sparser in the normalized one.
    """
    if candidates is None or candidates.n + algebra.k != algebra.nvars:
        return None
    field = algebra.field
    rows = tuple(
        tuple(linear_part(p).coefficient((col,)) for col in range(1, algebra.nvars + 1))
        for p in candidates.generators + algebra.relations
    )
    _, inverse = invert_matrix(field, rows)
    if inverse is None or inverse == identity_matrix(field, algebra.nvars):
        return None
    return LinearMap(field, inverse, rows)


class TruncatedSpace:
    """The words of degree 1..D as coordinates, plus the truncated ideal span.

    Every ideal row is labelled by the term 1·p·h_j·q it came from, so any
    vector reduced to zero can be turned back into an explicit presentation.
    With a change of variables the rows live in the changed coordinates;
    polynomials are mapped in by to_vector and presentations are mapped back
    to the original relations.
    """

    def __init__(
        self,
        system: RelationSystem,
        max_degree: int,
        words: Sequence[Word],
        change: Optional[LinearMap] = None,
    ):
        self.system = system
        self.max_degree = max_degree
        self.words = list(words)
        self.index = {word: i for i, word in enumerate(self.words)}
        self.echelon = TrackedEchelon(system.field)
        self.change = change
        self._restore = change.inverse_map() if change is not None else None
        self._restored_words: dict[Word, tuple[tuple[Word, Scalar], ...]] = {}

    @property
    def field(self) -> Field:
        return self.system.field

    @property
    def nvars(self) -> int:
        return self.system.nvars

    @property
    def dimension(self) -> int:
        return len(self.words)

    @property
    def ideal_dimension(self) -> int:
        return self.echelon.rank

    def localize(self, p: NcPoly) -> NcPoly:
        """trunc_D(p) in the space's coordinates."""
        p = truncate(p, self.max_degree)
        return apply_linear_map(self.change, p) if self.change is not None else p

    def restore(self, p: NcPoly) -> NcPoly:
        """Inverse of localize on polynomials of degree <= D."""
        return apply_linear_map(self._restore, p) if self._restore is not None else p

    def local_vector(self, p: NcPoly) -> SparseVector:
        """Coordinates of a polynomial already in the space's coordinates."""
        return {self.index[w]: c for w, c in p.terms if len(w) <= self.max_degree}

    def to_vector(self, p: NcPoly) -> SparseVector:
        return self.local_vector(self.localize(p))

    def from_vector(self, vector: SparseVector) -> NcPoly:
        """Polynomial in the space's coordinates."""
        return NcPoly.from_terms(self.field, self.nvars, ((self.words[i], c) for i, c in vector.items()))

    def contains(self, p: NcPoly) -> bool:
        """Membership of trunc_D(p) in the truncated ideal span."""
        remainder, _ = self.echelon.reduce(self.to_vector(p))
        return not remainder

    def reduced_basis(self) -> list[NcPoly]:
        """The ideal subspace in reduced row-echelon form, by increasing pivot.

        Rows are in reduced form in the space's coordinates and are returned
        in the original ones.
        """
        return [self.restore(self.from_vector(row)) for row in self.echelon.reduced_rows()]

    def _restored(self, word: Word) -> tuple[tuple[Word, Scalar], ...]:
        if self._restore is None or not word:
            return ((word, self.field.one),)
        cached = self._restored_words.get(word)
        if cached is None:
            monomial = NcPoly.monomial(self.field, self.nvars, word)
            cached = apply_linear_map(self._restore, monomial).terms
            self._restored_words[word] = cached
        return cached

    def presentation_of(self, combination: SparseVector) -> Presentation:
        """Presentation Σ c·p·h_j·q for a combination of echelon rows."""
        labels = self.echelon.expand(combination)
        terms = [
            PresentationTerm(c * lc * rc, left, t.rel_index, right)
            for t, c in labels.items()
            for left, lc in self._restored(t.left)
            for right, rc in self._restored(t.right)
        ]
        return Presentation(self.system, tuple(terms))


def ideal_span_up_to(
    algebra: AlgebraPresentation,
    max_degree: int,
    coordinate_cap: int = DEFAULT_COORDINATE_CAP,
    change: Optional[LinearMap] = None,
) -> TruncatedSpace:
    """Row-reduce the truncations of every p·h_j·q with |p| + mindeg(h_j) + |q| <= D.

    With change set, the rows are built from the changed relations; see
    normalizing_change.
    """
    if max_degree < 1:
        raise ValueError("degree bound must be at least 1")
    check_coordinate_cap(algebra.nvars, max_degree, coordinate_cap)

    system = algebra.relation_system()
    space = TruncatedSpace(system, max_degree, words_up_to(algebra.nvars, max_degree), change)
    one = algebra.field.one
    relations = [apply_linear_map(change, h) if change is not None else h for h in algebra.relations]

    for j, h in enumerate(relations, start=1):
        slack = max_degree - h.min_degree
        for outer in range(slack + 1):
            for left_len in range(outer + 1):
                for p in enumerate_words(algebra.nvars, left_len):
                    for q in enumerate_words(algebra.nvars, outer - left_len):
                        vector = {
                            space.index[p + w + q]: c
                            for w, c in h.terms
                            if left_len + len(w) + len(q) <= max_degree
                        }
                        space.echelon.insert(vector, PresentationTerm(one, p, j, q))

    logger.info(
        f"Truncated ideal at D={max_degree}: dimension {space.ideal_dimension} of {space.dimension}"
        + (" (normalized coordinates)" if change is not None else "")
    )
    return space


@dataclass(frozen=True)
class Dependency:
    """A nonzero Φ with Φ(g) in the ideal modulo words of degree > D."""

    phi: NcPoly
    max_degree: int
    exact: bool
    presentation: Presentation


def _slot_words(degrees: Sequence[int], max_degree: int) -> Iterator[Word]:
    """Slot words in deg-lex order whose image can reach degree <= D."""
    for length in range(1, max_degree + 1):
        for word in enumerate_words(len(degrees), length):
            if sum(degrees[i - 1] for i in word) <= max_degree:
                yield word


class _SlotImages:
    """Images trunc_D(w(g)) of slot words, reduced modulo the ideal span."""

    def __init__(self, space: TruncatedSpace, candidates: CandidateSystem, coordinate_cap: int):
        self.space = space
        self.generators = [space.localize(g) for g in candidates.generators]
        self.degrees = [g.min_degree for g in candidates.generators]
        self.echelon = TrackedEchelon(space.field)
        self._products: dict[Word, NcPoly] = {}

        reachable = space.max_degree // min(self.degrees)
        check_coordinate_cap(candidates.n, reachable, coordinate_cap, what="slot space")

    def image(self, word: Word) -> NcPoly:
        cached = self._products.get(word)
        if cached is None:
            last = self.generators[word[-1] - 1]
            if len(word) == 1:
                cached = last
            else:
                cached = poly_mul(self.image(word[:-1]), last, self.space.max_degree)
            self._products[word] = cached
        return cached

    def insert_all(self, stop_at_dependency: bool) -> Optional[tuple[Word, dict[Word, Scalar]]]:
        """
        Insert slot words in order.

        Returns:
            the first dependent word with its expression through earlier
            words when stop_at_dependency is set, otherwise None
        """
        for word in _slot_words(self.degrees, self.space.max_degree):
            remainder, _ = self.space.echelon.reduce(self.space.local_vector(self.image(word)))
            independent, used = self.echelon.insert(remainder, word)
            if not independent and stop_at_dependency:
                return word, self.echelon.expand(used)
        return None


def _normalize_leading(phi: NcPoly) -> NcPoly:
    """Scale so the deg-lex least word has coefficient 1."""
    leading = phi.terms[0][1]
    return phi * (phi.field.one / leading)


def dependency_search_bounded(
    algebra: AlgebraPresentation,
    candidates: CandidateSystem,
    max_degree: int,
    coordinate_cap: int = DEFAULT_COORDINATE_CAP,
    space: Optional[TruncatedSpace] = None,
) -> Optional[Dependency]:
    """
    Look for a nonzero Φ of degree <= D with trunc_D(Φ(g)) in the ideal span.

    None means no dependency up to degree D. A found Φ is marked exact only
    when its recovered presentation reproduces Φ(g) without truncation.
    """
    candidates.check_against(algebra)
    space = space or ideal_span_up_to(
        algebra, max_degree, coordinate_cap, change=normalizing_change(algebra, candidates)
    )

    images = _SlotImages(space, candidates, coordinate_cap)
    found = images.insert_all(stop_at_dependency=True)
    if found is None:
        logger.info(f"No dependency up to degree {max_degree}")
        return None

    word, expression = found
    field = algebra.field
    phi = NcPoly.from_terms(
        field, candidates.n, [(word, field.one)] + [(w, -c) for w, c in expression.items()]
    )
    phi = _normalize_leading(phi)

    value = substitute(phi, candidates.generators)
    remainder, used = space.echelon.reduce(space.to_vector(value))
    if remainder:
        raise InternalConsistencyError("dependency image left the truncated ideal span")
    presentation = space.presentation_of(used)
    exact = evaluate(presentation) == value
    if not exact:
        logger.warning(f"Dependency found at degree {max_degree} holds only modulo degree > {max_degree}")

    logger.info(f"Dependency of degree {phi.degree} found (exact={exact})")
    return Dependency(phi=phi, max_degree=max_degree, exact=exact, presentation=presentation)


def generation_search_bounded(
    algebra: AlgebraPresentation,
    candidates: CandidateSystem,
    max_degree: int,
    coordinate_cap: int = DEFAULT_COORDINATE_CAP,
    space: Optional[TruncatedSpace] = None,
) -> Optional[GenerationWitness]:
    """
    Solve x_i ≡ Φ_i(g) modulo the truncated ideal for every i.

    The assembled witness is returned only after exact verification; a
    truncated solution that does not lift gives None.
    """
    candidates.check_against(algebra)
    space = space or ideal_span_up_to(
        algebra, max_degree, coordinate_cap, change=normalizing_change(algebra, candidates)
    )
    field = algebra.field

    images = _SlotImages(space, candidates, coordinate_cap)
    images.insert_all(stop_at_dependency=False)

    entries: dict[int, WitnessEntry] = {}
    for index in range(1, algebra.nvars + 1):
        x = NcPoly.variable(field, algebra.nvars, index)
        reduced, _ = space.echelon.reduce(space.to_vector(x))
        remainder, used = images.echelon.reduce(reduced)
        if remainder:
            logger.info(f"x{index} is not reachable from the candidates up to degree {max_degree}")
            return None

        phi = NcPoly.from_terms(field, candidates.n, images.echelon.expand(used).items())
        difference = x - substitute(phi, candidates.generators, max_degree)
        rest, ideal_used = space.echelon.reduce(space.to_vector(difference))
        if rest:
            raise InternalConsistencyError(f"x{index} - Φ(g) left the truncated ideal span")
        entries[index] = WitnessEntry(phi=phi, ideal_part=space.presentation_of(ideal_used))

    witness = GenerationWitness(entries)
    if not verify_generation_witness(witness, algebra, candidates):
        logger.warning(f"Truncated generation witness at degree {max_degree} does not lift exactly")
        return None

    logger.info(f"Generation witness found at degree {max_degree}")
    return witness
