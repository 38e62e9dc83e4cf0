# Presentations of ideal elements and the parameter-raising rewrite
import logging
from dataclasses import dataclass, field as dataclass_field
from functools import cached_property
from typing import Optional

from .algebra import (
    EMPTY,
    Field,
    NcPoly,
    Scalar,
    Word,
    contains_variable_at_most,
    count_words_up_to,
    deglex_key,
    linear_part,
    min_monomial,
)
from .errors import (
    FieldMismatchError,
    InternalConsistencyError,
    PresentationError,
    ResourceLimitError,
    ZeroPolynomialError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ResourceLimits:
    """Caps for the improvement loop; exceeding one is an error."""

    term_cap: int = 100_000
    step_cap: Optional[int] = None  # None = number of words up to deg m(s)


@dataclass(frozen=True)
class RelationSystem:
    """Relations f_1..f_k over an alphabet of nvars variables."""

    field: Field
    nvars: int
    relations: tuple[NcPoly, ...]

    def __post_init__(self):
        for index, relation in enumerate(self.relations, start=1):
            if relation.field != self.field or relation.nvars != self.nvars:
                raise FieldMismatchError(f"relation {index} is not over {self.field}<{self.nvars}>")
            if relation.is_zero():
                raise ZeroPolynomialError(f"relation {index} is zero")

    @property
    def k(self) -> int:
        return len(self.relations)

    @cached_property
    def normalized(self) -> bool:
        """True when linear_part(f_i) is exactly x_i for every i <= k."""
        if self.k > self.nvars:
            return False
        return all(
            linear_part(f) == NcPoly.variable(self.field, self.nvars, i)
            for i, f in enumerate(self.relations, start=1)
        )

    def relation(self, index: int) -> NcPoly:
        """The relation f_index (1-based)."""
        if not 1 <= index <= self.k:
            raise PresentationError(f"relation index {index} outside 1..{self.k}")
        return self.relations[index - 1]


@dataclass(frozen=True)
class PresentationTerm:
    """One summand c·p·f_i·q; empty p or q are absent factors."""

    coefficient: Scalar
    left: Word
    rel_index: int
    right: Word

    @property
    def key(self) -> tuple[Word, int, Word]:
        return (self.left, self.rel_index, self.right)

    def marked_word(self) -> Word:
        """p·x_i·q, the word carrying the marked occurrence of x_i."""
        return self.left + (self.rel_index,) + self.right


def _term_order(key: tuple[Word, int, Word]):
    left, index, right = key
    return (deglex_key(left), index, deglex_key(right))


@dataclass(frozen=True)
class Presentation:
    """s = Σ c·p·f_i·q over a relation system.

    Terms with equal (p, i, q) are merged, zero coefficients dropped and the
    remaining terms sorted, so equal presentations compare equal.
    """

    system: RelationSystem
    terms: tuple[PresentationTerm, ...] = dataclass_field(default=())

    def __post_init__(self):
        system = self.system
        merged: dict[tuple[Word, int, Word], Scalar] = {}
        for term in self.terms:
            if not system.field.owns(term.coefficient):
                raise FieldMismatchError(f"coefficient {term.coefficient!r} is not in {system.field}")
            if not 1 <= term.rel_index <= system.k:
                raise PresentationError(f"relation index {term.rel_index} outside 1..{system.k}")
            for index in term.left + term.right:
                if not 1 <= index <= system.nvars:
                    raise PresentationError(f"variable index {index} outside 1..{system.nvars}")
            merged[term.key] = merged.get(term.key, system.field.zero) + term.coefficient

        canonical = tuple(
            PresentationTerm(coeff, *key)
            for key, coeff in sorted(merged.items(), key=lambda item: _term_order(item[0]))
            if not system.field.is_zero(coeff)
        )
        object.__setattr__(self, "terms", canonical)

    def __len__(self) -> int:
        return len(self.terms)

    def is_empty(self) -> bool:
        return not self.terms


@dataclass(frozen=True)
class Achiever:
    """A term whose marked word equals τ, and where x_i sits in τ (1-based)."""

    term_index: int
    position: int


def evaluate(presentation: Presentation) -> NcPoly:
    """The polynomial Σ c·p·f_i·q represented by the presentation."""
    system = presentation.system
    return NcPoly.from_terms(
        system.field,
        system.nvars,
        (
            (term.left + word + term.right, term.coefficient * coeff)
            for term in presentation.terms
            for word, coeff in system.relation(term.rel_index).terms
        ),
    )


def parameter_tau(presentation: Presentation) -> Word:
    """
    The parameter τ: least word p·u·q over all terms and all monomials u of f_i.

    Deg-lex is compatible with concatenation, so each term contributes
    p·m(f_i)·q.
    """
    if presentation.is_empty():
        raise PresentationError("parameter undefined for an empty presentation")
    system = presentation.system
    return min(
        (t.left + min_monomial(system.relation(t.rel_index)) + t.right for t in presentation.terms),
        key=deglex_key,
    )


def _require_normalized(presentation: Presentation) -> None:
    if not presentation.system.normalized:
        raise PresentationError("relation system is not normalized (need linear_part(f_i) = x_i)")


def tau_achievers(presentation: Presentation) -> list[Achiever]:
    """Terms with p·x_i·q = τ, ordered by marked position."""
    _require_normalized(presentation)
    tau = parameter_tau(presentation)
    achievers = [
        Achiever(term_index=i, position=len(t.left) + 1)
        for i, t in enumerate(presentation.terms)
        if t.marked_word() == tau
    ]
    achievers.sort(key=lambda a: (a.position, presentation.terms[a.term_index].rel_index, a.term_index))
    return achievers


def _difference_terms(
    system: RelationSystem,
    tau: Word,
    scale: Scalar,
    first: int,
    second: int,
) -> list[PresentationTerm]:
    """
    Terms of scale·(t_first - t_second) for achievers marking positions first < second.

    With τ = a·x_i·b·x_j·c the identity
        a f_i b x_j c - a x_i b f_j c = a (f_i - x_i) b f_j c - a f_i b (f_j - x_j) c
    rewrites the difference through the tails f - x, whose words all have
    degree at least two.
    """
    a = tau[: first - 1]
    i = tau[first - 1]
    b = tau[first : second - 1]
    j = tau[second - 1]
    c = tau[second:]

    terms = []
    for word, coeff in system.relation(i).terms:
        if len(word) > 1:
            terms.append(PresentationTerm(scale * coeff, a + word + b, j, c))
    for word, coeff in system.relation(j).terms:
        if len(word) > 1:
            terms.append(PresentationTerm(-(scale * coeff), a, i, b + word + c))
    return terms


def improve_once(presentation: Presentation, limits: Optional[ResourceLimits] = None) -> Presentation:
    """
    One rewrite step: a presentation of the same s with a strictly larger τ.

    Requires a normalized system, s != 0 and τ < m(s).
    """
    limits = limits or ResourceLimits()
    _require_normalized(presentation)
    system = presentation.system

    s = evaluate(presentation)
    if s.is_zero():
        raise PresentationError("presentation evaluates to 0")
    tau = parameter_tau(presentation)
    m = min_monomial(s)
    if deglex_key(tau) >= deglex_key(m):
        raise PresentationError("parameter already equals m(s)")

    achievers = tau_achievers(presentation)
    coeffs = [presentation.terms[a.term_index].coefficient for a in achievers]
    total = system.field.zero
    for coeff in coeffs:
        total = total + coeff
    if not system.field.is_zero(total):
        raise InternalConsistencyError(f"achiever coefficients of τ={tau} do not cancel")

    achieving = {a.term_index for a in achievers}
    terms = [t for i, t in enumerate(presentation.terms) if i not in achieving]

    # Σ c_j t_j = Σ_{j<r} (c_1+...+c_j)(t_j - t_{j+1}) because the c_j sum to zero
    partial = system.field.zero
    for current, following in zip(achievers, achievers[1:]):
        partial = partial + presentation.terms[current.term_index].coefficient
        if system.field.is_zero(partial):
            continue
        terms.extend(_difference_terms(system, tau, partial, current.position, following.position))

    improved = Presentation(system, tuple(terms))
    if len(improved) > limits.term_cap:
        raise ResourceLimitError(f"presentation grew to {len(improved)} terms (cap {limits.term_cap})")

    logger.debug(f"τ raised past {tau}: {len(presentation)} -> {len(improved)} terms")
    return improved


def certify_min_monomial(
    presentation: Presentation,
    limits: Optional[ResourceLimits] = None,
    trace: Optional[list[Word]] = None,
) -> tuple[Presentation, Word]:
    """
    Improve until τ = m(s).

    Args:
        presentation: a presentation over a normalized system with s != 0
        limits: term and step caps
        trace: if given, receives every τ visited, in order

    Returns:
        (final presentation, m(s)); m(s) contains a variable of index <= k
    """
    limits = limits or ResourceLimits()
    _require_normalized(presentation)
    system = presentation.system

    s = evaluate(presentation)
    if s.is_zero():
        raise PresentationError("presentation evaluates to 0")
    m = min_monomial(s)
    step_cap = limits.step_cap
    if step_cap is None:
        step_cap = count_words_up_to(system.nvars, len(m))

    current = presentation
    steps = 0
    while True:
        tau = parameter_tau(current)
        if trace is not None:
            trace.append(tau)
        if tau == m:
            break
        if steps >= step_cap:
            raise ResourceLimitError(f"no presentation with τ = m(s) within {step_cap} steps")
        current = improve_once(current, limits)
        steps += 1

    if not contains_variable_at_most(m, system.k):
        raise InternalConsistencyError(f"m(s) = {m} avoids x_1..x_{system.k}")

    logger.info(f"m(s) = {m} certified after {steps} step(s), {len(current)} term(s)")
    return current, m


def bare_term(system: RelationSystem, index: int, coefficient: Optional[Scalar] = None) -> PresentationTerm:
    """The term c·f_index with both cofactors empty."""
    return PresentationTerm(
        system.field.one if coefficient is None else coefficient, EMPTY, index, EMPTY
    )
