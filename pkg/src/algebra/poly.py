# Noncommutative polynomials of the free algebra without unity
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from ..errors import ArityMismatchError, FieldMismatchError, ZeroPolynomialError
from .linalg import Matrix, identity_matrix, invert_matrix, matmul
from .scalars import Field, Scalar
from .words import Word, check_word, deglex_key


@dataclass(frozen=True)
class NcPoly:
    """An element of the non-unital free algebra k<x_1..x_N>.

    Terms are kept in deg-lex order with nonzero coefficients and nonempty
    words, so structural equality is mathematical equality. Use the
    constructors below rather than passing terms directly.
    """

    field: Field
    nvars: int
    terms: tuple[tuple[Word, Scalar], ...] = ()

    def __post_init__(self):
        previous = None
        for word, coeff in self.terms:
            if not word:
                raise ValueError("constant term not allowed")
            check_word(word, self.nvars)
            if not self.field.owns(coeff):
                raise FieldMismatchError(f"coefficient {coeff!r} is not in {self.field}")
            if self.field.is_zero(coeff):
                raise ValueError(f"zero coefficient stored for {word}")
            if previous is not None and deglex_key(previous) >= deglex_key(word):
                raise ValueError("terms are not in strictly increasing deg-lex order")
            previous = word

    # Constructors

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "NcPoly":
        return cls(field, nvars)

    @classmethod
    def from_terms(cls, field: Field, nvars: int, items: Iterable[tuple[Word, Scalar]]) -> "NcPoly":
        """Sum (word, coefficient) pairs into a canonical polynomial."""
        acc: dict[Word, Scalar] = {}
        for word, coeff in items:
            acc[tuple(word)] = acc.get(tuple(word), field.zero) + coeff
        return cls._canonical(field, nvars, acc)

    @classmethod
    def monomial(cls, field: Field, nvars: int, word: Word, coeff: Optional[Scalar] = None) -> "NcPoly":
        return cls.from_terms(field, nvars, [(word, field.one if coeff is None else coeff)])

    @classmethod
    def variable(cls, field: Field, nvars: int, index: int) -> "NcPoly":
        return cls.monomial(field, nvars, (index,))

    @classmethod
    def _canonical(cls, field: Field, nvars: int, acc: Mapping[Word, Scalar]) -> "NcPoly":
        items = sorted(
            ((w, c) for w, c in acc.items() if not field.is_zero(c)),
            key=lambda item: deglex_key(item[0]),
        )
        return cls(field, nvars, tuple(items))

    # Inspection

    @cached_property
    def coefficients(self) -> dict[Word, Scalar]:
        return dict(self.terms)

    def coefficient(self, word: Word) -> Scalar:
        return self.coefficients.get(tuple(word), self.field.zero)

    @property
    def support(self) -> list[Word]:
        """Words with a nonzero coefficient, in deg-lex order."""
        return [word for word, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def degree(self) -> int:
        """Largest degree occurring (0 for the zero polynomial)."""
        return len(self.terms[-1][0]) if self.terms else 0

    @property
    def min_degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomialError("minimal degree undefined for 0")
        return len(self.terms[0][0])

    def is_homogeneous(self) -> bool:
        return not self.terms or self.degree == self.min_degree

    # Arithmetic

    def __add__(self, other: "NcPoly") -> "NcPoly":
        if not isinstance(other, NcPoly):
            return NotImplemented
        return poly_add(self, other)

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        if not isinstance(other, NcPoly):
            return NotImplemented
        return poly_add(self, -other)

    def __neg__(self) -> "NcPoly":
        return NcPoly(self.field, self.nvars, tuple((w, -c) for w, c in self.terms))

    def __mul__(self, other) -> "NcPoly":
        if isinstance(other, NcPoly):
            return poly_mul(self, other)
        if self.field.owns(other):
            return poly_scale(other, self)
        return NotImplemented

    def __rmul__(self, other) -> "NcPoly":
        if self.field.owns(other):
            return poly_scale(other, self)
        return NotImplemented


def _check_compatible(a: NcPoly, b: NcPoly) -> None:
    if a.field != b.field:
        raise FieldMismatchError(f"field mismatch: {a.field} vs {b.field}")
    if a.nvars != b.nvars:
        raise FieldMismatchError(f"alphabet mismatch: {a.nvars} vs {b.nvars} variables")


def poly_add(a: NcPoly, b: NcPoly) -> NcPoly:
    _check_compatible(a, b)
    acc = dict(a.terms)
    zero = a.field.zero
    for word, coeff in b.terms:
        acc[word] = acc.get(word, zero) + coeff
    return NcPoly._canonical(a.field, a.nvars, acc)


def poly_scale(c: Scalar, a: NcPoly) -> NcPoly:
    if not a.field.owns(c):
        raise FieldMismatchError(f"scalar {c!r} is not in {a.field}")
    if a.field.is_zero(c):
        return NcPoly.zero(a.field, a.nvars)
    return NcPoly(a.field, a.nvars, tuple((w, c * v) for w, v in a.terms))


def poly_mul(a: NcPoly, b: NcPoly, max_degree: Optional[int] = None) -> NcPoly:
    """Product in the free algebra; words concatenate.

    With max_degree set, words longer than the bound are dropped, which is
    multiplication in the truncated algebra.
    """
    _check_compatible(a, b)
    acc: dict[Word, Scalar] = {}
    zero = a.field.zero
    for u, cu in a.terms:
        for v, cv in b.terms:
            if max_degree is not None and len(u) + len(v) > max_degree:
                break  # b is sorted by degree
            word = u + v
            acc[word] = acc.get(word, zero) + cu * cv
    return NcPoly._canonical(a.field, a.nvars, acc)


def homogeneous_part(p: NcPoly, degree: int) -> NcPoly:
    return NcPoly(p.field, p.nvars, tuple((w, c) for w, c in p.terms if len(w) == degree))


def linear_part(p: NcPoly) -> NcPoly:
    """Homogeneous part of degree 1 (possibly zero)."""
    return homogeneous_part(p, 1)


def truncate(p: NcPoly, max_degree: int) -> NcPoly:
    """Drop every term of degree above max_degree."""
    return NcPoly(p.field, p.nvars, tuple((w, c) for w, c in p.terms if len(w) <= max_degree))


def min_monomial(p: NcPoly) -> Word:
    """The deg-lex least word of p, written m(p)."""
    if p.is_zero():
        raise ZeroPolynomialError("m undefined for 0")
    return p.terms[0][0]


def min_homogeneous_part(p: NcPoly) -> NcPoly:
    if p.is_zero():
        raise ZeroPolynomialError("minimal homogeneous part undefined for 0")
    if p.is_homogeneous():
        return p
    return homogeneous_part(p, p.min_degree)


def substitute(phi: NcPoly, args: Sequence[NcPoly], max_degree: Optional[int] = None) -> NcPoly:
    """
    Evaluate phi at polynomial arguments.

    Each slot word z_i1...z_il maps to args[i1]...args[il], extended linearly;
    this is the unique homomorphism of non-unital algebras sending z_i to args[i].

    Args:
        phi: polynomial over len(args) slot variables
        args: the images of the slot variables, all over one field and alphabet
        max_degree: optional truncation bound applied to every product
    """
    if len(args) != phi.nvars:
        raise ArityMismatchError(f"{phi.nvars} slot variables but {len(args)} arguments")
    if not args:
        raise ArityMismatchError("substitution needs at least one argument")
    for arg in args:
        _check_compatible(arg, args[0])
        if arg.field != phi.field:
            raise FieldMismatchError(f"field mismatch: {phi.field} vs {arg.field}")

    target = args[0]
    if max_degree is not None:
        args = [truncate(arg, max_degree) for arg in args]

    products: dict[Word, NcPoly] = {}

    def image(word: Word) -> NcPoly:
        cached = products.get(word)
        if cached is None:
            if len(word) == 1:
                cached = args[word[0] - 1]
            else:
                cached = poly_mul(image(word[:-1]), args[word[-1] - 1], max_degree)
            products[word] = cached
        return cached

    acc: dict[Word, Scalar] = {}
    zero = target.field.zero
    for word, coeff in phi.terms:
        for w, c in image(word).terms:
            acc[w] = acc.get(w, zero) + coeff * c
    return NcPoly._canonical(target.field, target.nvars, acc)


@dataclass(frozen=True)
class LinearMap:
    """Linear change of variables x_i -> Σ_r matrix[i][r]·y_r.

    The inverse, when cached, satisfies matrix·inverse = identity exactly.
    """

    field: Field
    matrix: Matrix
    inverse: Optional[Matrix] = None

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ValueError("linear map matrix must be square")
        if self.inverse is not None:
            if matmul(self.field, self.matrix, self.inverse) != identity_matrix(self.field, n):
                raise ValueError("cached inverse does not invert the matrix")

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def is_invertible(self) -> bool:
        return self.inverse is not None

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Scalar]]) -> "LinearMap":
        """Build a map and cache its inverse when it exists."""
        matrix = tuple(tuple(row) for row in rows)
        _, inverse = invert_matrix(field, matrix)
        return cls(field, matrix, inverse)

    @classmethod
    def identity(cls, field: Field, n: int) -> "LinearMap":
        unit = identity_matrix(field, n)
        return cls(field, unit, unit)

    def inverse_map(self) -> "LinearMap":
        if self.inverse is None:
            raise ValueError("linear map is not invertible")
        return LinearMap(self.field, self.inverse, self.matrix)

    def images(self) -> list[NcPoly]:
        """The linear forms φ(x_i) = Σ_r matrix[i][r]·y_r."""
        n = self.dimension
        return [
            NcPoly.from_terms(self.field, n, [((r + 1,), value) for r, value in enumerate(row)])
            for row in self.matrix
        ]


def apply_linear_map(transform: LinearMap, p: NcPoly) -> NcPoly:
    """Substitute every x_i by its linear form and expand; degrees are preserved."""
    if p.nvars != transform.dimension:
        raise ArityMismatchError(
            f"linear map of dimension {transform.dimension} applied to {p.nvars} variables"
        )
    if p.field != transform.field:
        raise FieldMismatchError(f"field mismatch: {p.field} vs {transform.field}")
    if p.is_zero():
        return p
    return substitute(p, transform.images())
