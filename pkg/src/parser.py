# Input language: polynomials, problem files, presentation and witness files
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

from pyparsing import (
    Opt,
    ParseBaseException,
    ParseFatalException,
    ParserElement,
    Regex,
    Suppress,
    Word as WordToken,
    ZeroOrMore,
    nums,
    one_of,
)

from .algebra import EMPTY, Field, NcPoly, PrimeField, Scalar, Word, get_field
from .errors import InputError
from .instance import AlgebraPresentation, CandidateSystem, GenerationWitness, WitnessEntry
from .presentation import Presentation, PresentationTerm, RelationSystem

logger = logging.getLogger(__name__)

EMPTY_WORD = "e"
COMMENT = "#"
_IDENTIFIER = r"[A-Za-z_][A-Za-z0-9_]*"


def default_names(n: int, prefix: str = "x") -> list[str]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


@dataclass(frozen=True)
class Grammar:
    """Parser elements for one field and one alphabet."""

    poly: ParserElement
    word: ParserElement
    scalar: ParserElement


@lru_cache(maxsize=64)
def _grammar(field: Field, names: tuple[str, ...]) -> Grammar:
    """
    poly   := term (('+'|'-') term)*
    term   := coeff ('*' word)? | word
    word   := factor ('*' factor)*
    factor := var ('^' positive-int)?
    coeff  := int | int '/' int      (int only over GF(p))
    """
    lookup = {name: i for i, name in enumerate(names, start=1)}
    integer = WordToken(nums)
    sign = one_of("+ -")

    def to_index(s, loc, toks):
        name = toks[0]
        if name not in lookup:
            raise ParseFatalException(s, loc, f"unknown variable {name!r}")
        return [lookup[name]]

    def to_factor(s, loc, toks):
        power = int(toks[1]) if len(toks) > 1 else 1
        if power < 1:
            raise ParseFatalException(s, loc, "exponent must be positive")
        return [(toks[0],) * power]

    def to_word(toks):
        return [tuple(index for factor in toks for index in factor)]

    def to_coefficient(s, loc, toks):
        numerator = int(toks[0])
        if len(toks) == 1:
            return [field.from_int(numerator)]
        if isinstance(field, PrimeField):
            raise ParseFatalException(s, loc, f"fractions are not allowed over {field}")
        if int(toks[1]) == 0:
            raise ParseFatalException(s, loc, "zero denominator")
        return [field.from_ratio(numerator, int(toks[1]))]

    def to_term(s, loc, toks):
        if not isinstance(toks[-1], tuple):
            raise ParseFatalException(s, loc, "constant term not allowed")
        coeff = toks[0] if len(toks) == 2 else field.one
        return [(toks[-1], coeff)]

    def to_signed(toks):
        if len(toks) == 1:
            return [toks[0]]
        value = toks[1]
        if toks[0] == "-":
            value = (value[0], -value[1]) if isinstance(value, tuple) else -value
        return [value]

    variable = Regex(_IDENTIFIER).set_parse_action(to_index)
    factor = (variable + Opt(Suppress("^") + integer)).set_parse_action(to_factor)
    word = (factor + ZeroOrMore(Suppress("*") + factor)).set_parse_action(to_word)
    coefficient = (integer + Opt(Suppress("/") + integer)).set_parse_action(to_coefficient)
    term = ((coefficient + Opt(Suppress("*") + word)) | word).set_parse_action(to_term)
    signed_term = (sign + term).set_parse_action(to_signed)
    poly = (signed_term | term) + ZeroOrMore(signed_term)
    scalar = (Opt(sign) + coefficient).set_parse_action(to_signed)

    return Grammar(poly=poly, word=word, scalar=scalar)


def _strip_comment(text: str) -> str:
    return text.split(COMMENT, 1)[0]


def _position_error(error: ParseBaseException, path: Optional[str], line: int, column: int) -> InputError:
    return InputError(error.msg, path, line, column + error.col - 1)


def parse_poly(
    text: str,
    field: Field,
    names: Sequence[str],
    path: Optional[str] = None,
    line: int = 1,
    column: int = 1,
) -> NcPoly:
    """
    Parse a polynomial over the given variable names.

    Args:
        text: polynomial text; '#' starts a comment, "0" is the zero polynomial
        field: coefficient field
        names: variable names in order, fixing the deg-lex order
        path, line, column: where text starts, for error positions
    """
    body = _strip_comment(text)
    stripped = body.strip()
    start = column + len(body) - len(body.lstrip())
    if not stripped:
        raise InputError("empty polynomial", path, line, column)
    if stripped == "0":
        return NcPoly.zero(field, len(names))

    grammar = _grammar(field, tuple(names))
    try:
        terms = grammar.poly.parse_string(stripped, parse_all=True)
    except ParseBaseException as e:
        raise _position_error(e, path, line, start) from None
    return NcPoly.from_terms(field, len(names), list(terms))


def parse_word(
    text: str, field: Field, names: Sequence[str], path: Optional[str] = None, line: int = 1, column: int = 1
) -> Word:
    """A word like x1*x3^2, or 'e' for the empty word."""
    stripped = text.strip()
    if stripped == EMPTY_WORD:
        return EMPTY
    try:
        return _grammar(field, tuple(names)).word.parse_string(stripped, parse_all=True)[0]
    except ParseBaseException as e:
        raise _position_error(e, path, line, column) from None


def parse_scalar(text: str, field: Field, path: Optional[str] = None, line: int = 1, column: int = 1) -> Scalar:
    try:
        return _grammar(field, ()).scalar.parse_string(text.strip(), parse_all=True)[0]
    except ParseBaseException as e:
        raise _position_error(e, path, line, column) from None


# Formatting


def format_scalar(field: Field, value: Scalar) -> str:
    """Text that parse_scalar reads back to value."""
    return field.format(value)


def format_word(word: Word, names: Sequence[str]) -> str:
    """Runs of one variable print as powers; the empty word prints as 'e'."""
    if not word:
        return EMPTY_WORD
    factors = []
    i = 0
    while i < len(word):
        run = 1
        while i + run < len(word) and word[i + run] == word[i]:
            run += 1
        name = names[word[i] - 1]
        factors.append(name if run == 1 else f"{name}^{run}")
        i += run
    return "*".join(factors)


def format_poly(p: NcPoly, names: Optional[Sequence[str]] = None) -> str:
    """Deg-lex ordered text that parses back to p."""
    names = names or default_names(p.nvars)
    if p.is_zero():
        return "0"

    out = []
    for word, coeff in p.terms:
        text = format_scalar(p.field, coeff)
        negative = text.startswith("-")
        magnitude = text.lstrip("-")
        body = format_word(word, names)
        if magnitude != "1":
            body = f"{magnitude}*{body}"
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


def format_presentation(presentation: Presentation, names: Optional[Sequence[str]] = None) -> str:
    """One `c ; p ; i ; q` line per term."""
    field = presentation.system.field
    names = names or default_names(presentation.system.nvars)
    return "\n".join(
        f"{format_scalar(field, t.coefficient)} ; {format_word(t.left, names)} ; "
        f"{t.rel_index} ; {format_word(t.right, names)}"
        for t in presentation.terms
    )


# Files


def _split_fields(text: str, column: int, separator: str = ";") -> list[tuple[str, int]]:
    """Split on separator, keeping the column where each stripped field starts."""
    fields = []
    for part in text.split(separator):
        lead = len(part) - len(part.lstrip())
        fields.append((part.strip(), column + lead))
        column += len(part) + len(separator)
    return fields


def _read_lines(path: str) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except UnicodeDecodeError:
        raise InputError("file is not valid UTF-8", path) from None
    except OSError as e:
        raise InputError(f"cannot read file: {e.strerror}", path) from None


def _parse_terms(
    fields: Sequence[tuple[str, int]],
    system: RelationSystem,
    names: Sequence[str],
    path: Optional[str],
    line: int,
) -> list[PresentationTerm]:
    """Terms from consecutive groups of four fields `c ; p ; i ; q`."""
    if len(fields) % 4:
        column = fields[-1][1] if fields else 1
        raise InputError("presentation terms need four fields: c ; p ; i ; q", path, line, column)

    terms = []
    for start in range(0, len(fields), 4):
        (c_text, c_col), (p_text, p_col), (i_text, i_col), (q_text, q_col) = fields[start : start + 4]
        coeff = parse_scalar(c_text, system.field, path, line, c_col)
        if system.field.is_zero(coeff):
            raise InputError("zero coefficient", path, line, c_col)
        left = parse_word(p_text, system.field, names, path, line, p_col)
        if not i_text.isdigit():
            raise InputError(f"relation index must be a positive integer, got {i_text!r}", path, line, i_col)
        index = int(i_text)
        if not 1 <= index <= system.k:
            raise InputError(f"relation index {index} outside 1..{system.k}", path, line, i_col)
        right = parse_word(q_text, system.field, names, path, line, q_col)
        terms.append(PresentationTerm(coeff, left, index, right))
    return terms


def parse_presentation_text(
    text: str, system: RelationSystem, names: Optional[Sequence[str]] = None, path: Optional[str] = None
) -> Presentation:
    names = names or default_names(system.nvars)
    terms = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        terms.extend(_parse_terms(_split_fields(body, 1), system, names, path, line_no))
    return Presentation(system, tuple(terms))


def parse_presentation(path: str, system: RelationSystem, names: Optional[Sequence[str]] = None) -> Presentation:
    """Read a presentation file: one `c ; p ; i ; q` term per line."""
    return parse_presentation_text("\n".join(_read_lines(path)), system, names, path)


@dataclass
class ProblemFile:
    """A parsed problem: A = k<X>/id(rel...), candidates and an optional witness."""

    field: Field
    names: list[str]
    algebra: AlgebraPresentation
    candidates: Optional[CandidateSystem] = None
    witness: Optional[GenerationWitness] = None
    path: Optional[str] = None
    vars_line: int = 1

    @property
    def slot_names(self) -> list[str]:
        return default_names(self.candidates.n if self.candidates else 0, prefix="z")


def _parse_witness_line(
    body: str,
    column: int,
    problem: ProblemFile,
    entries: dict[int, WitnessEntry],
    line: int,
) -> None:
    """`i : Φ [; c ; p ; j ; q]*` after the `wit` keyword."""
    path = problem.path
    if problem.candidates is None:
        raise InputError("witness given without candidate generators", path, line, column)
    if ":" not in body:
        raise InputError("expected `wit i : <poly in z1..zn> ; ...`", path, line, column)

    index_text, rest = body.split(":", 1)
    index_text = index_text.strip()
    if not index_text.isdigit() or not 1 <= int(index_text) <= problem.algebra.nvars:
        raise InputError(f"witness index must lie in 1..{problem.algebra.nvars}", path, line, column)
    index = int(index_text)
    if index in entries:
        raise InputError(f"duplicate witness for variable {index}", path, line, column)

    fields = _split_fields(rest, column + len(body.split(":", 1)[0]) + 1)
    phi_text, phi_col = fields[0]
    phi = parse_poly(phi_text, problem.field, problem.slot_names, path, line, phi_col)
    system = problem.algebra.relation_system()
    terms = _parse_terms(fields[1:], system, problem.names, path, line)
    entries[index] = WitnessEntry(phi=phi, ideal_part=Presentation(system, tuple(terms)))


def _directive(raw: str) -> tuple[str, str, int]:
    """(keyword, argument text, argument column) for one line, comment stripped."""
    body = _strip_comment(raw).rstrip()
    parts = body.split(None, 1)
    if not parts:
        return "", "", 1
    keyword = parts[0]
    argument = parts[1] if len(parts) > 1 else ""
    column = body.find(argument, body.find(keyword) + len(keyword)) + 1 if argument else len(body) + 1
    return keyword, argument, column


def parse_problem_text(text: str, path: Optional[str] = None, strict: bool = True) -> ProblemFile:
    """
    Parse the problem-file language.

    Lines are `field Q|GF(p)`, `vars x1 x2 ...`, `rel <poly>`, `gen <poly>`
    and `wit i : <Φ> [; c ; p ; j ; q]*`. With strict set, N = n + k with
    n >= 1 candidates and k >= 1 relations is required.
    """
    field: Optional[Field] = None
    names: Optional[list[str]] = None
    vars_line = 1
    rel_lines: list[tuple[str, int, int]] = []
    gen_lines: list[tuple[str, int, int]] = []
    wit_lines: list[tuple[str, int, int]] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        keyword, argument, column = _directive(raw)
        if not keyword:
            continue

        if keyword == "field":
            if field is not None:
                raise InputError("duplicate field declaration", path, line_no, 1)
            try:
                field = get_field(argument)
            except ValueError as e:
                raise InputError(str(e), path, line_no, column) from None
        elif keyword == "vars":
            if names is not None:
                raise InputError("duplicate vars declaration", path, line_no, 1)
            names = argument.split()
            vars_line = line_no
            _check_names(names, path, line_no, column)
        elif keyword in ("rel", "gen", "wit"):
            if field is None or names is None:
                raise InputError(f"`{keyword}` before field and vars declarations", path, line_no, 1)
            target = {"rel": rel_lines, "gen": gen_lines, "wit": wit_lines}[keyword]
            target.append((argument, line_no, column))
        else:
            raise InputError(f"unknown directive {keyword!r}", path, line_no, 1)

    if field is None:
        raise InputError("missing field declaration", path)
    if names is None:
        raise InputError("missing vars declaration", path)

    def polys(lines, what):
        out = []
        for argument, line_no, column in lines:
            p = parse_poly(argument, field, names, path, line_no, column)
            if p.is_zero():
                raise InputError(f"{what} is zero", path, line_no, column)
            out.append(p)
        return tuple(out)

    algebra = AlgebraPresentation(field, len(names), polys(rel_lines, "relation"))
    generators = polys(gen_lines, "candidate")
    candidates = CandidateSystem(generators) if generators else None

    if strict:
        n, k = len(generators), algebra.k
        if n + k != algebra.nvars:
            raise InputError(f"n + k = {n + k} ≠ {algebra.nvars} variables", path, vars_line, 1)
        if n == 0:
            raise InputError("no candidate generators (`gen` lines)", path, vars_line, 1)
        if k == 0:
            raise InputError("no relations (`rel` lines); need 1 ≤ k < N", path, vars_line, 1)

    problem = ProblemFile(
        field=field, names=names, algebra=algebra, candidates=candidates, path=path, vars_line=vars_line
    )
    if wit_lines:
        entries: dict[int, WitnessEntry] = {}
        for argument, line_no, column in wit_lines:
            _parse_witness_line(argument, column, problem, entries, line_no)
        problem.witness = GenerationWitness(entries)

    logger.debug(f"Parsed problem over {field}: N={algebra.nvars}, k={algebra.k}, n={len(generators)}")
    return problem


def _check_names(names: list[str], path: Optional[str], line: int, column: int) -> None:
    if not names:
        raise InputError("no variables declared", path, line, column)
    seen = set()
    for name in names:
        if not re.fullmatch(_IDENTIFIER, name):
            raise InputError(f"invalid variable name {name!r}", path, line, column)
        if name == EMPTY_WORD:
            raise InputError(f"{EMPTY_WORD!r} is reserved for the empty word", path, line, column)
        if name in seen:
            raise InputError(f"duplicate variable name {name!r}", path, line, column)
        seen.add(name)


def parse_problem(path: str, strict: bool = True) -> ProblemFile:
    """Read and parse a problem file."""
    return parse_problem_text("\n".join(_read_lines(path)), path=path, strict=strict)


def parse_witness(path: str, problem: ProblemFile) -> GenerationWitness:
    """Read a witness file made of `wit` lines for an already parsed problem."""
    entries: dict[int, WitnessEntry] = {}
    source = ProblemFile(
        field=problem.field,
        names=problem.names,
        algebra=problem.algebra,
        candidates=problem.candidates,
        path=path,
    )
    for line_no, raw in enumerate(_read_lines(path), start=1):
        keyword, argument, column = _directive(raw)
        if not keyword:
            continue
        if keyword != "wit":
            raise InputError(f"expected `wit`, found {keyword!r}", path, line_no, 1)
        _parse_witness_line(argument, column, source, entries, line_no)
    return GenerationWitness(entries)
