# Report - serializable results of every command, with text and JSON writers
import json
import logging
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field as dataclass_field, fields
from typing import Any, Optional, Sequence

from . import __version__
from .algebra import Field, Word
from .algebra.linalg import Matrix
from .certifier import Certificate
from .instance import AlgebraPresentation, CandidateSystem, GenerationWitness, resolve_entry
from .oracle import Dependency, TruncatedSpace
from .parser import default_names, format_poly, format_presentation, format_scalar, format_word

logger = logging.getLogger(__name__)


@dataclass
class Report:
    """Everything a command produced, as exact strings and plain containers.

    Matrices are row-major lists of exact scalar strings ("3/2"), never floats.
    """

    command: str
    verdict: str
    rank: Optional[int] = None
    alpha: Optional[list[list[str]]] = None
    beta: Optional[list[list[str]]] = None
    phi_candidates: list[str] = dataclass_field(default_factory=list)
    phi_relations: list[str] = dataclass_field(default_factory=list)
    tau_trace: list[str] = dataclass_field(default_factory=list)
    oracle: Optional[dict[str, Any]] = None
    timings: dict[str, float] = dataclass_field(default_factory=dict)
    version: str = __version__
    reason: str = ""
    assumptions: list[str] = dataclass_field(default_factory=list)
    eq3: Optional[bool] = None
    witness: Optional[dict[str, dict[str, Any]]] = None
    minimal_monomial: Optional[str] = None
    presentation: list[str] = dataclass_field(default_factory=list)
    free_rank: Optional[int] = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Report":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown report fields: {', '.join(sorted(unknown))}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def _matrix(field: Field, matrix: Optional[Matrix]) -> Optional[list[list[str]]]:
    if matrix is None:
        return None
    return [[format_scalar(field, value) for value in row] for row in matrix]


def _lines(text: str) -> list[str]:
    return text.splitlines() if text else []


def witness_to_dict(
    witness: GenerationWitness,
    algebra: AlgebraPresentation,
    candidates: CandidateSystem,
    names: Sequence[str],
) -> dict[str, dict[str, Any]]:
    """Witness entries keyed by variable index, defaults filled in."""
    slots = default_names(candidates.n, prefix="z")
    out = {}
    for index in range(1, algebra.nvars + 1):
        entry = resolve_entry(index, witness, algebra, candidates)
        if entry is None:
            continue
        out[str(index)] = {
            "phi": format_poly(entry.phi, slots),
            "presentation": _lines(format_presentation(entry.ideal_part, names)),
        }
    return out


def certificate_report(
    certificate: Certificate,
    algebra: AlgebraPresentation,
    candidates: CandidateSystem,
    names: Sequence[str],
) -> Report:
    field = algebra.field
    y_names = default_names(algebra.nvars, prefix="y")
    return Report(
        command="check",
        verdict=certificate.verdict.value,
        rank=certificate.rank,
        alpha=_matrix(field, certificate.alpha.matrix if certificate.alpha else None),
        beta=_matrix(field, certificate.beta),
        phi_candidates=[format_poly(p, y_names) for p in certificate.phi_candidates],
        phi_relations=[format_poly(p, y_names) for p in certificate.phi_relations],
        reason=certificate.reason,
        assumptions=list(certificate.assumptions),
        eq3=certificate.eq3,
        free_rank=certificate.free_rank,
        witness=(
            witness_to_dict(certificate.witness, algebra, candidates, names)
            if certificate.witness is not None
            else None
        ),
    )


def membership_report(
    verdict: str,
    minimal: Optional[Word],
    trace: Sequence[Word],
    presentation_text: str,
    names: Sequence[str],
    reason: str = "",
) -> Report:
    return Report(
        command="member",
        verdict=verdict,
        tau_trace=[format_word(tau, names) for tau in trace],
        minimal_monomial=format_word(minimal, names) if minimal is not None else None,
        presentation=_lines(presentation_text),
        reason=reason,
    )


def _oracle_summary(mode: str, max_degree: int, space: TruncatedSpace, found: bool) -> dict[str, Any]:
    return {
        "mode": mode,
        "max_degree": max_degree,
        "result": "FOUND" if found else "NONE",
        "ambient_dimension": space.dimension,
        "ideal_dimension": space.ideal_dimension,
    }


def dependency_report(
    dependency: Optional[Dependency], space: TruncatedSpace, n: int, names: Sequence[str]
) -> Report:
    oracle = _oracle_summary("dependency", space.max_degree, space, dependency is not None)
    if dependency is None:
        return Report(
            command="oracle",
            verdict="NONE",
            oracle=oracle,
            reason=f"no dependency up to degree {space.max_degree}",
        )

    oracle.update(
        phi=format_poly(dependency.phi, default_names(n, prefix="z")),
        exact=dependency.exact,
        presentation=_lines(format_presentation(dependency.presentation, names)),
    )
    caveat = "" if dependency.exact else f"holds modulo words of degree > {space.max_degree}"
    return Report(command="oracle", verdict="FOUND", oracle=oracle, reason=caveat)


def generation_report(
    witness: Optional[GenerationWitness],
    space: TruncatedSpace,
    algebra: AlgebraPresentation,
    candidates: CandidateSystem,
    names: Sequence[str],
) -> Report:
    oracle = _oracle_summary("generation", space.max_degree, space, witness is not None)
    if witness is None:
        return Report(
            command="gen-witness",
            verdict="NONE",
            oracle=oracle,
            reason=f"no exact generation witness up to degree {space.max_degree}",
        )
    return Report(
        command="gen-witness",
        verdict="FOUND",
        oracle=oracle,
        witness=witness_to_dict(witness, algebra, candidates, names),
    )


class ReportWriter(ABC):
    """Renders a report for stdout."""

    @abstractmethod
    def render(self, report: Report) -> str:
        pass


class JsonWriter(ReportWriter):
    def render(self, report: Report) -> str:
        return report.to_json()


class TextWriter(ReportWriter):
    """Human-readable rendering; empty sections are skipped."""

    def render(self, report: Report) -> str:
        out = [f"verdict: {report.verdict}"]
        if report.reason:
            out.append(f"reason: {report.reason}")
        if report.rank is not None:
            out.append(f"rank: {report.rank}")
        if report.free_rank is not None:
            out.append(f"free rank: {report.free_rank}")
        for name, matrix in (("beta", report.beta), ("alpha", report.alpha)):
            if matrix:
                out.append(f"{name}:")
                out.extend(f"  [{', '.join(row)}]" for row in matrix)
        if report.eq3 is not None:
            out.append(f"eq3: {'verified' if report.eq3 else 'FAILED'}")
        for label, polys in (("phi g", report.phi_candidates), ("phi h", report.phi_relations)):
            for i, text in enumerate(polys, start=1):
                out.append(f"{label}{i} = {text}")
        for assumption in report.assumptions:
            out.append(f"assumption: {assumption}")
        if report.minimal_monomial is not None:
            out.append(f"m(s) = {report.minimal_monomial}")
        if report.tau_trace:
            out.append(f"tau trace: {' < '.join(report.tau_trace)}")
        if report.presentation:
            out.append("presentation:")
            out.extend(f"  {line}" for line in report.presentation)
        if report.oracle:
            oracle = report.oracle
            out.append(
                f"oracle: {oracle['mode']} search at D={oracle['max_degree']}: {oracle['result']} "
                f"(ideal dimension {oracle['ideal_dimension']} of {oracle['ambient_dimension']})"
            )
            if "phi" in oracle:
                out.append(f"Phi = {oracle['phi']}")
                out.append(f"exact: {oracle['exact']}")
        if report.witness:
            for index, entry in sorted(report.witness.items(), key=lambda item: int(item[0])):
                d = "; ".join(entry["presentation"]) or "0"
                out.append(f"witness x{index}: Phi = {entry['phi']}, d = {d}")
        if report.timings:
            out.append(
                "timings: " + ", ".join(f"{k} {v:.3f}s" for k, v in sorted(report.timings.items()))
            )
        out.append(f"version: {report.version}")
        return "\n".join(out)


WRITERS: dict[str, type[ReportWriter]] = {
    "text": TextWriter,
    "json": JsonWriter,
}


def get_writer(name: str) -> ReportWriter:
    """Factory function returning the writer registered under name."""
    if name not in WRITERS:
        raise ValueError(f"Unknown report format: {name}. Available: {', '.join(WRITERS)}")
    return WRITERS[name]()
