#!/usr/bin/env python3
"""
Magnus certifier - freeness certificates for finitely presented algebras

Checks whether an algebra with n + k generators and k relations that has an
n-element system of candidate generators is free of rank n, and verifies
the supporting claims by exact and bounded-degree computation.
"""
import argparse
import logging
import sys
import time
from contextlib import contextmanager
from typing import Optional, Sequence

from . import __version__
from .certifier import (
    Verdict,
    build_phi,
    certify_freeness,
    linear_parts_matrix,
    rank_and_invert,
)
from .config import Config
from .errors import ConfigError, InputError, MagnusError, ResourceLimitError
from .oracle import (
    TruncatedSpace,
    dependency_search_bounded,
    generation_search_bounded,
    ideal_span_up_to,
    normalizing_change,
)
from .parser import (
    ProblemFile,
    default_names,
    format_presentation,
    parse_presentation,
    parse_problem,
    parse_witness,
)
from .presentation import RelationSystem, certify_min_monomial, evaluate
from .report import (
    Report,
    certificate_report,
    dependency_report,
    generation_report,
    get_writer,
    membership_report,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3

CHECK_EXIT_CODES = {
    Verdict.FULL_FREENESS_CERTIFIED: EXIT_OK,
    Verdict.FREE_SUBALGEBRA_CERTIFIED: EXIT_OK,
    Verdict.REJECTED: EXIT_NEGATIVE,
    Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    """Bad command line."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class MagnusTool:
    """Runs one subcommand and collects its report."""

    def __init__(self, config: Config):
        self.config = config
        self.timings: dict[str, float] = {}

    @contextmanager
    def _timed(self, stage: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[stage] = self.timings.get(stage, 0.0) + time.perf_counter() - start

    def _load(self, path: str, strict: bool) -> ProblemFile:
        with self._timed("parse"):
            return parse_problem(path, strict=strict)

    def check(self, path: str, witness_path: Optional[str], assume_generation: bool, search_degree: int) -> tuple[Report, int]:
        problem = self._load(path, strict=True)
        if problem.candidates is None:
            raise InputError("no candidate generators to certify", path, problem.vars_line, 1)
        witness = problem.witness
        if witness_path:
            with self._timed("parse"):
                witness = parse_witness(witness_path, problem)

        with self._timed("certify"):
            certificate = certify_freeness(
                problem.algebra,
                problem.candidates,
                witness=witness,
                assume_generation=assume_generation,
                search_degree=search_degree,
                coordinate_cap=self.config.coordinate_cap,
            )
        report = certificate_report(certificate, problem.algebra, problem.candidates, problem.names)
        return report, CHECK_EXIT_CODES[certificate.verdict]

    def _membership_system(self, problem: ProblemFile) -> tuple[RelationSystem, list[str]]:
        """The relations as given when normalized, else the relabeled φ-relations."""
        system = problem.algebra.relation_system()
        if system.normalized:
            return system, problem.names
        if problem.candidates is None:
            raise InputError("relations are not normalized and no candidates define a change of variables", problem.path)
        n, k, nvars = problem.candidates.n, problem.algebra.k, problem.algebra.nvars
        if n + k != nvars:
            raise InputError(
                f"relations are not normalized and n + k = {n + k} ≠ {nvars} variables "
                "for a change of variables",
                problem.path,
                problem.vars_line,
                1,
            )

        beta, _ = linear_parts_matrix(problem.algebra, problem.candidates)
        inversion = rank_and_invert(problem.field, beta)
        if inversion.rejected:
            raise InputError(
                f"relations are not normalized and the linear parts have rank {inversion.rank} < {len(beta)}",
                problem.path,
            )
        transformed = build_phi(inversion.alpha, problem.algebra, problem.candidates)
        names = transformed.relabeled_names(default_names(problem.algebra.nvars, prefix="y"))
        logger.info(f"Relations normalized by change of variables; alphabet {' '.join(names)}")
        return transformed.normalized_system(), names

    def member(self, path: str, presentation_path: str) -> tuple[Report, int]:
        problem = self._load(path, strict=False)
        system, names = self._membership_system(problem)
        with self._timed("parse"):
            presentation = parse_presentation(presentation_path, system, names)

        if evaluate(presentation).is_zero():
            report = membership_report("ZERO", None, [], "", names, reason="presentation evaluates to 0")
            return report, EXIT_INCONCLUSIVE

        trace = []
        with self._timed("improve"):
            final, minimal = certify_min_monomial(presentation, self.config.limits(), trace)
        report = membership_report(
            "CERTIFIED", minimal, trace, format_presentation(final, names), names
        )
        return report, EXIT_OK

    def _span(self, problem: ProblemFile, max_degree: int) -> TruncatedSpace:
        change = normalizing_change(problem.algebra, problem.candidates)
        return ideal_span_up_to(problem.algebra, max_degree, self.config.coordinate_cap, change=change)

    def oracle(self, path: str, max_degree: int) -> tuple[Report, int]:
        problem = self._load(path, strict=False)
        if problem.candidates is None:
            raise InputError("no candidate generators to test", path)
        with self._timed("ideal span"):
            space = self._span(problem, max_degree)
        with self._timed("dependency search"):
            dependency = dependency_search_bounded(
                problem.algebra, problem.candidates, max_degree, self.config.coordinate_cap, space
            )
        report = dependency_report(dependency, space, problem.candidates.n, problem.names)
        return report, EXIT_NEGATIVE if dependency is not None else EXIT_OK

    def gen_witness(self, path: str, max_degree: int) -> tuple[Report, int]:
        problem = self._load(path, strict=False)
        if problem.candidates is None:
            raise InputError("no candidate generators to test", path)
        with self._timed("ideal span"):
            space = self._span(problem, max_degree)
        with self._timed("generation search"):
            witness = generation_search_bounded(
                problem.algebra, problem.candidates, max_degree, self.config.coordinate_cap, space
            )
        report = generation_report(witness, space, problem.algebra, problem.candidates, problem.names)
        return report, EXIT_OK if witness is not None else EXIT_INCONCLUSIVE


def build_parser(config: Config) -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="magnus", description="Freeness certificates for finitely presented algebras")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    check = commands.add_parser("check", help="certify freeness of the presented algebra")
    check.add_argument("file")
    check.add_argument("--assume-generation", action="store_true", help="take generation by the candidates as given")
    check.add_argument("--witness", metavar="WFILE", help="file of `wit` lines proving generation")
    check.add_argument("--search-degree", type=int, default=config.search_degree, metavar="D",
                       help="search for a generation witness up to degree D (0 = off)")
    check.add_argument("--json", action="store_true")

    member = commands.add_parser("member", help="certify the minimal monomial of an ideal element")
    member.add_argument("file")
    member.add_argument("--presentation", required=True, metavar="PFILE")
    member.add_argument("--json", action="store_true")

    for name, help_text in (
        ("oracle", "bounded search for an algebraic dependency"),
        ("gen-witness", "bounded search for a generation witness"),
    ):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("file")
        sub.add_argument("--max-degree", type=int, default=config.oracle_max_degree, metavar="D")
        sub.add_argument("--json", action="store_true")

    return parser


def _setup_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def run_cli(argv: Optional[Sequence[str]] = None, config: Optional[Config] = None) -> int:
    """Parse arguments, run one subcommand, print its report; returns the exit code."""
    if config is None:
        try:
            config = Config.from_env()
        except ConfigError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_INPUT_ERROR
    _setup_logging(config.log_level)

    try:
        args = build_parser(config).parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_INPUT_ERROR

    if getattr(args, "max_degree", 1) < 1 or getattr(args, "search_degree", 0) < 0:
        print("magnus: error: degree bounds must be positive", file=sys.stderr)
        return EXIT_INPUT_ERROR

    tool = MagnusTool(config)
    try:
        if args.command == "check":
            report, code = tool.check(args.file, args.witness, args.assume_generation, args.search_degree)
        elif args.command == "member":
            report, code = tool.member(args.file, args.presentation)
        elif args.command == "oracle":
            report, code = tool.oracle(args.file, args.max_degree)
        else:
            report, code = tool.gen_witness(args.file, args.max_degree)
    except InputError as e:
        logger.debug("Input error", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ResourceLimitError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except MagnusError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    report.timings = {stage: round(seconds, 6) for stage, seconds in tool.timings.items()}
    print(get_writer("json" if args.json else "text").render(report))
    return code


def main():
    """Main entry point."""
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
