"""Test suites over the bundled corpus and the mutation matrix."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from importlib import resources

from ..core import DEFAULT_SCOPE, Scope
from ..errors import BError, UndetectedMutation
from ..evaluate import Classification, check_machine, evaluate
from ..kernel.context import MUTATIONS, EvalContext
from ..laws import check_corpus, describe, load_corpus
from ..syntax import parse_machine, roundtrip_check
from ..typecheck import crosscheck_typing
from .gen import TestCase, generated_suite

SUITES = ("unit", "generated", "laws", "roundtrip", "crosscheck", "machines", "regression")
MATRIX_SUITES = ("unit", "generated", "regression", "laws")
MAX_REPORTED = 10


@dataclass
class SuiteResult:
    suite: str
    mutation: str | None
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, what: str):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED:
                self.failures.append(what)

    def merge(self, other: "SuiteResult"):
        self.passed += other.passed
        self.failed += other.failed
        room = MAX_REPORTED - len(self.failures)
        self.failures.extend(other.failures[:room])

    def summary(self) -> str:
        status = "pass" if self.ok else "FAIL"
        m = self.mutation or "none"
        return f"{self.suite} (mutation {m}): {status}, {self.passed} passed, {self.failed} failed"

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "mutation": self.mutation,
            "passed": self.passed,
            "failed": self.failed,
            "failures": list(self.failures),
        }


# -- corpus access -----------------------------------------------------------------


def _data():
    return resources.files("bval").joinpath("data")


def load_unit_cases(text: str | None = None) -> list[TestCase]:
    if text is None:
        text = _data().joinpath("unit_cases.txt").read_text()
    cases = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        expect, _, pred = line.partition(" ")
        if expect not in ("true", "false", "undefined", "unknown"):
            raise ValueError(f"unit case on line {lineno}: unknown expectation {expect!r}")
        cases.append(TestCase(f"unit:{lineno}", pred.strip(), expect))
    return cases


def bundled_machines() -> list[tuple[str, str]]:
    folder = _data().joinpath("machines")
    files = sorted((f for f in folder.iterdir() if f.name.endswith(".mch")), key=lambda f: f.name)
    return [(f.name, f.read_text()) for f in files]


def corpus_texts() -> list[tuple[str, str, dict | None]]:
    """Every bundled input as (label, source text, typing environment)."""
    out = [(name, text, None) for name, text in bundled_machines()]
    for law in load_corpus():
        out.append((f"law {law.name}", law.text, law.typed.env))
    for case in load_unit_cases():
        out.append((case.name, case.text, None))
    return out


# -- running -----------------------------------------------------------------------------


def label(c: Classification) -> str:
    if c is Classification.NotWellDefined:
        return "undefined"
    return c.value


def run_cases(cases, result: SuiteResult, ctx: EvalContext, scope: Scope):
    for case in cases:
        try:
            got = label(evaluate(case.text, scope=scope, ctx=ctx).classification)
        except BError as exc:
            got = f"error: {exc}"
        result.record(got == case.expect, f"{case.name}: {case.text} expected {case.expect}, got {got}")
    return result


def _machines(result, ctx, scope):
    for name, text in bundled_machines():
        try:
            report = check_machine(parse_machine(text), scope, ctx)
        except BError as exc:
            result.record(False, f"{name}: {exc}")
            continue
        if report.status != "ok":
            result.record(False, f"{name}: {report.status}")
        for assertion, verdict in report.entries:
            result.record(verdict == "true", f"{name}: {assertion} == {verdict}")


def _roundtrip(result):
    for name, text, _ in corpus_texts():
        try:
            rep = roundtrip_check(text)
            result.record(rep.passed, f"{name}: {rep.divergence}")
        except BError as exc:
            result.record(False, f"{name}: {exc}")


def _crosscheck(result):
    for name, text, env in corpus_texts():
        rep = crosscheck_typing(text, env)
        result.record(rep.passed, f"{name}: {rep.status} at {rep.stage}: {rep.message}")


def run_suite(suite: str, mutation=None, scope: Scope = DEFAULT_SCOPE, coverage: Counter | None = None, jobs=1):
    """Run one suite with the kernel mutation ``mutation`` switched on.

    The mutation lives in a fresh evaluation context, so nothing needs to be
    restored afterwards.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    ctx = EvalContext(mutation=mutation, coverage=coverage)
    result = SuiteResult(suite, mutation)
    if suite == "unit":
        run_cases(load_unit_cases(), result, ctx, scope)
    elif suite == "generated":
        run_cases(generated_suite(scope), result, ctx, scope)
    elif suite == "laws":
        report = check_corpus(None, scope, jobs=jobs, mutation=mutation, coverage=coverage)
        for law, verdict in report.results:
            result.record(verdict.kind == "ok", f"{law.name}: {describe(verdict)}")
        for name, msg in report.errors:
            result.record(False, f"{name}: {msg}")
    elif suite == "machines":
        _machines(result, ctx, scope)
    elif suite == "roundtrip":
        _roundtrip(result)
    elif suite == "crosscheck":
        _crosscheck(result)
    else:
        for part in ("machines", "roundtrip", "crosscheck"):
            result.merge(run_suite(part, mutation, scope, coverage))
    return result


# -- mutation matrix -------------------------------------------------------------------


@dataclass
class MutationMatrix:
    suites: tuple
    rows: dict  # mutation -> {suite: SuiteResult}

    def detected(self, mutation) -> bool:
        return any(not r.ok for r in self.rows[mutation].values())

    def undetected(self) -> list:
        return [m for m in self.rows if not self.detected(m)]

    def cell(self, mutation, suite) -> str:
        return "Passed" if self.rows[mutation][suite].ok else "Failed"

    def text(self) -> str:
        names = {"unit": "Unit Tests", "generated": "Generated", "regression": "Regression", "laws": "Laws"}
        heads = [names.get(s, s) for s in self.suites]
        width = max(len(f"{m} {MUTATIONS[m]}") for m in self.rows)
        lines = ["Mutation".ljust(width) + "  " + "  ".join(h.ljust(10) for h in heads)]
        for m in self.rows:
            cells = [self.cell(m, s).ljust(max(10, len(h))) for s, h in zip(self.suites, heads)]
            lines.append(f"{m} {MUTATIONS[m]}".ljust(width) + "  " + "  ".join(cells))
        return "\n".join(line.rstrip() for line in lines) + "\n"

    def to_dict(self) -> dict:
        return {
            m: {s: {"result": self.cell(m, s), **r.to_dict()} for s, r in row.items()}
            for m, row in self.rows.items()
        }


def mutation_matrix(mutations=None, suites=MATRIX_SUITES, scope: Scope = DEFAULT_SCOPE, strict=True, jobs=1):
    """Run every suite under every mutation, one mutation at a time.

    With ``strict`` an :class:`UndetectedMutation` is raised when some
    mutation passes all suites; the matrix is attached to the exception.
    """
    mutations = list(MUTATIONS) if mutations is None else list(mutations)
    rows = {}
    for m in mutations:
        rows[m] = {s: run_suite(s, m, scope, jobs=jobs) for s in suites}
    matrix = MutationMatrix(tuple(suites), rows)
    missed = matrix.undetected()
    if strict and missed:
        exc = UndetectedMutation(missed[0])
        exc.matrix = matrix
        raise exc
    return matrix
