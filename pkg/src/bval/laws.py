"""Self-check against a corpus of mathematical laws.

Every law is a predicate over a few typed variables. Checking a law
enumerates all assignments of its variables within the scope and classifies
the law under each assignment with both evaluation chains; the first
assignment that does not come out true is reported.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core import DEFAULT_SCOPE, BoolT, EnumT, IntT, PowT, ProdT, Scope, SetV, enumerate_type
from .errors import BError, DuplicateLaw, ScopeOverflow
from .evaluate import Classification, Interpreter, _both, carrier_env, colex, format_env
from .kernel.context import EvalContext
from .kernel.lazy import SeqSet
from .syntax import parse_expr, parse_pred
from .syntax.ast import free_vars
from .typecheck import infer

CATEGORIES = (
    "booleans",
    "arithmetic",
    "sets",
    "relations",
    "functions",
    "sequences",
    "integer-ranges",
    "basic-integer-sets",
)

_SECTION = re.compile(r"^SECTION\s+(\S+)(?:\s+VARS\s+(.*))?$")
_LAW = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*==\s*(.+)$")


class CorpusError(BError):
    pass


@dataclass(frozen=True)
class LawVar:
    name: str
    type: object
    sequence: bool = False  # ranges over sequences only, not all of POW(INTEGER*T)


@dataclass
class Law:
    name: str
    category: str
    vars: tuple  # LawVar, in declaration order, restricted to those the body uses
    text: str
    line: int = 0
    decl: str = ""
    body: object = field(default=None, repr=False, compare=False)
    typed: object = field(default=None, repr=False, compare=False)


def _btype(node, seq_ok=True):
    k = node.kind
    if k == "INTEGER":
        return IntT(), False
    if k == "BOOL":
        return BoolT(), False
    if k == "ident":
        return EnumT(node.value), False
    if k == "pow":
        return PowT(_btype(node.children[0], False)[0]), False
    if k == "mul":
        return ProdT(_btype(node.children[0], False)[0], _btype(node.children[1], False)[0]), False
    if k == "seq" and seq_ok:
        return PowT(ProdT(IntT(), _btype(node.children[0], False)[0])), True
    raise CorpusError(f"unsupported variable type {k}")


def parse_vars(decl: str) -> list[LawVar]:
    out = []
    for item in filter(None, (s.strip() for s in decl.split(","))):
        name, _, texpr = item.partition(":")
        t, is_seq = _btype(parse_expr(texpr.strip()))
        out.append(LawVar(name.strip(), t, is_seq))
    return out


def _carriers(t, acc):
    if isinstance(t, EnumT):
        acc.add(t.name)
    elif isinstance(t, PowT):
        _carriers(t.inner, acc)
    elif isinstance(t, ProdT):
        _carriers(t.left, acc)
        _carriers(t.right, acc)


def make_law(name, category, decl, text, line=0, scope: Scope = DEFAULT_SCOPE) -> Law:
    declared = parse_vars(decl or "")
    body = parse_pred(text)
    used = free_vars(body)
    vars_ = tuple(v for v in declared if v.name in used)
    carriers = set()
    for v in declared:
        _carriers(v.type, carriers)
    ctypes, _ = carrier_env(carriers, scope)
    env = {**ctypes, **{v.name: v.type for v in declared}}
    typed = infer(body, env)
    return Law(name, category, vars_, text, line, decl or "", body, typed)


def load_corpus(path=None, text=None) -> list[Law]:
    """Load laws from ``path`` (default: the bundled corpus) or from ``text``."""
    if text is None:
        text = Path(path).read_text() if path is not None else bundled_corpus()
    laws, names = [], set()
    category, decl = None, ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION.match(line)
        if m:
            category, decl = m.group(1), m.group(2) or ""
            if category not in CATEGORIES:
                raise CorpusError(f"line {lineno}: unknown category {category}")
            continue
        m = _LAW.match(line)
        if not m:
            raise CorpusError(f"line {lineno}: expected 'name == predicate'")
        if category is None:
            raise CorpusError(f"line {lineno}: law outside a SECTION")
        name, body = m.groups()
        if name in names:
            raise DuplicateLaw(f"line {lineno}: duplicate law {name}")
        names.add(name)
        try:
            laws.append(make_law(name, category, decl, body.strip(), lineno))
        except BError as exc:
            raise CorpusError(f"law {name} (line {lineno}): {exc}") from exc
    return laws


def bundled_corpus() -> str:
    return resources.files("bval").joinpath("data/laws.txt").read_text()


# -- verdicts ----------------------------------------------------------------------


@dataclass
class NoCounterexample:
    count: int
    kind = "ok"


@dataclass
class Counterexample:
    env: dict
    classification: Classification
    kind = "counterexample"


@dataclass
class UndefinedAt:
    env: dict
    kind = "undefined"


@dataclass
class BugAt:
    env: dict
    kind = "bug"


@dataclass
class TimeoutAt:
    env: dict
    classification: Classification
    kind = "timeout"


def describe(v) -> str:
    if isinstance(v, NoCounterexample):
        return f"no counterexample ({v.count} cases)"
    env = format_env(v.env) or "(no variables)"
    return {
        "counterexample": "counterexample",
        "undefined": "not well-defined at",
        "bug": "both chains succeed at",
        "timeout": "timeout at",
    }[v.kind] + " " + env


def var_values(var: LawVar, scope: Scope, ctx) -> tuple:
    if var.sequence:
        elems = enumerate_type(var.type.inner.right, scope)
        return ctx.enumerate(SeqSet(SetV(elems), False, scope).candidates(ctx))
    return ctx.enumerate(enumerate_type(var.type, scope))


def case_count(law: Law, scope: Scope = DEFAULT_SCOPE) -> int:
    n = 1
    ctx = EvalContext()
    for v in law.vars:
        n *= len(var_values(v, scope, ctx))
    return n


def _verdict(r, env):
    c = r.classification
    if c is Classification.FalseP:
        return Counterexample(env, c)
    if c is Classification.NotWellDefined:
        return UndefinedAt(env)
    if c is Classification.BugBothTrueFalse:
        return BugAt(env)
    return TimeoutAt(env, c)


def check_law(law: Law, scope: Scope = DEFAULT_SCOPE, ctx=None, all_counterexamples=False, limit=10**7):
    """First assignment on which ``law`` is not true, or the number of cases.

    With ``all_counterexamples`` a list of every finding is returned instead.
    """
    ctx = ctx or EvalContext()
    lists = [var_values(v, scope, ctx) for v in law.vars]
    total = 1
    for values in lists:
        total *= len(values)
    if total > limit:
        raise ScopeOverflow(f"law {law.name} needs {total} cases")
    carriers = set()
    for t in law.typed.env.values():
        _carriers(t, carriers)
    _, cvalues = carrier_env(carriers, scope)
    interp = Interpreter(law.typed, ctx, scope)
    names = [v.name for v in law.vars]
    findings = []
    count = 0
    for combo in colex(lists):
        env = dict(zip(names, combo))
        r = _both(interp, law.body, {**cvalues, **env}, scope.fuel)
        count += 1
        if r.classification is not Classification.TrueP:
            if not all_counterexamples:
                return _verdict(r, env)
            findings.append(_verdict(r, env))
    if all_counterexamples:
        return findings
    return NoCounterexample(count)


# -- whole corpus ------------------------------------------------------------------


@dataclass
class CorpusReport:
    results: list  # (Law, verdict) in corpus order
    coverage: Counter | None = None
    errors: list = field(default_factory=list)  # (law name, message)

    @property
    def counterexamples(self):
        return [(law, v) for law, v in self.results if not isinstance(v, NoCounterexample)]

    @property
    def bug(self) -> bool:
        return any(isinstance(v, BugAt) for _, v in self.results)

    @property
    def cases(self) -> int:
        return sum(v.count for _, v in self.results if isinstance(v, NoCounterexample))

    @property
    def passed(self) -> bool:
        return not self.counterexamples and not self.errors

    def totals(self) -> dict:
        kinds = Counter(v.kind for _, v in self.results)
        return {
            "laws": len(self.results),
            "cases": self.cases,
            "passed": kinds["ok"],
            "counterexamples": kinds["counterexample"],
            "undefined": kinds["undefined"],
            "bugs": kinds["bug"],
            "timeouts": kinds["timeout"],
            "errors": len(self.errors),
        }

    def text(self) -> str:
        lines = [f"{law.name} [{law.category}]: {describe(v)}" for law, v in self.results]
        lines += [f"{name}: error: {msg}" for name, msg in self.errors]
        t = self.totals()
        lines.append(
            f"{t['laws']} laws, {t['cases']} cases, {t['counterexamples']} counterexamples, "
            f"{t['undefined']} undefined, {t['bugs']} bugs, {t['timeouts']} timeouts"
        )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        laws = []
        for law, v in self.results:
            entry = {"law": law.name, "category": law.category, "verdict": v.kind}
            if isinstance(v, NoCounterexample):
                entry["cases"] = v.count
            else:
                entry["env"] = format_env(v.env)
            laws.append(entry)
        errors = [{"law": n, "error": m} for n, m in self.errors]
        return json.dumps({"laws": laws, "errors": errors, "totals": self.totals()}, indent=2)


def _check_one(law, scope, ctx):
    try:
        return check_law(law, scope, ctx), None
    except BError as exc:
        return None, str(exc)


def _worker(sources, scope, mutation, with_coverage):
    ctx = EvalContext(mutation=mutation, coverage=Counter() if with_coverage else None)
    out = []
    for name, category, decl, text in sources:
        law = make_law(name, category, decl, text, scope=scope)
        out.append(_check_one(law, scope, ctx))
    return out, ctx.coverage


def check_corpus(corpus=None, scope: Scope = DEFAULT_SCOPE, jobs=1, mutation=None, coverage=None):
    """Check every law; the report does not depend on ``jobs``.

    ``coverage`` may be a Counter that receives the branch hits of all runs.
    """
    laws = load_corpus() if corpus is None else corpus
    results, errors = [], []
    if jobs <= 1 or len(laws) < 2:
        ctx = EvalContext(mutation=mutation, coverage=coverage)
        outcomes = [_check_one(law, scope, ctx) for law in laws]
    else:
        chunks = [laws[i::jobs] for i in range(jobs)]
        outcomes_by_law = {}
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(
                    _worker,
                    [(l.name, l.category, l.decl, l.text) for l in chunk],
                    scope,
                    mutation,
                    coverage is not None,
                )
                for chunk in chunks
            ]
            for chunk, fut in zip(chunks, futures):
                res, cov = fut.result()
                for law, r in zip(chunk, res):
                    outcomes_by_law[law.name] = r
                if coverage is not None:
                    coverage.update(cov)
        outcomes = [outcomes_by_law[law.name] for law in laws]
    for law, (verdict, err) in zip(laws, outcomes):
        if err is not None:
            errors.append((law.name, err))
        else:
            results.append((law, verdict))
    return CorpusReport(results, coverage, errors)
