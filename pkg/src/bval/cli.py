"""Command-line entry point: ``bval <command> ...``.

Exit status: 0 when a command found nothing wrong, 1 when it reports
findings (failures, bugs, counterexamples, rejected input), 2 on usage or
I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .core import DEFAULT_SCOPE, Scope, value_str
from .errors import BError, TypeCheckError, UndetectedMutation, UnknownMutation
from .evaluate import Classification, check_machine, eval_expr, evaluate, format_env, solve
from .harness import coverage_report, gen_unit_tests, mutation_matrix, run_suite
from .harness.gen import seed_from_text
from .harness.suites import SUITES, label
from .kernel.context import MUTATIONS, EvalContext
from .laws import check_corpus, check_law, load_corpus
from .syntax import Machine, is_pred, parse_any, parse_machine, pretty_print, roundtrip_check
from .typecheck import CrossReport, crosscheck_typing, infer

OK, FINDINGS, USAGE = 0, 1, 2

CONFIG_KEYS = {"scope", "int", "fuel", "max-card", "json", "jobs", "mutation", "out", "external-typecheck"}


class UsageError(Exception):
    pass


@dataclass
class Config:
    carriers: dict = field(default_factory=dict)
    int_lo: int = DEFAULT_SCOPE.int_lo
    int_hi: int = DEFAULT_SCOPE.int_hi
    fuel: int = DEFAULT_SCOPE.fuel
    max_card: int = DEFAULT_SCOPE.max_set_card
    json: bool = False
    jobs: int = 1
    mutation: str | None = None
    out: str = "coverage-report"
    external_typecheck: str | None = None

    def scope(self) -> Scope:
        try:
            return Scope(
                carriers=self.carriers,
                int_lo=self.int_lo,
                int_hi=self.int_hi,
                max_set_card=self.max_card,
                fuel=self.fuel,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc

    def context(self) -> EvalContext:
        return EvalContext(mutation=self.mutation)

    def apply(self, key: str, value):
        """Set one option given as text (config file) or parsed flag value."""
        if key not in CONFIG_KEYS:
            raise UsageError(f"unknown option {key}")
        try:
            if key == "scope":
                for item in value if isinstance(value, list) else str(value).split(","):
                    name, _, size = item.partition("=")
                    self.carriers[name.strip()] = int(size)
            elif key == "int":
                lo, _, hi = str(value).partition(":")
                self.int_lo, self.int_hi = int(lo), int(hi)
            elif key == "fuel":
                self.fuel = int(value)
            elif key == "max-card":
                self.max_card = int(value)
            elif key == "json":
                self.json = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
            elif key == "jobs":
                self.jobs = int(value)
            elif key == "mutation":
                if value not in MUTATIONS:
                    raise UsageError(f"unknown mutation {value}; known: {', '.join(MUTATIONS)}")
                self.mutation = value
            elif key == "out":
                self.out = str(value)
            else:
                self.external_typecheck = str(value)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {value!r}") from exc


def read_config(path) -> dict:
    settings = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key = key.strip()
        if key == "scope":
            settings.setdefault("scope", []).extend(v.strip() for v in value.split(","))
        else:
            settings[key] = value.strip()
    return settings


def build_config(args) -> Config:
    cfg = Config()
    if args.config:
        for key, value in read_config(args.config).items():
            cfg.apply(key, value)
    flags = {
        "scope": args.scope,
        "int": args.int,
        "fuel": args.fuel,
        "max-card": args.max_card,
        "json": args.json or None,
        "jobs": args.jobs,
        "mutation": args.mutation,
        "out": args.out,
        "external-typecheck": args.external_typecheck,
    }
    for key, value in flags.items():
        if value is not None:
            cfg.apply(key, value)
    return cfg


# -- helpers -----------------------------------------------------------------------


def read_input(arg: str) -> str:
    """``-`` reads stdin, an existing path reads the file, anything else is source text."""
    if arg == "-":
        return sys.stdin.read()
    p = Path(arg)
    try:
        is_file = p.is_file()
    except OSError:  # e.g. a long formula is not a valid file name
        is_file = False
    if is_file or p.suffix in (".mch", ".txt"):
        return p.read_text()
    return arg


def emit(cfg: Config, payload, text: str):
    if cfg.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def tree(node):
    if isinstance(node, Machine):
        return {
            "machine": node.name,
            "sets": [[n, list(e)] for n, e in node.sets],
            "constants": list(node.constants),
            "properties": tree(node.properties),
            "assertions": [tree(a) for a in node.assertions],
        }
    out = {"kind": node.kind, "pos": list(node.pos)}
    if node.value is not None:
        out["value"] = list(node.value) if isinstance(node.value, tuple) else node.value
    if node.children:
        out["children"] = [tree(c) for c in node.children]
    return out


# -- commands ----------------------------------------------------------------------


def cmd_parse(args, cfg):
    ast = parse_any(read_input(args.input))
    emit(cfg, tree(ast), repr(ast))
    return OK


def cmd_pp(args, cfg):
    text = pretty_print(parse_any(read_input(args.input)))
    emit(cfg, {"text": text}, text)
    return OK


def cmd_typecheck(args, cfg):
    ast = parse_any(read_input(args.input))
    if isinstance(ast, Machine):
        rep = crosscheck_typing(ast, external_cmd=cfg.external_typecheck)
    else:
        # free identifiers get the types their uses imply, as eval does
        try:
            env = infer(ast, free_as_vars=True).env
        except TypeCheckError as exc:
            rep = CrossReport("not-applicable", "infer", str(exc))
        else:
            rep = crosscheck_typing(ast, env=env, external_cmd=cfg.external_typecheck)
    lines = [f"cross-check: {rep.status}"]
    if rep.stage:
        lines.append(f"stage: {rep.stage}: {rep.message}")
    if rep.typed_text:
        lines.append(rep.typed_text.rstrip("\n"))
    if rep.external_status is not None:
        lines.append(f"external checker exit status: {rep.external_status}")
    payload = {
        "status": rep.status,
        "stage": rep.stage,
        "message": rep.message,
        "typed": rep.typed_text,
        "external_status": rep.external_status,
    }
    emit(cfg, payload, "\n".join(lines))
    return OK if rep.passed else FINDINGS


def _verdict_line(r) -> str:
    return f"positive: {r.pos.value}, negative: {r.neg.value} => {r.classification.name} ({r.classification.verdict})"


def cmd_eval(args, cfg):
    scope, ctx = cfg.scope(), cfg.context()
    ast = parse_any(read_input(args.formula))
    if isinstance(ast, Machine):
        raise UsageError("eval takes a predicate or expression; use check-machine for machines")
    if not is_pred(ast):
        v = eval_expr(ast, scope=scope, ctx=ctx)
        emit(cfg, {"value": value_str(v)}, value_str(v))
        return OK
    sols = solve(ast, scope=scope, ctx=ctx)
    if not sols.vars:
        r = evaluate(ast, scope=scope, ctx=ctx)
        payload = {
            "positive": r.pos.value,
            "negative": r.neg.value,
            "classification": r.classification.name,
            "verdict": r.classification.verdict,
        }
        text = _verdict_line(r)
        if r.undefined:
            payload["reason"] = r.undefined
            text += f"\nreason: {r.undefined}"
        emit(cfg, payload, text)
        return FINDINGS if r.classification in (Classification.BugBothTrueFalse, Classification.NotWellDefined) else OK
    # free identifiers are solver variables: true if some binding makes it true
    first = next(iter(sols), None)
    if first is not None:
        verdict, binding, code = "true", first, OK
    elif sols.undefined:
        verdict, binding, code = "unknown / not well-defined", sols.undefined[0], FINDINGS
    else:
        verdict, binding, code = "false", None, OK
    payload = {"verdict": verdict, "binding": format_env(binding) if binding else None, "checked": sols.checked}
    text = verdict + (f"\nbinding: {format_env(binding)}" if binding else "")
    emit(cfg, payload, text)
    return code


def cmd_solve(args, cfg):
    scope, ctx = cfg.scope(), cfg.context()
    names = None
    if args.vars:
        names = [v for part in args.vars for v in part.replace(",", " ").split()]
    sols = solve(read_input(args.formula), names, scope=scope, ctx=ctx)
    found = []
    for s in sols:
        found.append(format_env(s))
        if len(found) >= args.limit:
            break
    undefined = [format_env(u) for u in sols.undefined]
    lines = [f"solution: {s}" for s in found] or ["no solution"]
    lines += [f"not well-defined at: {u}" for u in undefined]
    emit(cfg, {"solutions": found, "undefined": undefined, "checked": sols.checked}, "\n".join(lines))
    return OK


def cmd_check_machine(args, cfg):
    report = check_machine(parse_machine(read_input(args.file)), cfg.scope(), cfg.context())
    payload = {
        "machine": report.name,
        "status": report.status,
        "binding": format_env(report.binding) if report.binding else None,
        "assertions": [{"assertion": a, "verdict": v} for a, v in report.entries],
    }
    emit(cfg, payload, report.text())
    return FINDINGS if report.failures else OK


def cmd_check_laws(args, cfg):
    corpus = load_corpus(args.corpus) if args.corpus else None
    if args.all_counterexamples:
        return _all_counterexamples(corpus or load_corpus(), cfg)
    report = check_corpus(corpus, cfg.scope(), jobs=cfg.jobs, mutation=cfg.mutation)
    emit(cfg, json.loads(report.to_json()), report.text())
    return OK if report.passed else FINDINGS


def _all_counterexamples(corpus, cfg):
    scope, found = cfg.scope(), []
    for law in corpus:
        ctx = cfg.context()
        for v in check_law(law, scope, ctx, all_counterexamples=True):
            found.append({"law": law.name, "verdict": v.kind, "env": format_env(v.env)})
    lines = [f"{f['law']}: {f['verdict']} at {f['env'] or '(no variables)'}" for f in found]
    lines.append(f"{len(corpus)} laws, {len(found)} findings")
    emit(cfg, {"findings": found, "laws": len(corpus)}, "\n".join(lines))
    return FINDINGS if found else OK


def _roundtrip_sources(path: Path):
    if path.is_dir():
        for f in sorted(path.rglob("*.mch")):
            yield str(f), f.read_text()
    else:
        yield str(path), path.read_text()


def cmd_roundtrip(args, cfg):
    if args.path is None:
        result = run_suite("roundtrip", scope=cfg.scope())
        emit(cfg, result.to_dict(), result.summary() + "".join(f"\n  {f}" for f in result.failures))
        return OK if result.ok else FINDINGS
    path = Path(args.path)
    if not path.exists():
        raise OSError(f"no such file or directory: {path}")
    entries, failed = [], 0
    for name, text in _roundtrip_sources(path):
        try:
            rep = roundtrip_check(text)
            entry = {"file": name, "passed": rep.passed, "divergence": rep.divergence}
        except BError as exc:
            entry = {"file": name, "passed": False, "divergence": f"parse error: {exc}"}
        failed += not entry["passed"]
        entries.append(entry)
    lines = [f"{e['file']}: {'pass' if e['passed'] else 'FAIL ' + str(e['divergence'])}" for e in entries]
    lines.append(f"{len(entries) - failed} passed, {failed} failed")
    emit(cfg, {"files": entries, "failed": failed}, "\n".join(lines))
    return FINDINGS if failed else OK


def cmd_gen_tests(args, cfg):
    scope, ctx = cfg.scope(), cfg.context()
    gen = gen_unit_tests(seed_from_text(args.seed, scope), scope)
    rows, failed = [], 0
    for case in gen.tests:
        got = label(evaluate(case.text, scope=scope, ctx=ctx).classification)
        failed += got != "true"
        rows.append({"name": case.name, "text": case.text, "result": got})
    lines = [f"{r['result']:<9} {r['text']}" for r in rows]
    lines.append(", ".join(f"{k}: {v}" for k, v in gen.counts.items()) + f", failed: {failed}")
    emit(cfg, {"tests": rows, "counts": gen.counts, "failed": failed}, "\n".join(lines))
    return FINDINGS if failed else OK


def cmd_mutate(args, cfg):
    if args.id not in MUTATIONS:
        raise UsageError(f"unknown mutation {args.id}; known: {', '.join(MUTATIONS)}")
    result = run_suite(args.suite, args.id, cfg.scope(), jobs=cfg.jobs)
    emit(cfg, result.to_dict(), result.summary() + "".join(f"\n  {f}" for f in result.failures))
    return OK if result.ok else FINDINGS


def cmd_matrix(args, cfg):
    try:
        matrix = mutation_matrix(scope=cfg.scope(), jobs=cfg.jobs)
        code = OK
    except UndetectedMutation as exc:
        matrix, code = exc.matrix, FINDINGS
    text = matrix.text()
    missed = matrix.undetected()
    if missed:
        text += f"undetected: {', '.join(missed)}\n"
    emit(cfg, {"matrix": matrix.to_dict(), "undetected": missed}, text)
    return code


def cmd_coverage(args, cfg):
    runs = [r for r in args.runs.split(",") if r] if args.runs else []
    for r in runs:
        if r not in SUITES:
            raise UsageError(f"unknown suite {r}")
    report, results = coverage_report(runs, cfg.scope(), cfg.mutation)
    paths = report.write(cfg.out)
    text = report.text() + "".join(r.summary() + "\n" for r in results)
    text += "written: " + ", ".join(str(p) for p in paths)
    payload = json.loads(report.to_json())
    payload["suites"] = [r.to_dict() for r in results]
    emit(cfg, payload, text)
    bad = report.internal_hits > 0 or any(not r.ok for r in results)
    return FINDINGS if bad else OK


# -- argument parsing ------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("options")
    g.add_argument("--scope", action="append", metavar="CARRIER=N", help="size of a carrier set (repeatable)")
    g.add_argument("--int", metavar="LO:HI", help="integer enumeration bounds, e.g. --int=-3:3")
    g.add_argument("--fuel", type=int, metavar="N", help="evaluation step budget")
    g.add_argument("--max-card", type=int, metavar="N", help="largest enumerated set")
    g.add_argument("--json", action="store_true", default=None, help="machine-readable output")
    g.add_argument("--jobs", type=int, metavar="N", help="worker processes for check-laws")
    g.add_argument("--mutation", metavar="ID", help="switch on a kernel mutation (M1..M5)")
    g.add_argument("--out", metavar="DIR", help="output directory for coverage reports")
    g.add_argument("--external-typecheck", metavar="CMD", help="pipe typed output to CMD")
    g.add_argument("--config", metavar="FILE", help="key=value settings; flags take precedence")

    parser = argparse.ArgumentParser(prog="bval", description="Self-validating B set-theory evaluator.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, "print the syntax tree").add_argument("input", help="text, file or -")
    add("pp", cmd_pp, "pretty-print").add_argument("input", help="text, file or -")
    add("typecheck", cmd_typecheck, "infer types and run the typed cross-check").add_argument("input")
    add("eval", cmd_eval, "classify a predicate with both evaluation chains").add_argument("formula")
    p = add("solve", cmd_solve, "enumerate satisfying assignments")
    p.add_argument("formula")
    p.add_argument("vars", nargs="*", help="variables to solve for (default: all free)")
    p.add_argument("--limit", type=int, default=10, help="stop after this many solutions")
    add("check-machine", cmd_check_machine, "check the assertions of a machine file").add_argument("file")
    p = add("check-laws", cmd_check_laws, "search counterexamples to the law corpus")
    p.add_argument("corpus", nargs="?", help="law file (default: bundled corpus)")
    p.add_argument("--all-counterexamples", action="store_true", help="report every failing case")
    add("roundtrip", cmd_roundtrip, "parse/print/parse/print validation").add_argument(
        "path", nargs="?", help="file or directory of .mch files (default: bundled corpus)"
    )
    add("gen-tests", cmd_gen_tests, "generate and run unit tests from a seed fact").add_argument(
        "seed", help="e.g. '{1} \\/ {2} = {1,2}'"
    )
    p = add("mutate", cmd_mutate, "run one suite with a kernel mutation")
    p.add_argument("--id", required=True, help="mutation id (M1..M5)")
    p.add_argument("suite", choices=SUITES)
    add("matrix", cmd_matrix, "run every suite under every mutation")
    add("coverage", cmd_coverage, "kernel branch coverage report").add_argument(
        "--runs", default="unit,generated,laws", help="comma-separated suites"
    )
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        cfg = build_config(args)
        return args.func(args, cfg)
    except (UsageError, UnknownMutation) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except BError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FINDINGS


if __name__ == "__main__":
    sys.exit(main())
