"""Branch coverage of the kernel operator catalog."""

from __future__ import annotations

import html
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from ..core import DEFAULT_SCOPE, Scope
from ..kernel.context import CATALOG


@dataclass(frozen=True)
class CoverageRecord:
    op: str
    branch: str
    hits: int
    internal: bool


@dataclass
class CoverageReport:
    records: list
    runs: tuple = ()

    def _normal(self):
        return [r for r in self.records if not r.internal]

    @property
    def total(self) -> int:
        return len(self._normal())

    @property
    def covered(self) -> int:
        return sum(1 for r in self._normal() if r.hits > 0)

    @property
    def percent(self) -> float:
        return 100.0 * self.covered / self.total if self.total else 0.0

    @property
    def internal_hits(self) -> int:
        return sum(r.hits for r in self.records if r.internal)

    @property
    def internal_branches(self) -> int:
        return sum(1 for r in self.records if r.internal)

    def per_module(self) -> dict:
        out = {}
        for r in self._normal():
            module = CATALOG[r.op].module
            covered, total = out.get(module, (0, 0))
            out[module] = (covered + (r.hits > 0), total + 1)
        return out

    def uncovered(self) -> list:
        return [(r.op, r.branch) for r in self._normal() if r.hits == 0]

    def text(self) -> str:
        lines = [f"kernel branch coverage ({', '.join(self.runs) or 'no runs'})"]
        for module, (c, t) in sorted(self.per_module().items()):
            lines.append(f"  {module:<12} {c:>3}/{t:<3} {100.0 * c / t:6.1f}%")
        lines.append(f"  {'total':<12} {self.covered:>3}/{self.total:<3} {self.percent:6.1f}%")
        lines.append(
            f"internal-error branches: {self.internal_branches} (excluded), hits: {self.internal_hits}"
        )
        for op, branch in self.uncovered():
            lines.append(f"  not covered: {op}.{branch}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "runs": list(self.runs),
                "covered": self.covered,
                "total": self.total,
                "percent": round(self.percent, 2),
                "internal_hits": self.internal_hits,
                "modules": {m: {"covered": c, "total": t} for m, (c, t) in self.per_module().items()},
                "branches": [
                    {"op": r.op, "branch": r.branch, "hits": r.hits, "internal": r.internal}
                    for r in self.records
                ],
            },
            indent=2,
        )

    def html(self) -> str:
        rows = []
        for op, info in CATALOG.items():
            recs = [r for r in self.records if r.op == op]
            normal = [r for r in recs if not r.internal]
            hit = sum(1 for r in normal if r.hits)
            if normal and hit == len(normal):
                colour = "#c8f7c5"
            elif hit:
                colour = "#fff3b0"
            else:
                colour = "#f7c5c5"
            cells = ", ".join(
                f"{html.escape(r.branch)}{' (internal)' if r.internal else ''}: {r.hits}" for r in recs
            )
            rows.append(
                f'<tr style="background:{colour}"><td>{html.escape(info.module)}</td>'
                f"<td>{html.escape(op)}</td><td>{hit}/{len(normal)}</td><td>{cells}</td></tr>"
            )
        return (
            "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Kernel coverage</title></head><body>\n"
            f"<h1>Kernel branch coverage: {self.covered}/{self.total} ({self.percent:.1f}%)</h1>\n"
            f"<p>Runs: {html.escape(', '.join(self.runs) or 'none')}. "
            f"Internal-error branch hits: {self.internal_hits}.</p>\n"
            "<table border=\"1\" cellspacing=\"0\" cellpadding=\"3\">\n"
            "<tr><th>module</th><th>operator</th><th>covered</th><th>branches (hits)</th></tr>\n"
            + "\n".join(rows)
            + "\n</table>\n</body></html>\n"
        )

    def write(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / "coverage.txt", out / "coverage.json", out / "coverage.html"]
        paths[0].write_text(self.text())
        paths[1].write_text(self.to_json())
        paths[2].write_text(self.html())
        return paths


def report_from_counter(counter: Counter, runs=()) -> CoverageReport:
    records = []
    for op, info in CATALOG.items():
        for branch in info.branches:
            records.append(CoverageRecord(op, branch, counter.get((op, branch), 0), branch in info.internal))
    return CoverageReport(records, tuple(runs))


def coverage_report(runs=("unit", "generated", "laws"), scope: Scope = DEFAULT_SCOPE, mutation=None):
    """Run the given suites on one shared branch counter and summarize it."""
    from .suites import run_suite

    counter = Counter()
    results = [run_suite(s, mutation, scope, coverage=counter) for s in runs]
    return report_from_counter(counter, runs), results
