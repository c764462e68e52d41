"""Generated unit tests, suites, the mutation matrix and coverage reports."""

from .coverage import CoverageRecord, CoverageReport, coverage_report, report_from_counter
from .gen import SEEDS, SeedFact, TestCase, gen_unit_tests, generated_suite
from .suites import (
    MATRIX_SUITES,
    SUITES,
    MutationMatrix,
    SuiteResult,
    bundled_machines,
    load_unit_cases,
    mutation_matrix,
    run_suite,
)

__all__ = [
    "MATRIX_SUITES",
    "SEEDS",
    "SUITES",
    "CoverageRecord",
    "CoverageReport",
    "MutationMatrix",
    "SeedFact",
    "SuiteResult",
    "TestCase",
    "bundled_machines",
    "coverage_report",
    "gen_unit_tests",
    "generated_suite",
    "load_unit_cases",
    "mutation_matrix",
    "report_from_counter",
    "run_suite",
]
