import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

# make the oracle helpers importable as a plain module
sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Time a block and log one pass/fail line for the terminal summary."""
    log = request.config.stash.setdefault(ACCEPTANCE, [])

    @contextmanager
    def run(number, title):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {time.perf_counter() - start:7.2f}s  {title}"
            log.append((number, line))
            print(line)

    return run


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(ACCEPTANCE, [])
    if log:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(log):
            terminalreporter.write_line(line)
