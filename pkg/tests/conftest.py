import time
from collections import defaultdict
from contextlib import contextmanager

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Context manager that times one acceptance criterion (or one part of it) and records the outcome.

    The runtime budget is part of the criterion, so overrunning it fails the test.
    """
    records = request.config.stash[ACCEPTANCE]

    @contextmanager
    def run(number: int, title: str, budget: float, part: str = ""):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            records.append((number, title, part, ok and elapsed <= budget, elapsed, budget))
        assert elapsed <= budget, f"criterion {number} took {elapsed:.1f} s (budget {budget:.0f} s)"

    return run


def pytest_terminal_summary(terminalreporter, config):
    records = config.stash.get(ACCEPTANCE, [])
    if not records:
        return
    grouped = defaultdict(list)
    for rec in records:
        grouped[rec[0]].append(rec)
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(grouped):
        parts = grouped[number]
        title, budget = parts[0][1], parts[0][5]
        total = sum(p[4] for p in parts)
        ok = all(p[3] for p in parts) and total <= budget
        failed = [p[2] or "main" for p in parts if not p[3]]
        note = f"  [failing part: {', '.join(failed)}]" if failed else ""
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {title} ({total:.1f} s of {budget:.0f} s){note}")
