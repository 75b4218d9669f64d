import numpy as np
import pytest


def random_states(seed, n, box=5.0, min_sep=0.1, accept=None, sort=False):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        x = rng.uniform(-box, box, 3)
        if sort:
            x = np.sort(x)[::-1]
        gaps = (abs(x[0] - x[1]), abs(x[1] - x[2]), abs(x[0] - x[2]))
        if min(gaps) < min_sep or (accept is not None and not accept(x)):
            continue
        out.append(x.astype(complex))
    return out


@pytest.fixture
def states():
    return random_states


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record and print one pass/fail line per acceptance criterion."""

    def emit(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
