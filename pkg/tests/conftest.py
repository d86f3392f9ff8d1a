import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from padestieltjes import generate_pt_cubic, generate_quartic  # noqa: E402

FULL_ORDER = 193


@pytest.fixture(scope="session")
def cubic():
    return generate_pt_cubic(FULL_ORDER)


@pytest.fixture(scope="session")
def quartic():
    return generate_quartic(FULL_ORDER)


@pytest.fixture(scope="session")
def both(cubic, quartic):
    return {"pt-cubic": cubic, "quartic": quartic}


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, detail = RESULTS[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
