from fractions import Fraction
from pathlib import Path

import pytest

from coxdeform.deformation import example_fiber, example_path_fiber, example_polytope

DATA = Path(__file__).resolve().parents[1] / "src" / "coxdeform" / "data" / "examples"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def ex71():
    return example_polytope("7.1")


@pytest.fixture(scope="session")
def ex72():
    return example_polytope("7.2")


@pytest.fixture(scope="session")
def fiber71():
    return example_fiber("7.1")


@pytest.fixture(scope="session")
def fiber72():
    return example_fiber("7.2")


@pytest.fixture(scope="session")
def path72():
    return example_path_fiber()


F = Fraction


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
