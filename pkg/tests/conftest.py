from __future__ import annotations

import json
from pathlib import Path

import pytest

from divsum.exact import ComplexQ, parse_scalar
from divsum.genfun import RationalGF

GOLDEN = Path(__file__).parent / "golden"
ACCEPTANCE_LINES: list[str] = []
CIRCLE_EPS = "3/5+4/5i"


@pytest.fixture(scope="session")
def derived() -> dict:
    """Frozen reference values from tests/oracles/derive.py."""
    return json.loads((GOLDEN / "derived.json").read_text())


def q(text: str) -> ComplexQ:
    return parse_scalar(text)


def alternating() -> RationalGF:
    return RationalGF.alternating()


def half() -> RationalGF:
    """(z/2)/(1 - z/2): pole at 2, outside the unit circle."""
    return RationalGF.geometric("1/2")


def circle() -> RationalGF:
    """eps z/(1 - eps z) with |eps| = 1: simple pole 1/eps = 3/5-4/5i on the circle."""
    return RationalGF.geometric(CIRCLE_EPS)


FIXTURES = {"z/(1+z)": alternating, "(z/2)/(1-z/2)": half, f"eps z/(1-eps z), eps={CIRCLE_EPS}": circle}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
