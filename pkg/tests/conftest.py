"""Shared fixtures: reference-table parsing and the acceptance summary."""

import re
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
REFERENCE = ROOT / "paper.md"

_TABLE_CAPTION = re.compile(r"approximate the function \$\(1\+z\)\^\{([-0-9/]+)\}\$")


def reference_pade_tables():
    """``{gamma: {M: (a0, a, b)}}`` read from the tabular environments of paper.md."""
    text = REFERENCE.read_text()
    tables = {}
    for block in text.split(r"\begin{table}")[1:]:
        m = _TABLE_CAPTION.search(block)
        if not m:
            continue
        gamma = Fraction(m.group(1))
        rows = {}
        for line in block.split("\n"):
            cells = [c.strip() for c in line.rstrip("\\ ").split("&")]
            if len(cells) != 10 or not cells[0].isdigit():
                continue
            M = int(cells[0])
            a0 = float(cells[1])
            a = tuple(float(c) for c in cells[2:6] if c)
            b = tuple(float(c) for c in cells[6:10] if c)
            rows[M] = (a0, a, b)
        tables[gamma] = rows
    return tables


@pytest.fixture(scope="session")
def reference_tables():
    if not REFERENCE.exists():
        pytest.skip("paper.md not available")
    return reference_pade_tables()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_TABLE1_ROW = re.compile(r"^\$(\d)\$\s*&(.*)\\\\\s*$")


def reference_residual_table():
    """``({M: [percent at 20pi, 40pi, 80pi, 160pi]}, {M: row order}, diagonal order)``."""
    text = REFERENCE.read_text()
    block = text.split(r"\label{tab:table1}")[1].split(r"\end{tabular}")[0]
    values, orders, diagonal = {}, {}, None
    for line in block.split("\n"):
        line = line.strip()
        m = _TABLE1_ROW.match(line)
        if m:
            cells = [float(c.strip().strip("$")) for c in m.group(2).split("&")]
            values[int(m.group(1))] = cells[:4]
            orders[int(m.group(1))] = cells[4]
        elif "Observed order along the diagonal" in line:
            diagonal = float(line.split("&")[-1].strip().strip("\\").strip().strip("$"))
    return values, orders, diagonal


@pytest.fixture(scope="session")
def reference_table1():
    if not REFERENCE.exists():
        pytest.skip("paper.md not available")
    return reference_residual_table()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
