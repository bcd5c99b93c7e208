"""Shared fixtures and the acceptance-criteria summary hook."""

from __future__ import annotations

from typing import List, Tuple

import pytest

from cyclosc import IntegratorConfig

# (criterion number, passed, one-line detail); filled by test_acceptance.py.
ACCEPTANCE_LINES: List[Tuple[int, bool, str]] = []


@pytest.fixture(scope="session")
def tight_cfg() -> IntegratorConfig:
    """Integrator settings for oracle-grade reference solutions."""
    return IntegratorConfig(rtol=1e-12, atol=1e-14)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_LINES):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {status}: {detail}")
