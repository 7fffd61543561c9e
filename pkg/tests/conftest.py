import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from etfkit.etf import etf_from_seidel  # noqa: E402
from etfkit.seidel import FIXTURE_NAMES, fixture, paley_skew_seidel, trivial_seidel  # noqa: E402


def etf_inventory():
    """Every ETF Seidel matrix the suite knows about, by label."""
    inv = {name: fixture(name) for name in FIXTURE_NAMES}
    for q in (3, 7, 11):
        inv[f"paley-{q + 1}"] = paley_skew_seidel(q)
    for n in range(3, 10):
        inv[f"trivial-{n}-1"] = trivial_seidel(n, 1)
        inv[f"trivial-{n}-{n - 1}"] = trivial_seidel(n, n - 1)
    return inv


INVENTORY = etf_inventory()


@pytest.fixture(scope="session")
def inventory():
    return INVENTORY


@pytest.fixture(scope="session")
def frames():
    """label -> (params, gram, analysis operator)."""
    return {label: etf_from_seidel(q) for label, q in INVENTORY.items()}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
