from __future__ import annotations

import pytest

from treepump import parse_dta

from helpers import L3_TEXT, PARITY_TEXT


@pytest.fixture(scope="session")
def l3():
    """Accepts every unary chain g^n(a)."""
    return parse_dta(L3_TEXT)


@pytest.fixture(scope="session")
def parity():
    """Accepts trees over f/g/a with an even number of a-leaves."""
    return parse_dta(PARITY_TEXT)


@pytest.fixture()
def l3_file(tmp_path):
    path = tmp_path / "l3.dta"
    path.write_text(L3_TEXT)
    return str(path)


@pytest.fixture()
def parity_file(tmp_path):
    path = tmp_path / "parity.dta"
    path.write_text(PARITY_TEXT)
    return str(path)
