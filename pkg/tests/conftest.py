from __future__ import annotations

import pytest

from normone.acceptance import units_for


@pytest.fixture(scope="session")
def sqrt2():
    return units_for("sqrt2").field


@pytest.fixture(scope="session")
def U2():
    return units_for("sqrt2")


@pytest.fixture(scope="session")
def U3():
    return units_for("sqrt3")


@pytest.fixture(scope="session")
def Ucubic():
    return units_for("cubic13")
