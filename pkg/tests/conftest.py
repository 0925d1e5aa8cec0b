from __future__ import annotations

import pytest

from cutproject.exact_reals import RealField


@pytest.fixture(scope="session")
def q2():
    return RealField([1, 0, -2], "1.41")


@pytest.fixture(scope="session")
def q5():
    return RealField([1, 0, -5], "2.23")


@pytest.fixture(scope="session")
def cubic():
    return RealField([1, 0, 0, -2], "1.26")
