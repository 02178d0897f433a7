import pytest

from kelvinwake.oracle import EvalPoint


@pytest.fixture(scope="session")
def pt_m8():
    """x = 0.40, rho = 0.005: M = 8."""
    return EvalPoint(0.4, 0.005, 0.0)


@pytest.fixture(scope="session")
def pt_m125():
    """x = 1.00, rho = 0.020: M = 12.5."""
    return EvalPoint(1.0, 0.02, 0.0)
