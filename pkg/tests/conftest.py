import pytest
from hypothesis import settings

from nodalcy.hypersurface import schoen_family
from nodalcy.smoothing import space_I

settings.register_profile("repro", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def schoen3():
    return schoen_family(3)


@pytest.fixture(scope="session")
def schoen3_I(schoen3):
    return space_I(schoen3)
