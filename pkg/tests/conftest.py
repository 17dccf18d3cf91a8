import mpmath as mp
import pytest
from hypothesis import settings

settings.register_profile("repo", max_examples=25, deadline=None)
settings.load_profile("repo")


@pytest.fixture(autouse=True)
def _mp_precision():
    with mp.workdps(64):
        yield
