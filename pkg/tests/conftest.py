import pytest
from hypothesis import settings

from recip_sums.field import FieldContext, is_prime

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_PRIMES = [n for n in range(5, 60) if is_prime(n)]


@pytest.fixture
def ctx11():
    return FieldContext(11)


@pytest.fixture
def ctx7():
    return FieldContext(7)
