"""Shared fixtures.

Functor and basis construction is memoized inside the library, so tests
funnel through one resolver to share caches across files in a session.
"""

import pytest

from burnside import jobs


@pytest.fixture(scope="session")
def make_functor():
    return jobs.resolve_functor


@pytest.fixture(scope="session")
def make_group():
    return jobs.resolve_group


DESK_GROUPS = ("C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8", "C6", "A4")
FUNCTOR_KINDS = ("trivial", "slice", "conormal")
PRIMES = ("2", "3", "inf")
