"""pytest configuration and fixtures for brmult tests."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from brmult import Bounds, MIdeal, Poly, PolyRing, RationalField, Submodule
from brmult.icmod import ICModuleSpec
from tests.fixture_loader import FIXTURES_DIR

settings.register_profile(
    "brmult",
    derandomize=True,
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("brmult")


@pytest.fixture
def ring() -> PolyRing:
    """k[x, y] over F_32003."""
    return PolyRing(("x", "y"))


@pytest.fixture
def rational_ring() -> PolyRing:
    """k[x, y] over Q."""
    return PolyRing(("x", "y"), RationalField())


@pytest.fixture
def xy(ring: PolyRing) -> tuple[Poly, Poly]:
    """The two variables of ``ring``."""
    x, y = ring.gens()
    return x, y


@pytest.fixture
def maximal(ring: PolyRing) -> MIdeal:
    """The maximal ideal (x, y)."""
    return ring.maximal_ideal()


@pytest.fixture
def m_module(ring: PolyRing) -> Submodule:
    """m as a submodule of R."""
    return ICModuleSpec.maximal_powers(1).realize(ring)


@pytest.fixture
def mm_module(ring: PolyRing) -> Submodule:
    """m + m inside R^2."""
    return ICModuleSpec.maximal_powers(1, 1).realize(ring)


@pytest.fixture
def small_bounds() -> Bounds:
    """Bounds that keep failing sweeps short."""
    return Bounds(n_max=2)


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory holding the instance files."""
    return FIXTURES_DIR
