import pytest

from sutured_braids.surface_chords import SurfaceSpec, enumerate_chords


@pytest.fixture(scope="session")
def torus_chords():
    return enumerate_chords(SurfaceSpec.torus(), 1.5)


@pytest.fixture(scope="session")
def genus2_chords():
    return enumerate_chords(SurfaceSpec.hyperbolic(2), 1)
