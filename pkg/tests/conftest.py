import pytest

from iontrapqc.constants import TWO_PI
from iontrapqc.species import ca40_species
from iontrapqc.trap import TrapConfig


@pytest.fixture(scope="session")
def ca40():
    return ca40_species()


@pytest.fixture(scope="session")
def typical_trap(ca40):
    """500 V RF at 11.5 MHz, r0 = 1.4 mm, 150 V on the endcaps."""
    return TrapConfig(ca40, 500.0, TWO_PI * 11.5e6, 1.4e-3, endcap_voltage=150.0)
