"""Quantum gate and qubit counts for factoring, and the classical sieve baseline."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

GATES_PER_CUBIC_BIT = 24
NFS_EXPONENT_PREFACTOR = 1.923
NFS_CALIBRATION_BITS = 430
NFS_CALIBRATION_MIPS_YEARS = 500.0
SECONDS_PER_YEAR = 365.25 * 86400
SECONDS_PER_DAY = 86400.0


def gate_count(bits: int) -> int:
    """24 l^3; the lower-order term has no stated constant, so this is a lower bound."""
    _check_bits(bits, 1)
    return GATES_PER_CUBIC_BIT * bits**3


def qubit_count(bits: int) -> int:
    _check_bits(bits, 1)
    return 5 * bits + 4


def _nfs_exponent(bits: int) -> float:
    return NFS_EXPONENT_PREFACTOR * bits ** (1 / 3) * math.log(bits) ** (2 / 3)


def nfs_cost(bits: int) -> float:
    """Number-field-sieve effort in MIPS-years, anchored at 500 MIPS-years for 430 bits."""
    _check_bits(bits, 2)
    return NFS_CALIBRATION_MIPS_YEARS * math.exp(_nfs_exponent(bits) - _nfs_exponent(NFS_CALIBRATION_BITS))


def nfs_wall_clock(bits: int, machines: int = 100, mips_per_machine: float = 100.0) -> float:
    """Seconds for a fleet of ``machines`` each sustaining ``mips_per_machine``."""
    if machines < 1 or not mips_per_machine > 0:
        raise ValueError("fleet size and speed must be positive")
    return nfs_cost(bits) / (machines * mips_per_machine) * SECONDS_PER_YEAR


@dataclass(frozen=True)
class ResourceEstimate:
    bits: int
    gate_count: int
    gate_count_is_lower_bound: bool
    qubit_count: int
    clock_hz: float
    wall_clock: float  # s
    nfs_mips_years: float

    def to_dict(self) -> dict:
        return asdict(self)


def resource_estimate(bits: int, clock_hz: float) -> ResourceEstimate:
    if not clock_hz > 0:
        raise ValueError("clock rate must be positive")
    gates = gate_count(bits)
    return ResourceEstimate(
        bits=bits,
        gate_count=gates,
        gate_count_is_lower_bound=True,
        qubit_count=qubit_count(bits),
        clock_hz=clock_hz,
        wall_clock=gates / clock_hz,
        nfs_mips_years=nfs_cost(bits) if bits >= 2 else math.nan,
    )


def _check_bits(bits: int, minimum: int) -> None:
    if int(bits) != bits or bits < minimum:
        raise ValueError(f"bit count must be an integer >= {minimum}, got {bits!r}")
