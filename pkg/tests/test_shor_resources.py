import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iontrapqc.shor.resources import (
    SECONDS_PER_DAY,
    gate_count,
    nfs_cost,
    nfs_wall_clock,
    qubit_count,
    resource_estimate,
)


def test_gate_count_430_bits():
    assert gate_count(430) == 24 * 430**3 == 1_908_168_000
    assert gate_count(430) == pytest.approx(2.0e9, rel=0.05)


def test_qubit_count_430_bits():
    assert qubit_count(430) == 2154


def test_wall_clock_at_100_mhz():
    est = resource_estimate(430, 100e6)
    assert est.wall_clock == pytest.approx(19.08, rel=1e-3)
    assert est.wall_clock == pytest.approx(20.0, rel=0.05)
    assert est.gate_count_is_lower_bound


def test_nfs_calibration_point():
    assert nfs_cost(430) == pytest.approx(500.0, rel=1e-12)


def test_nfs_fleet_time():
    days = nfs_wall_clock(430, machines=100, mips_per_machine=100) / SECONDS_PER_DAY
    assert days == pytest.approx(18.0, rel=0.1)
    # 500 MIPS-years over 10^4 MIPS = 0.05 years
    assert days == pytest.approx(0.05 * 365.25, rel=1e-12)


def test_nfs_oracle_ratio():
    def heuristic(bits):
        return math.exp(1.923 * bits ** (1 / 3) * math.log(bits) ** (2 / 3))

    assert nfs_cost(512) / nfs_cost(430) == pytest.approx(heuristic(512) / heuristic(430), rel=1e-12)


def test_nfs_monotone_example():
    assert nfs_cost(512) > nfs_cost(430)


@given(st.integers(min_value=2, max_value=4096))
def test_nfs_monotone(bits):
    assert nfs_cost(bits + 1) > nfs_cost(bits)


@given(st.integers(min_value=1, max_value=10_000))
def test_exact_counting_formulas(bits):
    est = resource_estimate(bits, 1e6)
    assert est.gate_count == 24 * bits**3
    assert est.qubit_count == 5 * bits + 4
    assert est.wall_clock == pytest.approx(est.gate_count / 1e6, rel=1e-15)


def test_one_bit_has_no_nfs_cost():
    assert math.isnan(resource_estimate(1, 1e6).nfs_mips_years)


@pytest.mark.parametrize("bits", [0, -5, 2.5])
def test_bad_bit_counts(bits):
    with pytest.raises(ValueError):
        gate_count(bits)


def test_nfs_needs_two_bits():
    with pytest.raises(ValueError):
        nfs_cost(1)


@pytest.mark.parametrize("kwargs", [{"machines": 0}, {"mips_per_machine": 0.0}])
def test_bad_fleet(kwargs):
    with pytest.raises(ValueError):
        nfs_wall_clock(430, **kwargs)


def test_bad_clock():
    with pytest.raises(ValueError):
        resource_estimate(430, 0.0)


def test_estimate_serializes():
    doc = resource_estimate(430, 100e6).to_dict()
    assert doc["qubit_count"] == 2154
    assert doc["gate_count_is_lower_bound"] is True
