import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from iontrapqc.constants import CONSTANTS, TWO_PI
from iontrapqc.laser import (
    DEFAULT_PROJECTION,
    ApproximationWarning,
    LaserParams,
    field_for_rabi_zero,
    gate_error,
    lamb_dicke,
    laser_power,
    pulse_bounds,
    rabi_one,
    rabi_zero,
    tolerance_report,
)
from iontrapqc.species import Transition

W500 = TWO_PI * 500e3


def _raman(detuning=TWO_PI * 100e6, field=1e3, stokes_field=1e3):
    return LaserParams(
        scheme="raman",
        wavelength=397e-9,
        field=field,
        stokes_field=stokes_field,
        raman_detuning=detuning,
        pump_projection=1.0,
        stokes_projection=-1.0,
    )


def test_default_projection_is_ten_degrees():
    assert DEFAULT_PROJECTION == pytest.approx(0.1736, abs=1e-4)


def test_lamb_dicke_full_projection(ca40):
    assert lamb_dicke(ca40, W500, LaserParams(axial_projection=1.0)) == pytest.approx(0.137, rel=0.01)


def test_lamb_dicke_ten_degrees(ca40):
    assert lamb_dicke(ca40, W500, LaserParams()) == pytest.approx(0.0238, rel=0.02)


def test_lamb_dicke_independent_oracle(ca40):
    k = TWO_PI / 729.347e-9
    width = math.sqrt(CONSTANTS.reduced_planck / (2 * ca40.mass * W500))
    assert lamb_dicke(ca40, W500, LaserParams(axial_projection=1.0)) == pytest.approx(k * width, rel=1e-12)


def test_lamb_dicke_frequency_scaling(ca40):
    a = lamb_dicke(ca40, W500, LaserParams())
    assert lamb_dicke(ca40, 4 * W500, LaserParams()) == pytest.approx(a / 2, rel=1e-12)


def test_raman_counter_propagating_wavevector(ca40):
    params = _raman()
    assert params.axial_wavenumber == pytest.approx(2 * TWO_PI / 397e-9, rel=1e-12)


def test_zero_field_gives_zero_rabi(ca40):
    assert rabi_zero(LaserParams(field=0.0), ca40.transition("729nm")) == 0.0


def test_single_laser_rabi_hand_value():
    tr = Transition("S-D", 729e-9, einstein_a=0.94, lifetime=1 / 0.94, kind="quadrupole")
    field = 3.37e21 * CONSTANTS.reduced_planck / CONSTANTS.elementary_charge
    # hand value 3.37e21 x 2.5e-14 = 8.4e7 rad/s; the unrounded length is 2.59e-14
    assert rabi_zero(LaserParams(field=field), tr) == pytest.approx(8.4e7, rel=0.05)


def test_raman_bilinear(ca40):
    tr = ca40.transition("397nm")
    base = rabi_zero(_raman(), tr)
    assert rabi_zero(_raman(field=2e3, stokes_field=2e3), tr) == pytest.approx(4 * base, rel=1e-12)


def test_raman_small_detuning_flagged(ca40):
    with pytest.warns(ApproximationWarning):
        rabi_zero(_raman(detuning=1.0, field=1e5, stokes_field=1e5), ca40.transition("397nm"))


@pytest.mark.parametrize("scheme", ["single", "raman"])
def test_field_inversion(ca40, scheme):
    params = LaserParams() if scheme == "single" else _raman()
    tr = ca40.transition("729nm" if scheme == "single" else "397nm")
    target = 1.234e7
    e = field_for_rabi_zero(target, params, tr)
    doc = dict(params.__dict__)
    doc.update(field=e, stokes_field=e if scheme == "raman" else 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationWarning)
        assert rabi_zero(LaserParams(**doc), tr) == pytest.approx(target, rel=1e-12)


def test_rabi_one_direct():
    assert rabi_one(1e6, 0.1, 1) == pytest.approx(1e5, rel=1e-15)


def test_rabi_one_ion_scaling():
    assert rabi_one(1e6, 0.1, 100) / rabi_one(1e6, 0.1, 1) == pytest.approx(0.1, rel=1e-15)


def test_rabi_one_hand_value():
    assert rabi_one(8.35e7, 0.0238, 10) == pytest.approx(6.28e5, rel=0.01)


def test_rabi_one_flags_large_eta():
    with pytest.warns(ApproximationWarning):
        rabi_one(1.0, 0.5, 1)


def test_pulse_bounds_published(ca40):
    eta = lamb_dicke(ca40, W500, LaserParams())
    b = pulse_bounds(10, eta, W500)
    assert b.t_v_min * 1e9 == pytest.approx(7.5, rel=0.05)
    assert b.t_u_traveling_min * 1e6 == pytest.approx(130.0, rel=0.05)
    assert b.t_u_standing_min * 1e6 == pytest.approx(2.6, rel=0.02)


def test_pulse_bounds_full_projection(ca40):
    eta = lamb_dicke(ca40, W500, LaserParams(axial_projection=1.0))
    b = pulse_bounds(10, eta, W500)
    assert b.t_v_min * 1e9 == pytest.approx(43.0, rel=0.02)
    assert b.t_u_traveling_min * 1e6 == pytest.approx(23.0, rel=0.02)


def test_pulse_bounds_ion_scaling():
    a, b = pulse_bounds(1, 0.05, W500), pulse_bounds(100, 0.05, W500)
    assert b.t_v_min == pytest.approx(a.t_v_min / 10, rel=1e-12)
    assert b.t_u_traveling_min == pytest.approx(a.t_u_traveling_min * 10, rel=1e-12)
    assert b.t_u_standing_min == a.t_u_standing_min


@given(
    st.integers(min_value=1, max_value=10_000),
    st.floats(min_value=1e-3, max_value=0.5),
    st.floats(min_value=1e4, max_value=1e8),
)
def test_pulse_bound_product_identity(n, eta, w):
    b = pulse_bounds(n, eta, w)
    assert b.t_v_min * b.t_u_traveling_min == pytest.approx(math.pi**2 / w**2, rel=1e-12)


def test_power_published_example(ca40):
    params = LaserParams(axial_projection=1.0, spot_radius=10e-6)
    est = laser_power(params, 5e-6, W500, 10, ca40, ca40.transition("729nm"))
    assert est.power * 1e3 == pytest.approx(28.2, rel=0.01)
    assert 0.5 <= est.power / 25e-3 <= 2.0
    assert est.rabi_one == pytest.approx(math.pi / 5e-6, rel=1e-15)
    assert est.rabi_zero == pytest.approx(math.sqrt(10) * est.rabi_one / est.eta, rel=1e-15)
    assert set(est.derivation) >= {"omega1", "omega0", "field", "power"}


def test_power_gaussian_beam_oracle(ca40):
    params = LaserParams(axial_projection=1.0)
    est = laser_power(params, 5e-6, W500, 10, ca40, ca40.transition("729nm"))
    intensity_peak = 0.5 * CONSTANTS.speed_of_light * CONSTANTS.vacuum_permittivity * est.field**2
    assert est.power == pytest.approx(intensity_peak * math.pi * params.spot_radius**2 / 2, rel=1e-12)


def _slope(params, ca40, transition):
    t = np.geomspace(1e-6, 1e-3, 7)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApproximationWarning)
        p = [laser_power(params, ti, W500, 10, ca40, transition).power for ti in t]
    return np.polyfit(np.log(t), np.log(p), 1)[0]


def test_single_power_slope(ca40):
    assert abs(_slope(LaserParams(), ca40, ca40.transition("729nm")) + 2) < 0.01


def test_raman_power_slope(ca40):
    assert abs(_slope(_raman(), ca40, ca40.transition("397nm")) + 1) < 0.01


def test_power_ten_times_longer(ca40):
    tr = ca40.transition("729nm")
    a = laser_power(LaserParams(), 5e-6, W500, 10, ca40, tr).power
    b = laser_power(LaserParams(), 50e-6, W500, 10, ca40, tr).power
    assert b == pytest.approx(a / 100, rel=1e-12)


def test_power_spot_scaling(ca40):
    tr = ca40.transition("729nm")
    a = laser_power(LaserParams(spot_radius=10e-6), 5e-6, W500, 10, ca40, tr).power
    b = laser_power(LaserParams(spot_radius=20e-6), 5e-6, W500, 10, ca40, tr).power
    assert b == pytest.approx(4 * a, rel=1e-12)


def test_power_rejects_nonpositive_duration(ca40):
    with pytest.raises(ValueError):
        laser_power(LaserParams(), 0.0, W500, 10, ca40, ca40.transition("729nm"))


@pytest.mark.parametrize(
    "scheme, n, expected",
    [
        ("standing", 1, 8.9e-6),
        ("traveling", 1, 3.6e-5),
        ("raman", 1, 1.3e-8),
        ("raman", 100, 1.3e-7),
        ("standing", 8, 1.78e-5),
    ],
)
def test_gate_error_values(scheme, n, expected):
    assert gate_error(scheme, n) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("scheme", ["standing", "traveling", "raman"])
def test_gate_error_rejects_zero_ions(scheme):
    with pytest.raises(ValueError):
        gate_error(scheme, 0)


@pytest.mark.parametrize("scheme", ["standing", "traveling", "raman"])
@given(n=st.integers(min_value=1, max_value=10_000))
def test_gate_error_monotone(scheme, n):
    assert gate_error(scheme, n + 1) > gate_error(scheme, n)


def test_gate_error_unknown_scheme():
    with pytest.raises(ValueError):
        gate_error("pulsed", 1)


def test_tolerance_report_positive(ca40):
    report = tolerance_report(LaserParams(), ca40, ca40.transition("729nm"), 10, W500, 5e-6)
    for value in (report.eta, report.t_v_min, report.t_u_min_traveling, report.t_u_min_standing, report.power, report.gate_error):
        assert math.isfinite(value) and value > 0
    assert report.gate_error == gate_error("traveling", 10)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"polarization_factor": 0.0},
        {"polarization_factor": 1.5},
        {"axial_projection": 0.0},
        {"axial_projection": 1.2},
        {"scheme": "raman", "raman_detuning": 0.0, "pump_projection": 1.0, "stokes_projection": -1.0},
        {"scheme": "raman", "raman_detuning": 1e9},
        {"scheme": "pulsed"},
    ],
)
def test_invalid_laser_params(kwargs):
    with pytest.raises(ValueError):
        LaserParams(**kwargs)
