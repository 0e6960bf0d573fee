import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from iontrapqc.constants import (
    CONSTANTS,
    TWO_PI,
    PhysicalConstants,
    angular,
    doppler_limit,
    linewidth_for_doppler_limit,
    ordinary,
)
from iontrapqc.species import (
    Transition,
    ca40_species,
    cooling_linewidth,
    load_species,
    species_from_dict,
)


def test_constants_positive():
    for value in vars(CONSTANTS).values():
        assert value > 0


def test_fine_structure_range():
    assert 1 / 138 < CONSTANTS.fine_structure < 1 / 137


def test_nonpositive_constant_rejected():
    fields = dict(vars(CONSTANTS))
    fields["boltzmann"] = 0.0
    with pytest.raises(ValueError):
        PhysicalConstants(**fields)


def test_coulomb_constant_hand_value():
    # e^2/(4 pi eps0) = 2.307e-28 J m
    assert CONSTANTS.coulomb_constant == pytest.approx(2.307e-28, rel=1e-3)


@given(st.floats(min_value=1e-3, max_value=1e12))
def test_angular_ordinary_round_trip(f):
    assert ordinary(angular(f)) == pytest.approx(f, rel=1e-14)


def test_ca40_mass():
    # 40 x 1.66054e-27 kg
    assert ca40_species().mass == pytest.approx(6.642e-26, rel=1e-3)


def test_ca40_singly_charged():
    ca = ca40_species()
    assert ca.charge_multiplier == 1
    assert ca.charge == CONSTANTS.elementary_charge


@pytest.mark.parametrize(
    "key, wavelength_nm, kind",
    [
        ("397nm", 397, "dipole"),
        ("866nm", 866, "dipole"),
        ("729nm", 729, "quadrupole"),
        ("732nm", 733, "quadrupole"),
    ],
)
def test_ca40_table_entries(key, wavelength_nm, kind):
    tr = ca40_species().transition(key)
    assert tr.wavelength * 1e9 == pytest.approx(wavelength_nm, abs=1.0)
    assert tr.kind == kind


@pytest.mark.parametrize("label, lifetime", [("S1/2-D5/2", 1.06), ("S1/2-D3/2", 1.08)])
def test_metastable_lifetimes(label, lifetime):
    assert ca40_species().transition(label).lifetime == pytest.approx(lifetime, rel=1e-9)


def test_every_transition_self_consistent():
    for tr in ca40_species().transitions:
        assert abs(tr.einstein_a * tr.lifetime - tr.branching_ratio) <= tr.branching_tolerance


def test_inconsistent_transition_rejected():
    with pytest.raises(ValueError):
        Transition("bad", 729e-9, einstein_a=2.0, lifetime=1.0, kind="quadrupole")


def test_unknown_transition_kind_rejected():
    with pytest.raises(ValueError):
        Transition("bad", 729e-9, einstein_a=1.0, lifetime=1.0, kind="octupole")


def test_unknown_transition_key():
    with pytest.raises(KeyError):
        ca40_species().transition("S1/2-F7/2")


def test_species_json_round_trip(tmp_path):
    ca = ca40_species()
    path = tmp_path / "ca.json"
    path.write_text(json.dumps(ca.to_dict()))
    assert load_species(path) == ca


def test_species_from_dict_mass_units():
    doc = {"name": "Be+", "mass_u": 9.0121831, "transitions": []}
    be = species_from_dict(doc)
    assert be.mass == pytest.approx(9.0121831 * CONSTANTS.atomic_mass_unit, rel=1e-15)


def test_species_needs_mass():
    with pytest.raises(ValueError):
        species_from_dict({"name": "x"})


def test_unknown_bundled_species():
    with pytest.raises(KeyError):
        load_species("unobtainium")


def test_doppler_limit_hand_value():
    # hbar * 2 pi * 21.6 MHz / (2 kB) = 0.518 mK
    assert doppler_limit(TWO_PI * 21.6e6) == pytest.approx(0.518e-3, rel=5e-3)


def test_doppler_limit_inverse_for_85_microkelvin():
    assert linewidth_for_doppler_limit(85e-6) / TWO_PI == pytest.approx(3.54e6, rel=5e-3)


def test_doppler_limit_vanishes_with_linewidth():
    assert doppler_limit(1e-12) < 1e-22


@pytest.mark.parametrize("gamma", [0.0, -1.0])
def test_doppler_limit_rejects_nonpositive(gamma):
    with pytest.raises(ValueError):
        doppler_limit(gamma)


@given(st.floats(min_value=1.0, max_value=1e10))
def test_doppler_inverse_round_trip(gamma):
    assert linewidth_for_doppler_limit(doppler_limit(gamma)) == pytest.approx(gamma, rel=1e-12)


def test_cooling_linewidth_is_p_level_rate():
    gamma = cooling_linewidth(ca40_species())
    assert gamma == pytest.approx(1 / 7.098e-9, rel=1e-12)
    assert math.isclose(gamma / TWO_PI, 22.4e6, rel_tol=0.01)
