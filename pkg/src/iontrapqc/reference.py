"""Published worked examples, re-evaluated with this package.

Each subcommand of the command-line tool can run its group of examples and
print the comparison table.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from iontrapqc.constants import TWO_PI


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    expected: float
    tolerance: float
    mode: str  # "rel", "abs", "factor" or "exact"

    @property
    def passed(self) -> bool:
        if self.mode == "exact":
            return self.value == self.expected
        if self.mode == "abs":
            return abs(self.value - self.expected) <= self.tolerance
        if self.mode == "factor":
            return 1 / self.tolerance <= self.value / self.expected <= self.tolerance
        return abs(self.value - self.expected) <= self.tolerance * abs(self.expected)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["passed"] = self.passed
        return doc


def species_checks() -> list[Check]:
    from iontrapqc.constants import CONSTANTS
    from iontrapqc.species import ca40_species

    ca = ca40_species()
    return [
        Check("ca40 mass / 40 u", ca.mass / (40 * CONSTANTS.atomic_mass_unit), 1.0, 1e-3, "rel"),
        Check("S1/2-D5/2 wavelength (nm)", ca.transition("729nm").wavelength * 1e9, 729.0, 0.5, "abs"),
        Check("D5/2 lifetime (s)", ca.transition("S1/2-D5/2").lifetime, 1.0, 0.1, "rel"),
    ]


def chain_checks() -> list[Check]:
    from iontrapqc.chain import ChainConfig, build_chain, max_linear_ions, min_spacing, scaled_equilibrium_positions
    from iontrapqc.species import ca40_species

    ca = ca40_species()
    two = scaled_equilibrium_positions(2)
    three = scaled_equilibrium_positions(3)
    model = build_chain(ChainConfig(ca, 5, TWO_PI * 500e3))
    spacing = min_spacing(2, TWO_PI * 200e3, ca)
    return [
        Check("N=2 outer position / ell", float(two[1]), 0.25 ** (1 / 3), 1e-9, "rel"),
        Check("N=3 outer position / ell", float(three[2]), 1.25 ** (1 / 3), 1e-9, "rel"),
        Check("N=5 CM mode frequency / w_x", float(model.mode_frequencies[0]), 1.0, 1e-9, "rel"),
        Check("N=5 breathing mode frequency / w_x", float(model.mode_frequencies[1]), math.sqrt(3), 1e-9, "rel"),
        Check("min spacing fit N=2, 200 kHz (um)", spacing.fit * 1e6, 20.0, 0.25, "rel"),
        Check("N_max at 5 MHz / 500 kHz", max_linear_ions(TWO_PI * 5e6, TWO_PI * 500e3), 24, 0, "exact"),
        Check("N_max at 5 MHz / 100 kHz", max_linear_ions(TWO_PI * 5e6, TWO_PI * 100e3), 151, 0, "exact"),
    ]


def trap_checks() -> list[Check]:
    from iontrapqc.species import ca40_species
    from iontrapqc.trap import TrapConfig, axial_frequency, crosstalk, mathieu_parameters, pseudopotential_depth

    trap = TrapConfig(ca40_species(), 500.0, TWO_PI * 11.5e6, 1.4e-3, endcap_voltage=150.0)
    return [
        Check("Mathieu q", mathieu_parameters(trap)[1], 0.236, 0.01, "rel"),
        Check("pseudo-well depth (eV)", pseudopotential_depth(trap), 14.7, 0.03, "rel"),
        Check("axial frequency at 150 V (kHz)", axial_frequency(150.0) / TWO_PI / 1e3, 200.0, 1e-12, "rel"),
        Check("crosstalk, 20 um spacing, 21.6 um spot", crosstalk(20e-6, 21.6e-6), 1e-3, 0.1, "rel"),
    ]


def laser_checks() -> list[Check]:
    from iontrapqc.laser import LaserParams, gate_error, lamb_dicke, laser_power, pulse_bounds
    from iontrapqc.species import ca40_species

    ca = ca40_species()
    w = TWO_PI * 500e3
    eta = lamb_dicke(ca, w, LaserParams())
    bounds = pulse_bounds(10, eta, w)
    full = LaserParams(axial_projection=1.0, spot_radius=10e-6)
    power = laser_power(full, 5e-6, w, 10, ca, ca.transition("S1/2-D5/2")).power
    return [
        Check("eta, 729 nm, 10 deg projection", eta, 0.0238, 0.02, "rel"),
        Check("t_V bound, 10 ions (ns)", bounds.t_v_min * 1e9, 7.5, 0.05, "rel"),
        Check("t_U traveling bound, 10 ions (us)", bounds.t_u_traveling_min * 1e6, 130.0, 0.05, "rel"),
        Check("t_U standing bound (us)", bounds.t_u_standing_min * 1e6, 2.6, 0.02, "rel"),
        Check("single-laser power, t_U = 5 us (mW)", power * 1e3, 25.0, 2.0, "factor"),
        Check("gate error standing, N=1", gate_error("standing", 1), 8.9e-6, 0, "exact"),
        Check("gate error traveling, N=1", gate_error("traveling", 1), 3.6e-5, 0, "exact"),
        Check("gate error raman, N=1", gate_error("raman", 1), 1.3e-8, 0, "exact"),
    ]


def pulse_checks() -> list[Check]:
    from iontrapqc.pulse.gates import apply_v, hadamard
    from iontrapqc.pulse.register import RegisterSpace, StateVector
    from iontrapqc.pulse.verify import verify_cnot

    space = RegisterSpace(1, 1)
    zero, one = StateVector.basis(space, "0"), StateVector.basis(space, "1")
    plus = StateVector.from_kets(space, {"0": 1, "1": 1})
    minus = StateVector.from_kets(space, {"0": 1, "1": -1})
    flipped = apply_v(zero, 0, math.pi, math.pi / 2)
    report = verify_cnot()
    return [
        Check("V(pi, pi/2)|0> overlap with |1>", abs(flipped.overlap(one)), 1.0, 1e-12, "abs"),
        Check("V(4pi, 0.7) overlap with input", abs(apply_v(plus, 0, 4 * math.pi, 0.7).overlap(plus)), 1.0, 1e-12, "abs"),
        Check("Hadamard |0> fidelity with |+>", hadamard(zero, 0).fidelity(plus), 1.0, 1e-10, "abs"),
        Check("Hadamard |1> fidelity with |->", hadamard(one, 0).fidelity(minus), 1.0, 1e-10, "abs"),
        Check("five-pulse CNOT fidelity", report.fidelity, 1.0, 1e-10, "abs"),
        Check("five-pulse CNOT bus leakage", report.leakage, 0.0, 1e-10, "abs"),
    ]


def shor_checks() -> list[Check]:
    from iontrapqc.shor.resources import nfs_cost, nfs_wall_clock, resource_estimate

    estimate = resource_estimate(430, 100e6)
    return [
        Check("gate count, 430 bits", float(estimate.gate_count), 2.0e9, 0.05, "rel"),
        Check("wall clock at 100 MHz (s)", estimate.wall_clock, 20.0, 0.05, "rel"),
        Check("qubits, 430 bits", estimate.qubit_count, 2154, 0, "exact"),
        Check("NFS effort, 430 bits (MIPS-years)", nfs_cost(430), 500.0, 1e-9, "rel"),
        Check("NFS time on 100 x 100 MIPS (days)", nfs_wall_clock(430) / 86400, 18.0, 0.1, "rel"),
    ]


CHECKS = {
    "species": species_checks,
    "chain": chain_checks,
    "trap": trap_checks,
    "laser": laser_checks,
    "pulse": pulse_checks,
    "shor": shor_checks,
}


def run_checks(group: str) -> list[Check]:
    return CHECKS[group]()

