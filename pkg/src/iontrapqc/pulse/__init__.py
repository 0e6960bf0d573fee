"""Laser-pulse simulation of an ion register coupled through the CM phonon mode."""

from iontrapqc.pulse.dynamics import (
    HamiltonianParams,
    IntegrationError,
    carrier_params,
    evolve_exact,
    integrate,
    sideband_params,
    u_pulse_scan,
)
from iontrapqc.pulse.gates import (
    PulseSpec,
    apply_pulse,
    apply_u,
    apply_u_aux,
    apply_v,
    apply_v_aux,
    bit_flip,
    cnot,
    cnot_sequence,
    cnot_verbatim,
    hadamard,
    not_composite,
    run_sequence,
)
from iontrapqc.pulse.readout import Measurement, measure, sample_counts
from iontrapqc.pulse.register import RegisterSpace, StateVector
from iontrapqc.pulse.verify import gate_fidelity, verify_cnot

__all__ = [
    "HamiltonianParams",
    "IntegrationError",
    "Measurement",
    "PulseSpec",
    "RegisterSpace",
    "StateVector",
    "apply_pulse",
    "apply_u",
    "apply_u_aux",
    "apply_v",
    "apply_v_aux",
    "bit_flip",
    "carrier_params",
    "cnot",
    "cnot_sequence",
    "cnot_verbatim",
    "evolve_exact",
    "gate_fidelity",
    "hadamard",
    "integrate",
    "measure",
    "not_composite",
    "run_sequence",
    "sample_counts",
    "sideband_params",
    "u_pulse_scan",
    "verify_cnot",
]
