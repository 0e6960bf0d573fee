"""Ideal-gate register simulation of period finding and factoring."""

from iontrapqc.shor.algorithm import (
    EvenModulusError,
    FactoringOutcome,
    ModulusError,
    NotCoprimeError,
    PrimeModulusError,
    PrimePowerError,
    extract_order,
    factor,
    gcd,
    mod_exp,
    order_finding_distribution,
    power_table,
)
from iontrapqc.shor.register import (
    CarryNotClearError,
    QubitRegister,
    RegisterError,
    add_circuit,
    ccnot_gate,
    cnot_gate,
    dft_matrix,
    hadamard_all,
    inverse_qft,
    qft,
)
from iontrapqc.shor.resources import ResourceEstimate, nfs_cost, nfs_wall_clock, resource_estimate

__all__ = [
    "CarryNotClearError",
    "EvenModulusError",
    "FactoringOutcome",
    "ModulusError",
    "NotCoprimeError",
    "PrimeModulusError",
    "PrimePowerError",
    "QubitRegister",
    "RegisterError",
    "ResourceEstimate",
    "add_circuit",
    "ccnot_gate",
    "cnot_gate",
    "dft_matrix",
    "extract_order",
    "factor",
    "gcd",
    "hadamard_all",
    "inverse_qft",
    "mod_exp",
    "nfs_cost",
    "nfs_wall_clock",
    "order_finding_distribution",
    "power_table",
    "qft",
    "resource_estimate",
]
