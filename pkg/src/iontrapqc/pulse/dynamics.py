"""Time integration of the full laser-ion interaction Hamiltonian.

In the interaction picture, with ``sigma = |0><upper|`` on the addressed ion,

    H / hbar = (i/2) e^{i Delta t} [Omega_0 + Omega_1 (a e^{-i w_x t} - a^dag e^{i w_x t})] sigma + h.c.

which keeps the carrier and both motional sidebands. ``Omega_0`` and
``Omega_1`` are complex; their phases select the pulse phase. With the gate
convention of :mod:`iontrapqc.pulse.gates`:

* a resonant carrier with ``Omega_0 = i |Omega_0| e^{i phi}`` is ``V(|Omega_0| t, phi)``;
* a red sideband (Delta = -w_x) with ``Omega_1 = -i |Omega_1| e^{i phi}`` is
  ``U(|Omega_1| t, phi)`` up to off-resonant corrections.

Step control: classic RK4 on a uniform grid whose step is at most 1/160 of a
trap period and at most ``0.01 / ||H||``. Only the addressed ion and the phonon
mode are acted on, and of the ion only |0> and the upper level, so the RK4
step matrices are formed on that block and multiplied together before being
applied to the register. The result on ``n`` steps is checked
against ``2n`` steps; the step count keeps doubling until the Richardson
estimate ``|psi_2n - psi_n| / 15`` is within ``tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from iontrapqc.pulse.gates import apply_u
from iontrapqc.pulse.register import AUX, RegisterSpace, StateVector

STEPS_PER_TRAP_PERIOD = 160  # well inside the 1/40 period ceiling
CHUNK_STEPS = 4096
MAX_PHASE_PER_STEP = 0.01
MAX_DOUBLINGS = 8
NORM_DRIFT_LIMIT = 1e-8
MAX_STEPS = 1 << 24
TRANSITIONS = {"qubit": 1, "aux": AUX}


class IntegrationError(RuntimeError):
    """The integrator could not meet its tolerance."""

    def __init__(self, message: str, steps: int, error_estimate: float):
        super().__init__(f"{message} (steps = {steps}, error estimate = {error_estimate:.3e})")
        self.steps = steps
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class HamiltonianParams:
    rabi_zero: complex  # Omega_0, rad/s
    rabi_one: complex  # Omega_1, rad/s
    detuning: float  # Delta = w_laser - w_transition, rad/s
    axial_frequency: float  # w_x, rad/s
    ion: int = 0
    transition: str = "qubit"

    def __post_init__(self):
        if not self.axial_frequency > 0:
            raise ValueError("axial_frequency must be positive")
        if self.transition not in TRANSITIONS:
            raise ValueError(f"transition must be one of {tuple(TRANSITIONS)}")

    @property
    def norm_bound(self) -> float:
        """Crude upper bound on ||H|| / hbar per unit sqrt(phonon number)."""
        return abs(self.rabi_zero) + 2 * abs(self.rabi_one)


def carrier_params(rabi: float, phi: float, axial_frequency: float, ion: int = 0, transition: str = "qubit") -> HamiltonianParams:
    """Resonant carrier drive reproducing ``V(rabi * t, phi)``."""
    return HamiltonianParams(1j * rabi * np.exp(1j * phi), 0.0, 0.0, axial_frequency, ion, transition)


def sideband_params(
    rabi_one: float,
    phi: float,
    eta: float,
    ion_count: int,
    axial_frequency: float,
    ion: int = 0,
    transition: str = "qubit",
) -> HamiltonianParams:
    """Red-sideband drive reproducing ``U(rabi_one * t, phi)``.

    The carrier amplitude follows from ``Omega_0 = sqrt(N) Omega_1 / eta`` and
    shares the sideband phase.
    """
    omega1 = -1j * rabi_one * np.exp(1j * phi)
    omega0 = math.sqrt(ion_count) * omega1 / eta
    return HamiltonianParams(omega0, omega1, -axial_frequency, axial_frequency, ion, transition)


def _local_operators(space: RegisterSpace) -> np.ndarray:
    """sigma, a sigma, a^dag sigma and their adjoints on (phonon) x (|0>, |upper>) of the addressed ion."""
    sigma = np.array([[0.0, 1.0], [0.0, 0.0]])
    n_ph = space.phonon_cutoff + 1
    a = np.diag(np.sqrt(np.arange(1, n_ph)), k=1)
    ops = np.stack([np.kron(np.eye(n_ph), sigma), np.kron(a, sigma), np.kron(a.T, sigma)]).astype(complex)
    return np.concatenate([ops, ops.conj().transpose(0, 2, 1)])


def _coefficients(params: HamiltonianParams, times: np.ndarray) -> np.ndarray:
    """-i times the coefficients of the six operators, one row per time."""
    d, w = params.detuning, params.axial_frequency
    half_i = 0.5j
    fwd = np.stack(
        [
            half_i * params.rabi_zero * np.exp(1j * d * times),
            half_i * params.rabi_one * np.exp(1j * (d - w) * times),
            -half_i * params.rabi_one * np.exp(1j * (d + w) * times),
        ],
        axis=1,
    )
    return -1j * np.concatenate([fwd, fwd.conj()], axis=1)


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """mats[-1] @ ... @ mats[0] by pairwise reduction."""
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            tail = mats[-1:]
            mats = np.concatenate([mats[1:-1:2] @ mats[0:-1:2], tail])
        else:
            mats = mats[1::2] @ mats[0::2]
    return mats[0]


def _rk4_propagator(ops: np.ndarray, params: HamiltonianParams, duration: float, steps: int) -> np.ndarray:
    """Product of classic RK4 step matrices for psi' = M(t) psi on a uniform grid.

    For a linear equation one RK4 step is psi -> P_j psi with
    P = 1 + h/6 (K1 + 2 K2 + 2 K3 + K4), K1 = M(t), K2 = M(t+h/2)(1 + h/2 K1),
    K3 = M(t+h/2)(1 + h/2 K2), K4 = M(t+h)(1 + h K3). The step matrices are
    built in batches and multiplied in time order.
    """
    h = duration / steps
    dim = ops.shape[1]
    eye = np.eye(dim, dtype=complex)
    total = eye
    for first in range(0, steps, CHUNK_STEPS):
        grid = np.arange(first, min(first + CHUNK_STEPS, steps)) * h
        m0 = np.einsum("sk,kij->sij", _coefficients(params, grid), ops)
        m_half = np.einsum("sk,kij->sij", _coefficients(params, grid + h / 2), ops)
        m1 = np.einsum("sk,kij->sij", _coefficients(params, grid + h), ops)
        k1 = m0
        k2 = m_half @ (eye + 0.5 * h * k1)
        k3 = m_half @ (eye + 0.5 * h * k2)
        k4 = m1 @ (eye + h * k3)
        step = eye + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        total = _ordered_product(step) @ total
    return total


def _apply_local(state: StateVector, params: HamiltonianParams, propagator: np.ndarray) -> np.ndarray:
    """Apply a (phonon) x (|0>, |upper>) propagator; the third ion level is a spectator."""
    space = state.space
    axis = space.ion_axis(params.ion)
    levels = [0, TRANSITIONS[params.transition]]
    tensor = np.moveaxis(state.tensor(), axis, 1).copy()
    block = tensor[:, levels]
    shape = block.shape
    tensor[:, levels] = (propagator @ block.reshape(shape[0] * 2, -1)).reshape(shape)
    return np.moveaxis(tensor, 1, axis).reshape(-1)


@dataclass(frozen=True)
class EvolutionResult:
    state: StateVector
    steps: int
    error_estimate: float
    norm_error: float


def base_step_count(space: RegisterSpace, params: HamiltonianParams, duration: float) -> int:
    period = 2 * math.pi / params.axial_frequency
    h_max = period / STEPS_PER_TRAP_PERIOD
    bound = params.norm_bound * math.sqrt(space.phonon_cutoff) + abs(params.rabi_zero)
    if bound > 0:
        h_max = min(h_max, MAX_PHASE_PER_STEP / bound)
    return max(1, math.ceil(duration / h_max))


def integrate(state: StateVector, params: HamiltonianParams, duration: float, tolerance: float = 1e-9) -> EvolutionResult:
    """Integrate the interaction-picture Schrodinger equation with error control."""
    if not duration > 0:
        raise ValueError("duration must be positive")
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    space = state.space
    space.check_ion(params.ion)
    ops = _local_operators(space)
    steps = base_step_count(space, params, duration)
    coarse = _apply_local(state, params, _rk4_propagator(ops, params, duration, steps))
    estimate = math.inf
    for _ in range(MAX_DOUBLINGS):
        if 2 * steps > MAX_STEPS:
            break
        fine = _apply_local(state, params, _rk4_propagator(ops, params, duration, 2 * steps))
        estimate = float(np.linalg.norm(fine - coarse)) / 15
        steps *= 2
        if estimate <= tolerance:
            norm = float(np.linalg.norm(fine))
            if abs(norm - 1) > NORM_DRIFT_LIMIT:
                raise IntegrationError(f"norm drifted by {abs(norm - 1):.3e}", steps, estimate)
            # Drift is reported in norm_error; the stored state is renormalized.
            return EvolutionResult(StateVector(space, fine / norm), steps, estimate, abs(norm - 1))
        coarse = fine
    raise IntegrationError("step refinement exhausted before reaching tolerance", steps, estimate)


def evolve_exact(state: StateVector, params: HamiltonianParams, duration: float, tolerance: float = 1e-9) -> StateVector:
    """State after ``duration`` seconds under the full Hamiltonian."""
    return integrate(state, params, duration, tolerance).state


@dataclass(frozen=True)
class ScanPoint:
    duration: float  # t_U, s
    multiple: float  # t_U divided by the traveling-wave bound
    infidelity: float
    steps: int


def u_pulse_infidelity(
    duration: float,
    eta: float,
    ion_count: int,
    axial_frequency: float,
    phonon_cutoff: int = 3,
    phi: float = 0.0,
    tolerance: float = 1e-10,
) -> tuple[float, int]:
    """1 - |<U(pi, phi) psi0 | exact psi0>|^2 for psi0 = |1>_0 |0 phonons>, other ions in |0>."""
    space = RegisterSpace(ion_count, phonon_cutoff)
    start = StateVector.basis(space, "0" * (ion_count - 1) + "1", 0)
    params = sideband_params(math.pi / duration, phi, eta, ion_count, axial_frequency)
    result = integrate(start, params, duration, tolerance)
    ideal = apply_u(start, 0, math.pi, phi)
    return 1.0 - ideal.fidelity(result.state), result.steps


def u_pulse_scan(
    multiples,
    eta: float,
    ion_count: int,
    axial_frequency: float,
    phonon_cutoff: int = 3,
    tolerance: float = 1e-10,
) -> list[ScanPoint]:
    """Infidelity of a U-type pi pulse at durations given in units of pi sqrt(N) / (eta w_x)."""
    bound = math.pi * math.sqrt(ion_count) / (eta * axial_frequency)
    points = []
    for k in multiples:
        t_u = float(k) * bound
        infidelity, steps = u_pulse_infidelity(t_u, eta, ion_count, axial_frequency, phonon_cutoff, tolerance=tolerance)
        points.append(ScanPoint(t_u, float(k), infidelity, steps))
    return points


def loglog_slope(points) -> float:
    """Least-squares slope of log(infidelity) against log(duration)."""
    x = np.log([p.duration for p in points])
    y = np.log([p.infidelity for p in points])
    return float(np.polyfit(x, y, 1)[0])
