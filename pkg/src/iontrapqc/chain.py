"""Linear ion chain: equilibrium positions, axial normal modes and coupling constants.

Lengths are scaled by ``ell = (e^2 / (4 pi eps0 M w_x^2))**(1/3)`` and the
coupling matrix by ``M w_x^2``. In those units the equilibrium problem and the
mode spectrum depend on the ion number alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from iontrapqc.constants import CONSTANTS
from iontrapqc.species import IonSpecies

MAX_NEWTON_ITERATIONS = 200
FORCE_TOLERANCE = 1e-12

# Empirical minimum-spacing law and zig-zag stability law for a linear string.
SPACING_FIT_PREFACTOR = 2.018
SPACING_FIT_EXPONENT = 0.559
NMAX_PREFACTOR = 1.82
NMAX_EXPONENT = 1.13


class ConvergenceError(RuntimeError):
    """The equilibrium solver did not reach the force tolerance."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (max |F| = {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class ChainConfig:
    species: IonSpecies
    ion_count: int
    axial_frequency: float  # rad/s

    def __post_init__(self):
        if int(self.ion_count) != self.ion_count or self.ion_count < 1:
            raise ValueError(f"ion_count must be a positive integer, got {self.ion_count!r}")
        if not self.axial_frequency > 0:
            raise ValueError("axial_frequency must be positive")

    @property
    def spring_constant(self) -> float:
        """M w_x^2 in kg/s^2."""
        return self.species.mass * self.axial_frequency**2


@dataclass(frozen=True)
class ChainModel:
    config: ChainConfig
    length_scale: float  # m
    scaled_positions: np.ndarray  # units of length_scale
    coupling_matrix: np.ndarray  # units of M w_x^2
    mode_frequencies: np.ndarray  # units of w_x, ascending
    mode_vectors: np.ndarray  # row p is b^(p)
    coupling_constants: np.ndarray  # row p is s^(p)

    @property
    def positions(self) -> np.ndarray:
        return self.scaled_positions * self.length_scale

    @property
    def dimensional_coupling_matrix(self) -> np.ndarray:
        return self.coupling_matrix * self.config.spring_constant


def length_scale(config: ChainConfig) -> float:
    """Characteristic length (e^2 / (4 pi eps0 M w_x^2))**(1/3) in metres."""
    return (CONSTANTS.coulomb_constant / config.spring_constant) ** (1.0 / 3.0)


def _forces(u: np.ndarray) -> np.ndarray:
    diff = u[:, None] - u[None, :]
    np.fill_diagonal(diff, np.inf)
    return u - np.sum(np.sign(diff) / diff**2, axis=1)


def _hessian(u: np.ndarray) -> np.ndarray:
    diff = np.abs(u[:, None] - u[None, :])
    np.fill_diagonal(diff, np.inf)
    inv3 = 2.0 / diff**3
    hess = -inv3
    np.fill_diagonal(hess, 1.0 + inv3.sum(axis=1))
    return hess


@lru_cache(maxsize=256)
def _solve_scaled(n: int) -> tuple[float, ...]:
    if n == 1:
        return (0.0,)
    gap = SPACING_FIT_PREFACTOR / n**SPACING_FIT_EXPONENT
    u = (np.arange(n) - (n - 1) / 2.0) * gap
    residual = np.max(np.abs(_forces(u)))
    for iteration in range(1, MAX_NEWTON_ITERATIONS + 1):
        step = np.linalg.solve(_hessian(u), -_forces(u))
        # Damp the step until the ordering survives and the residual drops.
        scale = 1.0
        while scale > 1e-6:
            trial = u + scale * step
            if np.all(np.diff(trial) > 0):
                trial_res = np.max(np.abs(_forces(trial)))
                if trial_res < residual or residual < FORCE_TOLERANCE * 10:
                    break
            scale *= 0.5
        else:
            raise ConvergenceError("line search failed", residual, iteration)
        u = trial
        u = 0.5 * (u - u[::-1])  # exact antisymmetry about the trap centre
        residual = np.max(np.abs(_forces(u)))
        if residual < FORCE_TOLERANCE:
            return tuple(float(x) for x in u)
    raise ConvergenceError("equilibrium solve did not converge", residual, MAX_NEWTON_ITERATIONS)


def scaled_equilibrium_positions(n: int) -> np.ndarray:
    """Equilibrium positions of ``n`` ions in units of the length scale, ascending."""
    if int(n) != n or n < 1:
        raise ValueError(f"ion count must be a positive integer, got {n!r}")
    return np.array(_solve_scaled(int(n)))


def equilibrium_positions(config: ChainConfig) -> np.ndarray:
    """Equilibrium positions in metres, ascending."""
    return scaled_equilibrium_positions(config.ion_count) * length_scale(config)


def force_residual(positions: np.ndarray, config: ChainConfig | None = None) -> np.ndarray:
    """Net axial force on each ion (trap plus Coulomb).

    Without ``config`` the positions are in units of ``ell`` and the force is
    returned in units of ``M w_x^2 ell``; otherwise SI throughout.
    """
    positions = np.asarray(positions, dtype=float)
    if config is None:
        return _forces(positions)
    ell = length_scale(config)
    return _forces(positions / ell) * config.spring_constant * ell


def coupling_matrix(positions: np.ndarray, config: ChainConfig | None = None) -> np.ndarray:
    """Second derivatives of the chain potential at the given positions.

    With ``config=None`` positions are in units of ``ell`` and the matrix is in
    units of ``M w_x^2``; with a config, positions are metres and the result is
    in kg/s^2.
    """
    positions = np.asarray(positions, dtype=float)
    if config is None:
        return _hessian(positions)
    return _hessian(positions / length_scale(config)) * config.spring_constant


def normal_modes(coupling: np.ndarray, config: ChainConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Mode frequencies mu_p (units of w_x) and orthonormal mode vectors.

    Returns ``(mu, b)`` with ``mu`` ascending and ``b[p]`` the p-th mode
    vector; the first nonzero component of every vector is positive. Pass the
    config when ``coupling`` is dimensional.
    """
    coupling = np.asarray(coupling, dtype=float)
    if config is not None:
        coupling = coupling / config.spring_constant
    if not np.allclose(coupling, coupling.T, rtol=1e-12, atol=1e-12):
        raise np.linalg.LinAlgError("coupling matrix is not symmetric")
    evals, evecs = np.linalg.eigh(coupling)
    if np.any(evals <= 0):
        raise np.linalg.LinAlgError(f"coupling matrix is not positive definite: {evals.min():.3e}")
    order = np.argsort(evals, kind="stable")
    evals = evals[order]
    vectors = evecs[:, order].T.copy()
    for vec in vectors:
        lead = vec[np.flatnonzero(np.abs(vec) > 1e-12)[0]]
        if lead < 0:
            vec *= -1
    return np.sqrt(evals), vectors


def coupling_constants(mode_frequencies: np.ndarray, mode_vectors: np.ndarray) -> np.ndarray:
    """s^(p)_m = b^(p)_m * sqrt(N / mu_p); row p, column m."""
    mode_frequencies = np.asarray(mode_frequencies, dtype=float)
    mode_vectors = np.asarray(mode_vectors, dtype=float)
    n = mode_vectors.shape[1]
    return mode_vectors * np.sqrt(n / mode_frequencies)[:, None]


def build_chain(config: ChainConfig) -> ChainModel:
    u = scaled_equilibrium_positions(config.ion_count)
    c = coupling_matrix(u)
    mu, b = normal_modes(c)
    return ChainModel(
        config=config,
        length_scale=length_scale(config),
        scaled_positions=u,
        coupling_matrix=c,
        mode_frequencies=mu,
        mode_vectors=b,
        coupling_constants=coupling_constants(mu, b),
    )


@dataclass(frozen=True)
class MinSpacing:
    fit: float  # m, empirical 2.018/N^0.559 law
    exact: float  # m, middle gap of the solved chain

    @property
    def relative_difference(self) -> float:
        return (self.fit - self.exact) / self.exact


def min_spacing(ion_count: int, axial_frequency: float, species: IonSpecies) -> MinSpacing:
    """Minimum inter-ion spacing, from the empirical law and from the exact solve."""
    if ion_count < 2:
        raise ValueError("minimum spacing needs at least two ions")
    config = ChainConfig(species, ion_count, axial_frequency)
    ell = length_scale(config)
    fit = ell * SPACING_FIT_PREFACTOR / ion_count**SPACING_FIT_EXPONENT
    gaps = np.diff(scaled_equilibrium_positions(ion_count))
    return MinSpacing(fit=fit, exact=float(gaps.min()) * ell)


def max_linear_ions(radial_frequency: float, axial_frequency: float) -> int:
    """Largest ion number that stays in a linear string, floor(1.82 (w_r/w_x)^1.13).

    Requires ``w_r >= w_x > 0``; the result is never below one ion.
    """
    if not axial_frequency > 0:
        raise ValueError("axial frequency must be positive")
    if radial_frequency < axial_frequency:
        raise ValueError("radial frequency must not be below the axial frequency")
    value = NMAX_PREFACTOR * (radial_frequency / axial_frequency) ** NMAX_EXPONENT
    return max(1, math.floor(value))
