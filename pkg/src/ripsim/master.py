"""Master-equation right-hand sides and a fixed-step RK4 integrator.

Two competing generators for the same physical system:

- Kominis: trace-preserving Lindblad dephasing of the singlet-triplet
  coherence, rate (k_s + k_t)/2.
- Jones-Hore: trace-decaying form, -(k_s + k_t) rho + k_s Qt rho Qt
  + k_t Qs rho Qs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericError
from .spaces import SpinSpace, check_density_matrix


class Theory(enum.Enum):
    KOMINIS = "kominis"
    JONES_HORE = "jones-hore"


@dataclass(frozen=True)
class Scenario:
    """Full model configuration for one simulation run.

    Rates are in units of k_s (dimensionless time tau = k_s * t); dt and t_end
    are in units of 1/k_s.
    """

    space: SpinSpace
    theory: Theory
    hamiltonian: np.ndarray
    k_s: float
    k_t: float
    rho0: np.ndarray
    t_end: float
    dt: float

    def __post_init__(self):
        d = self.space.dim
        if self.hamiltonian.shape != (d, d):
            raise ConfigError("Hamiltonian shape does not match the space")
        if np.linalg.norm(self.hamiltonian - self.hamiltonian.conj().T, ord=np.inf) > 1e-12:
            raise ConfigError("Hamiltonian is not Hermitian")
        if self.rho0.shape != (d, d):
            raise ConfigError("rho0 shape does not match the space")
        if self.k_s < 0 or self.k_t < 0:
            raise ConfigError("recombination rates must be non-negative")
        if not (0 < self.dt <= self.t_end):
            raise ConfigError("require 0 < dt <= t_end")
        if self.dt * max(self.k_s, self.k_t) > 0.1:
            raise ConfigError(
                f"step size too coarse: dt*max(k_s,k_t) = {self.dt * max(self.k_s, self.k_t):.3g} > 0.1"
            )
        check_density_matrix(self.rho0)

    @property
    def n_steps(self) -> int:
        return round(self.t_end / self.dt)

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt


@dataclass
class RhoSeries:
    """Time-indexed density-matrix record; states has shape (n_times, dim, dim)."""

    times: np.ndarray
    states: np.ndarray
    theory: Theory | None = None

    def __post_init__(self):
        if len(self.times) != len(self.states):
            raise ConfigError("times and states must have equal length")
        if len(self.times) and (self.times[0] != 0.0 or np.any(np.diff(self.times) <= 0)):
            raise ConfigError("times must start at 0 and be strictly increasing")


def kominis_rhs(rho: np.ndarray, h: np.ndarray, k_s: float, k_t: float,
                space: SpinSpace) -> np.ndarray:
    """-i[H, rho] - (k_s+k_t)/2 (Qs rho + rho Qs - 2 Qs rho Qs); traceless."""
    if rho.shape != h.shape or rho.shape != space.q_singlet.shape:
        raise ConfigError("shape mismatch in kominis_rhs")
    qs = space.q_singlet
    comm = h @ rho - rho @ h
    anti = qs @ rho + rho @ qs - 2.0 * (qs @ rho @ qs)
    return -1j * comm - 0.5 * (k_s + k_t) * anti


def jones_hore_rhs(rho: np.ndarray, h: np.ndarray, k_s: float, k_t: float,
                   space: SpinSpace) -> np.ndarray:
    """-i[H, rho] - (k_s+k_t) rho + k_s Qt rho Qt + k_t Qs rho Qs."""
    if rho.shape != h.shape or rho.shape != space.q_singlet.shape:
        raise ConfigError("shape mismatch in jones_hore_rhs")
    qs, qt = space.q_singlet, space.q_triplet
    comm = h @ rho - rho @ h
    return -1j * comm - (k_s + k_t) * rho + k_s * (qt @ rho @ qt) + k_t * (qs @ rho @ qs)


_RHS = {Theory.KOMINIS: kominis_rhs, Theory.JONES_HORE: jones_hore_rhs}

# Hermiticity drift larger than this after symmetrization indicates a genuine
# integrator failure rather than floating-point noise.
HERMITIZE_ABORT = 1e-8


def evolve(scenario: Scenario) -> RhoSeries:
    """Classic fourth-order fixed-step integration of the selected generator.

    After each step the state is symmetrized, rho <- (rho + rho^dag)/2; a
    correction larger than HERMITIZE_ABORT, a negative eigenvalue below -1e-9,
    or a trace excursion aborts with a NumericError naming the step time.
    """
    rhs = _RHS[scenario.theory]
    h, k_s, k_t, space = scenario.hamiltonian, scenario.k_s, scenario.k_t, scenario.space
    dt = scenario.dt
    n_steps = scenario.n_steps
    times = scenario.times()

    rho = scenario.rho0.astype(complex)
    states = np.empty((n_steps + 1, space.dim, space.dim), dtype=complex)
    states[0] = rho
    tr0 = float(np.trace(rho).real)

    for k in range(n_steps):
        k1 = rhs(rho, h, k_s, k_t, space)
        k2 = rhs(rho + 0.5 * dt * k1, h, k_s, k_t, space)
        k3 = rhs(rho + 0.5 * dt * k2, h, k_s, k_t, space)
        k4 = rhs(rho + dt * k3, h, k_s, k_t, space)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        t = times[k + 1]
        sym = (rho + rho.conj().T) / 2.0
        correction = np.linalg.norm(rho - sym, ord=np.inf)
        if correction > HERMITIZE_ABORT:
            raise NumericError(t, f"Hermiticity correction {correction:.3e} exceeds bound")
        rho = sym

        evals = np.linalg.eigvalsh(rho)
        if evals.min() < -1e-9:
            raise NumericError(t, f"negative eigenvalue {evals.min():.3e}")
        tr = float(np.trace(rho).real)
        if tr > 1.0 + 1e-9 or tr < -1e-9:
            raise NumericError(t, f"trace {tr:.9g} outside [0, 1]")
        if scenario.theory is Theory.KOMINIS and abs(tr - tr0) > 1e-9:
            raise NumericError(t, f"trace drift {tr - tr0:.3e} under trace-preserving generator")
        states[k + 1] = rho

    return RhoSeries(times=times, states=states, theory=scenario.theory)
