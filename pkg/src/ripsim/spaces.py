"""Hilbert spaces, singlet/triplet projectors, Hamiltonians and initial states.

Conventions used throughout the package:

- Density matrices and operators are plain complex ``(dim, dim)`` numpy arrays.
- All rates and frequencies are expressed in units of the singlet
  recombination rate, so time is the dimensionless ``k_S * t``.
- In the two-dimensional model space the basis ordering is ``[S, T]``; in the
  four-dimensional electron-pair space it is ``[S, T+, T0, T-]``, so the
  singlet projector is always the top-left unit block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import ConfigError

PROJECTOR_TOL = 1e-12


@dataclass(frozen=True)
class SpinSpace:
    """Hilbert-space descriptor: dimension, projector pair and basis labels."""

    dim: int
    q_singlet: np.ndarray
    q_triplet: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        qs, qt = self.q_singlet, self.q_triplet
        eye = np.eye(self.dim)
        for name, q in (("q_singlet", qs), ("q_triplet", qt)):
            if q.shape != (self.dim, self.dim):
                raise ConfigError(f"{name} has shape {q.shape}, expected {(self.dim, self.dim)}")
            if not np.allclose(q, q.conj().T, atol=PROJECTOR_TOL):
                raise ConfigError(f"{name} is not Hermitian")
            if not np.allclose(q @ q, q, atol=PROJECTOR_TOL):
                raise ConfigError(f"{name} is not idempotent")
        if not np.allclose(qs @ qt, 0.0, atol=PROJECTOR_TOL):
            raise ConfigError("projectors are not orthogonal")
        if not np.allclose(qs + qt, eye, atol=PROJECTOR_TOL):
            raise ConfigError("projectors do not sum to the identity")


@dataclass(frozen=True)
class PureState:
    """A single molecule's spin state; ``alive=False`` once it has recombined."""

    vec: np.ndarray
    alive: bool = True

    def __post_init__(self):
        if self.alive and abs(np.linalg.norm(self.vec) - 1.0) > 1e-12:
            raise ConfigError("alive pure state must have unit norm")

    def density(self) -> np.ndarray:
        if not self.alive:
            return np.zeros((self.vec.size, self.vec.size), dtype=complex)
        return np.outer(self.vec, self.vec.conj())


def st_space() -> SpinSpace:
    """The reduced two-level space spanned by one singlet and one triplet state."""
    return SpinSpace(
        dim=2,
        q_singlet=np.diag([1.0, 0.0]).astype(complex),
        q_triplet=np.diag([0.0, 1.0]).astype(complex),
        labels=("S", "T"),
    )


def radical_pair_space(nuclear_multiplicities: list[int] | tuple[int, ...] = ()) -> SpinSpace:
    """Two electron spins plus optional nuclear spins, in the ST basis.

    Electron-pair basis ordering is [S, T+, T0, T-], tensored with the nuclear
    product space; Q_S projects onto the singlet sublevels.
    """
    for m in nuclear_multiplicities:
        if int(m) != m or m < 1:
            raise ConfigError(f"nuclear multiplicity must be a positive integer, got {m!r}")
    n_nuc = prod(int(m) for m in nuclear_multiplicities)
    dim = 4 * n_nuc
    qs_el = np.diag([1.0, 0.0, 0.0, 0.0]).astype(complex)
    qs = np.kron(qs_el, np.eye(n_nuc))
    el_labels = ("S", "T+", "T0", "T-")
    if n_nuc == 1:
        labels = el_labels
    else:
        labels = tuple(f"{e};n{k}" for e in el_labels for k in range(n_nuc))
    return SpinSpace(dim=dim, q_singlet=qs, q_triplet=np.eye(dim) - qs, labels=labels)


def mixing_hamiltonian(space: SpinSpace, omega: float) -> np.ndarray:
    """Singlet-triplet mixing Hamiltonian (omega/2)(|S><T| + |T><S|), omega in units of k_S."""
    if space.dim != 2:
        raise ConfigError("mixing_hamiltonian is defined on the 2-dim ST space only")
    return np.array([[0.0, omega / 2.0], [omega / 2.0, 0.0]], dtype=complex)


def coherent_st_state(space: SpinSpace) -> PureState:
    """The coherent superposition (|S> + |T>)/sqrt(2)."""
    if space.dim != 2:
        raise ConfigError("coherent_st_state is defined on the 2-dim ST space only")
    return PureState(vec=np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0))


def expectation(op: np.ndarray, rho: np.ndarray) -> float:
    """Re Tr{op rho}; asserts the imaginary residue is negligible."""
    if op.shape != rho.shape:
        raise ConfigError(f"shape mismatch: {op.shape} vs {rho.shape}")
    val = np.trace(op @ rho)
    if abs(val.imag) > 1e-10:
        raise ConfigError(f"expectation value has imaginary residue {val.imag:.3e}")
    return float(val.real)


def check_density_matrix(rho: np.ndarray, *, time: float = 0.0):
    """Validate Hermiticity, positivity and trace bounds of a density matrix.

    Raises NumericError tagged with `time` on violation.  Trace may be below 1
    (trace-decaying dynamics); eigenvalues in [-1e-9, 0) are tolerated.
    """
    from .errors import NumericError

    herm_defect = np.linalg.norm(rho - rho.conj().T, ord=np.inf)
    if herm_defect > 1e-10:
        raise NumericError(time, f"Hermiticity defect {herm_defect:.3e}")
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2.0)
    if evals.min() < -1e-9:
        raise NumericError(time, f"negative eigenvalue {evals.min():.3e}")
    tr = float(np.trace(rho).real)
    if tr < -1e-9 or tr > 1.0 + 1e-9:
        raise NumericError(time, f"trace {tr:.6g} outside [0, 1]")
