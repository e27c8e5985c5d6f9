"""Independent closed-form and brute-force references for the benchmark example.

The benchmark ("desk") example is: no singlet-triplet mixing (H = 0), a single
singlet recombination channel (k_T = 0), initial state (|S> + |T>)/sqrt(2).
Everything here is hard-coded analytic formulas or exact expectation
recursions, independent of the integrator and the trajectory sampler, and is
used as ground truth by the test suite and the verification command.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from .spaces import PureState


def jh_closed_form(t: float, k_s: float = 1.0) -> np.ndarray:
    """Solution of the single-channel trace-decaying master equation.

    In the [S, T] basis, with x = exp(-k_s t):
        rho(t) = [[x/2, x/2], [x/2, 1/2]]
    The coherence and singlet population decay at rate k_s; the triplet
    population is conserved.
    """
    x = math.exp(-k_s * t)
    return np.array([[x / 2.0, x / 2.0], [x / 2.0, 0.5]], dtype=complex)


def kominis_closed_form(t: float, k_s: float = 1.0) -> np.ndarray:
    """Solution of the trace-preserving decoherence master equation.

    Populations are frozen at 1/2; only the singlet-triplet coherence decays,
    at rate k_s/2:
        rho(t) = [[1/2, y/2], [y/2, 1/2]],  y = exp(-k_s t / 2)
    """
    y = math.exp(-k_s * t / 2.0)
    return np.array([[0.5, y / 2.0], [y / 2.0, 0.5]], dtype=complex)


def atom_no_photon_state(t: float, gamma: float) -> PureState:
    """Conditional no-detection state of a decaying two-level atom.

    Starting from (|e> + |g>)/sqrt(2), conditioning on no photon up to time t
    gives (exp(-gamma t / 2)|e> + |g>) / N.  Basis ordering is [e, g].
    """
    a = math.exp(-gamma * t / 2.0)
    vec = np.array([a, 1.0], dtype=complex)
    return PureState(vec=vec / np.linalg.norm(vec))


def discrete_markov_oracle(k_s: float, dt: float, t_end: float):
    """Exact expectation recursion over the three per-step branches.

    rho_{t+dt} = (1 - k_s dt) rho_t + k_s dt Q_T rho_t Q_T, iterated on the
    grid with no random sampling.  Returns (times, states) arrays.  First-order
    accurate in dt against the closed form; requires k_s*dt <= 1e-3.
    """
    if k_s * dt > 1e-3:
        raise ValueError(f"k_s*dt = {k_s * dt:.3g} too coarse for the recursion oracle")
    n_steps = round(t_end / dt)
    times = np.arange(n_steps + 1) * dt
    qt = np.diag([0.0, 1.0]).astype(complex)
    rho = np.full((2, 2), 0.5, dtype=complex)
    states = np.empty((n_steps + 1, 2, 2), dtype=complex)
    states[0] = rho
    for k in range(n_steps):
        rho = (1.0 - k_s * dt) * rho + k_s * dt * (qt @ rho @ qt)
        states[k + 1] = rho
    return times, states


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log(1.0 - p)


def jh_information_integral(t_lo: float, t_hi: float, k_s: float = 1.0) -> float:
    """Quadrature reference for the cumulative information gain on [t_lo, t_hi].

    Substituting u = exp(-k_s t) into the closed-form solution turns the gain
    integral into (1/2) * int_{exp(-k_s t_hi)}^{exp(-k_s t_lo)} s(u/(1+u)) du
    with s the binary entropy.  t_hi may be inf.
    """
    u_hi = math.exp(-k_s * t_lo)
    u_lo = 0.0 if math.isinf(t_hi) else math.exp(-k_s * t_hi)
    val, _ = quad(lambda u: _binary_entropy(u / (1.0 + u)), u_lo, u_hi, epsabs=1e-12)
    return 0.5 * val


# Grid-independent landmarks of the benchmark example.
PURITY_MIN_TIME = math.log(3.0)          # minimum of normalized purity, in units 1/k_s
PURITY_MIN_VALUE = 0.75
ENTROPY_PEAK_VALUE = 0.4164955306996875  # -sum(l ln l), l = (2 +- sqrt(2))/4
