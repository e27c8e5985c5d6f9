"""Single-molecule quantum trajectories and ensemble averages.

Two unravelings of the ensemble dynamics:

- Jones-Hore: per step dt, one of five mutually exclusive branches selected by
  a single uniform draw partitioned by cumulative probabilities
  (recombine through either channel, project to either subspace, or evolve
  unitarily).  For k_t = 0 these are exactly the three branches
  {nothing, singlet recombination, triplet projection}.
- Kominis: projective measurement of the singlet projector at rate
  (k_s + k_t)/2 with outcome probabilities <Qs>, 1 - <Qs>; recombination is an
  independent hazard k_s <Qs> + k_t <Qt>, optionally disabled so the surviving
  ensemble can be compared against the trace-preserving master equation.

Randomness contract: trajectory ``index`` under ``master_seed`` uses the
generator ``numpy.random.default_rng([master_seed, index])`` and consumes a
fixed number of uniforms per step (1 for Jones-Hore, 3 for Kominis), so
results are reproducible across machines and identical whether trajectories
are run singly or in batches.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import ConfigError
from .master import RhoSeries, Scenario, Theory
from .spaces import PureState


class EventKind(enum.Enum):
    PROJECT_SINGLET = "project-singlet"
    PROJECT_TRIPLET = "project-triplet"
    RECOMBINE = "recombine"


class Channel(enum.Enum):
    SINGLET = "singlet"
    TRIPLET = "triplet"


class Conditioning(enum.Enum):
    ALL = "all"
    NON_REACTED = "non-reacted"


@dataclass(frozen=True)
class TrajectoryEvent:
    time: float
    kind: EventKind
    channel: Channel | None = None

    def __post_init__(self):
        if self.kind is EventKind.RECOMBINE and self.channel is None:
            raise ConfigError("recombination events must carry a channel")
        if self.kind is not EventKind.RECOMBINE and self.channel is not None:
            raise ConfigError("projection events carry no channel")


@dataclass
class Trajectory:
    """Per-step record of one molecule: state vectors, alive flags, jump events."""

    times: np.ndarray
    psis: np.ndarray       # (n_times, dim); zero rows once dead
    alive: np.ndarray      # (n_times,) bool
    events: list[TrajectoryEvent]

    def state_at(self, i: int) -> PureState:
        if self.alive[i]:
            return PureState(vec=self.psis[i])
        return PureState(vec=self.psis[i], alive=False)

    def expectations(self, op: np.ndarray) -> np.ndarray:
        """<op> along the trajectory; zero after recombination."""
        vals = np.einsum("ni,ij,nj->n", self.psis.conj(), op, self.psis).real
        return np.where(self.alive, vals, 0.0)


@dataclass(frozen=True)
class EnsembleConfig:
    scenario: Scenario
    n_traj: int
    master_seed: int = 0
    recombination_enabled: bool = True

    def __post_init__(self):
        if self.n_traj < 1:
            raise ConfigError("n_traj must be >= 1")


@dataclass
class EnsembleResult:
    """Raw accumulators of a trajectory ensemble run."""

    times: np.ndarray
    sum_rho: np.ndarray       # (n_times, dim, dim): sum of |psi><psi| over alive
    alive_counts: np.ndarray  # (n_times,) int
    n_traj: int
    events: list[tuple[int, TrajectoryEvent]]
    theory: Theory


def trajectory_rng(master_seed: int, index: int) -> np.random.Generator:
    """The documented per-trajectory stream: default_rng([master_seed, index])."""
    return np.random.default_rng([master_seed, index])


_DRAWS_PER_STEP = {Theory.JONES_HORE: 1, Theory.KOMINIS: 3}
_BLOCK_STEPS = 1024
DEFAULT_CHUNK = 2048


def _propagator(scenario: Scenario) -> tuple[np.ndarray, bool]:
    u = expm(-1j * scenario.hamiltonian * scenario.dt)
    trivial = np.allclose(u, np.eye(scenario.space.dim), atol=0.0)
    return u, trivial


def _initial_vector(rho0: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh((rho0 + rho0.conj().T) / 2.0)
    if evals[-1] < 1.0 - 1e-10 or abs(np.trace(rho0).real - 1.0) > 1e-10:
        raise ConfigError("trajectory simulation requires a pure, normalized initial state")
    return evecs[:, -1].astype(complex)


def _project_rows(psi: np.ndarray, rows: np.ndarray, proj: np.ndarray):
    sub = psi[rows] @ proj.T
    norms = np.linalg.norm(sub, axis=1)
    psi[rows] = sub / norms[:, None]


def _record_events(events, indices, rows, t, kind, channel=None):
    ev = TrajectoryEvent(time=t, kind=kind, channel=channel)
    for i in rows:
        events.append((int(indices[i]), ev))


def _simulate_batch(config: EnsembleConfig, indices: np.ndarray,
                    record_states: bool):
    """Step a batch of trajectories over the full grid.

    Returns (sum_rho, alive_counts, events, states, alive_record); the last
    two are None unless record_states.
    """
    sc = config.scenario
    theory = sc.theory
    dim = sc.space.dim
    qs_op, qt_op = sc.space.q_singlet, sc.space.q_triplet
    k_s, k_t, dt = sc.k_s, sc.k_t, sc.dt
    lam = 0.5 * (k_s + k_t)
    if dt * (k_s + k_t) > 0.1:
        raise ConfigError("dt*(k_s+k_t) must be <= 0.1 for per-step Bernoulli sampling")
    u_mat, trivial_u = _propagator(sc)
    n_steps = sc.n_steps
    times = sc.times()
    n = len(indices)
    n_draws = _DRAWS_PER_STEP[theory]

    psi0 = _initial_vector(sc.rho0)
    psi = np.tile(psi0, (n, 1))
    alive = np.ones(n, dtype=bool)
    rngs = [trajectory_rng(config.master_seed, int(i)) for i in indices]

    sum_rho = np.zeros((n_steps + 1, dim, dim), dtype=complex)
    alive_counts = np.zeros(n_steps + 1, dtype=np.int64)
    events: list[tuple[int, TrajectoryEvent]] = []
    states = np.zeros((n, n_steps + 1, dim), dtype=complex) if record_states else None
    alive_rec = np.zeros((n, n_steps + 1), dtype=bool) if record_states else None

    def accumulate(step_idx):
        live = psi[alive]
        sum_rho[step_idx] += np.einsum("ni,nj->nij", live, live.conj()).sum(axis=0)
        alive_counts[step_idx] += int(alive.sum())
        if record_states:
            states[:, step_idx] = psi
            alive_rec[:, step_idx] = alive

    accumulate(0)

    step = 0
    while step < n_steps:
        block = min(_BLOCK_STEPS, n_steps - step)
        draws = np.stack([rng.random((block, n_draws)) for rng in rngs])  # (n, block, k)
        for b in range(block):
            t_next = times[step + b + 1]
            qs = np.einsum("ni,ij,nj->n", psi.conj(), qs_op, psi).real
            qt = np.einsum("ni,ij,nj->n", psi.conj(), qt_op, psi).real

            if theory is Theory.JONES_HORE:
                u = draws[:, b, 0]
                c1 = k_s * dt * qs
                c2 = c1 + k_t * dt * qt
                c3 = c2 + k_s * dt * qt
                c4 = c3 + k_t * dt * qs
                rec_s = alive & (u < c1)
                rec_t = alive & (u >= c1) & (u < c2)
                # A projection acting on a state already inside the target
                # subspace is the identity: no jump, no event.
                proj_t = alive & (u >= c2) & (u < c3) & (qs > 1e-12)
                proj_s = alive & (u >= c3) & (u < c4) & (qt > 1e-12)
                free = alive & (u >= c4)
            else:
                u0, u1, u2 = draws[:, b, 0], draws[:, b, 1], draws[:, b, 2]
                if config.recombination_enabled:
                    haz = (k_s * qs + k_t * qt) * dt
                    rec = alive & (u0 < haz)
                else:
                    rec = np.zeros(n, dtype=bool)
                fire = alive & ~rec & (u1 < lam * dt)
                # measurement outcomes that leave the state unchanged are
                # identity operations and are not recorded as events
                proj_s = fire & (u2 < qs) & (qt > 1e-12)
                proj_t = fire & (u2 >= qs) & (qs > 1e-12)
                free = alive & ~rec & ~fire
                # channel of an independent recombination, split by relative hazard
                with np.errstate(divide="ignore", invalid="ignore"):
                    frac_s = np.where(qs * k_s + qt * k_t > 0,
                                      k_s * qs / np.maximum(k_s * qs + k_t * qt, 1e-300), 0.0)
                rec_s = rec & (u2 < frac_s)
                rec_t = rec & ~rec_s

            dead = rec_s | rec_t
            if dead.any():
                rows_s = np.nonzero(rec_s)[0]
                rows_t = np.nonzero(rec_t)[0]
                _record_events(events, indices, rows_s, t_next, EventKind.RECOMBINE, Channel.SINGLET)
                _record_events(events, indices, rows_t, t_next, EventKind.RECOMBINE, Channel.TRIPLET)
                psi[dead] = 0.0
                alive[dead] = False
            if proj_t.any():
                rows = np.nonzero(proj_t)[0]
                _project_rows(psi, rows, qt_op)
                _record_events(events, indices, rows, t_next, EventKind.PROJECT_TRIPLET)
            if proj_s.any():
                rows = np.nonzero(proj_s)[0]
                _project_rows(psi, rows, qs_op)
                _record_events(events, indices, rows, t_next, EventKind.PROJECT_SINGLET)
            if not trivial_u and free.any():
                psi[free] = psi[free] @ u_mat.T

            accumulate(step + b + 1)
        step += block

    return sum_rho, alive_counts, events, states, alive_rec


def run_trajectory(config: EnsembleConfig, index: int) -> Trajectory:
    """Full per-step record of one trajectory; deterministic in (master_seed, index)."""
    if not (0 <= index < config.n_traj):
        raise ConfigError(f"trajectory index {index} outside [0, {config.n_traj})")
    _, _, events, states, alive_rec = _simulate_batch(
        config, np.array([index]), record_states=True)
    return Trajectory(
        times=config.scenario.times(),
        psis=states[0],
        alive=alive_rec[0],
        events=[ev for _, ev in events],
    )


def run_ensemble(config: EnsembleConfig, chunk: int = DEFAULT_CHUNK) -> EnsembleResult:
    """Run all n_traj trajectories, accumulating the raw ensemble sums."""
    sc = config.scenario
    n_steps = sc.n_steps
    sum_rho = np.zeros((n_steps + 1, sc.space.dim, sc.space.dim), dtype=complex)
    alive_counts = np.zeros(n_steps + 1, dtype=np.int64)
    events: list[tuple[int, TrajectoryEvent]] = []
    for start in range(0, config.n_traj, chunk):
        idx = np.arange(start, min(start + chunk, config.n_traj))
        s, c, ev, _, _ = _simulate_batch(config, idx, record_states=False)
        sum_rho += s
        alive_counts += c
        events.extend(ev)
    return EnsembleResult(times=sc.times(), sum_rho=sum_rho, alive_counts=alive_counts,
                          n_traj=config.n_traj, events=events, theory=sc.theory)


def ensemble_average(config: EnsembleConfig, conditioning: Conditioning,
                     result: EnsembleResult | None = None) -> RhoSeries:
    """Average the ensemble into a density-matrix series.

    ALL divides by n_traj (dead trajectories contribute zero, so the trace is
    the surviving fraction).  NON_REACTED divides by the surviving count; grid
    times with no survivors are marked with NaN states.
    """
    res = result if result is not None else run_ensemble(config)
    if conditioning is Conditioning.ALL:
        states = res.sum_rho / res.n_traj
    else:
        counts = res.alive_counts.astype(float)
        with np.errstate(invalid="ignore", divide="ignore"):
            states = res.sum_rho / counts[:, None, None]
        states[res.alive_counts == 0] = np.nan
    return RhoSeries(times=res.times, states=states, theory=res.theory)
