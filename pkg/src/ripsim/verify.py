"""Self-verification suite: oracles vs solvers, trajectories vs master equations.

Each check returns (name, passed, detail).  The CLI `verify` command prints
one line per check and exits nonzero if any fails.
"""

from __future__ import annotations

import numpy as np

from .closed_forms import discrete_markov_oracle, jh_closed_form, kominis_closed_form
from .master import Scenario, Theory, evolve, jones_hore_rhs, kominis_rhs
from .spaces import coherent_st_state, st_space
from .trajectories import Conditioning, EnsembleConfig, EventKind, ensemble_average, run_ensemble

_VERIFY_SEED = 20260826


def _desk_scenario(theory: Theory, t_end: float = 10.0, dt: float = 1e-3) -> Scenario:
    space = st_space()
    return Scenario(
        space=space,
        theory=theory,
        hamiltonian=np.zeros((2, 2), dtype=complex),
        k_s=1.0,
        k_t=0.0,
        rho0=coherent_st_state(space).density(),
        t_end=t_end,
        dt=dt,
    )


def check_closed_forms_satisfy_generators() -> tuple[str, bool, str]:
    space = st_space()
    h = np.zeros((2, 2), dtype=complex)
    eps = 1e-6
    worst = 0.0
    for t in (0.1, 0.5, 1.0, 2.0, 5.0):
        for form, rhs in ((jh_closed_form, jones_hore_rhs), (kominis_closed_form, kominis_rhs)):
            num = (form(t + eps) - form(t - eps)) / (2 * eps)
            ana = rhs(form(t), h, 1.0, 0.0, space)
            worst = max(worst, float(np.abs(num - ana).max()))
    return ("closed forms satisfy their generators", worst <= 1e-6, f"max defect {worst:.2e}")


def check_jh_evolve() -> tuple[str, bool, str]:
    series = evolve(_desk_scenario(Theory.JONES_HORE))
    ref = np.stack([jh_closed_form(t) for t in series.times])
    err = float(np.abs(series.states - ref).max())
    return ("trace-decaying solver matches closed form", err <= 1e-6, f"sup error {err:.2e}")


def check_kominis_evolve() -> tuple[str, bool, str]:
    series = evolve(_desk_scenario(Theory.KOMINIS))
    ref = np.stack([kominis_closed_form(t) for t in series.times])
    err = float(np.abs(series.states - ref).max())
    tr_err = float(np.abs(np.einsum("tii->t", series.states).real - 1.0).max())
    ok = err <= 1e-6 and tr_err <= 1e-9
    return ("trace-preserving solver matches closed form",
            ok, f"sup error {err:.2e}, trace drift {tr_err:.2e}")


def check_unraveling_identity() -> tuple[str, bool, str]:
    space = st_space()
    qs, qt = space.q_singlet, space.q_triplet
    h0 = np.zeros((2, 2), dtype=complex)
    rng = np.random.default_rng(_VERIFY_SEED)
    k_s, k_t, dt = 1.0, 0.7, 1e-3
    lam = 0.5 * (k_s + k_t)
    worst = 0.0
    for _ in range(50):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        rho = (a + a.conj().T) / 2.0
        averaged = (1 - lam * dt) * rho + lam * dt * (qs @ rho @ qs + qt @ rho @ qt)
        stepped = rho + dt * kominis_rhs(rho, h0, k_s, k_t, space)
        worst = max(worst, float(np.abs(averaged - stepped).max() / np.abs(rho).max()))
    return ("projective unraveling reproduces the dephasing generator",
            worst <= 1e-14, f"max relative defect {worst:.2e}")


def check_markov_recursion() -> tuple[str, bool, str]:
    times, states = discrete_markov_oracle(k_s=1.0, dt=1e-4, t_end=10.0)
    ref = np.stack([jh_closed_form(t) for t in times])
    err = float(np.abs(states - ref).max())
    return ("branch-averaging recursion matches closed form", err <= 1e-3, f"sup error {err:.2e}")


def _ensemble_errors(theory: Theory, recombination: bool, n_traj: int):
    sc = _desk_scenario(theory)
    config = EnsembleConfig(scenario=sc, n_traj=n_traj, master_seed=_VERIFY_SEED,
                            recombination_enabled=recombination)
    result = run_ensemble(config)
    avg = ensemble_average(config, Conditioning.ALL, result=result)
    form = jh_closed_form if theory is Theory.JONES_HORE else kominis_closed_form
    ref = np.stack([form(t) for t in avg.times])
    qs_err = float(np.abs((avg.states - ref)[:, 0, 0].real).max())
    tr_err = float(np.abs(np.einsum("tii->t", avg.states - ref).real).max())
    return qs_err, tr_err, result


def check_jh_ensemble(n_traj: int = 2000):
    tol = 3 * 0.5 / np.sqrt(n_traj)
    qs_err, tr_err, result = _ensemble_errors(Theory.JONES_HORE, True, n_traj)
    ok = qs_err <= tol and tr_err <= tol
    check = ("trajectory average matches trace-decaying master equation",
             ok, f"errors {qs_err:.3f}/{tr_err:.3f} vs tol {tol:.3f}")
    return check, result


def check_kominis_ensemble(n_traj: int = 2000):
    tol = 3 * 0.5 / np.sqrt(n_traj)
    qs_err, tr_err, result = _ensemble_errors(Theory.KOMINIS, False, n_traj)
    ok = qs_err <= tol and tr_err <= tol
    return ("trajectory average (no recombination) matches dephasing master equation",
            ok, f"errors {qs_err:.3f}/{tr_err:.3f} vs tol {tol:.3f}")


def check_jh_event_structure(result) -> tuple[str, bool, str]:
    per_traj: dict[int, int] = {}
    for idx, _ in result.events:
        per_traj[idx] = per_traj.get(idx, 0) + 1
    worst = max(per_traj.values(), default=0)
    return ("every trace-decaying trajectory has at most one event",
            worst <= 1, f"max events per trajectory {worst}")


def check_kominis_event_ordering(n_traj: int = 2000) -> tuple[str, bool, str]:
    sc = _desk_scenario(Theory.KOMINIS)
    config = EnsembleConfig(scenario=sc, n_traj=n_traj, master_seed=_VERIFY_SEED,
                            recombination_enabled=True)
    result = run_ensemble(config)
    by_traj: dict[int, list] = {}
    for idx, ev in result.events:
        by_traj.setdefault(idx, []).append(ev)
    n_ordered = 0
    bad_after_triplet = 0
    for evs in by_traj.values():
        evs.sort(key=lambda e: e.time)
        seen_ps = seen_pt = False
        for ev in evs:
            if ev.kind is EventKind.PROJECT_SINGLET:
                seen_ps = True
            elif ev.kind is EventKind.PROJECT_TRIPLET:
                seen_pt = True
            elif ev.kind is EventKind.RECOMBINE:
                if seen_ps:
                    n_ordered += 1
                if seen_pt and not seen_ps:
                    bad_after_triplet += 1
    ok = n_ordered > 0 and bad_after_triplet == 0
    return ("singlet projection followed by later recombination occurs; none after triplet lock",
            ok, f"{n_ordered} ordered pairs, {bad_after_triplet} forbidden")


def run_checks() -> list[tuple[str, bool, str]]:
    checks = [
        check_closed_forms_satisfy_generators(),
        check_jh_evolve(),
        check_kominis_evolve(),
        check_unraveling_identity(),
        check_markov_recursion(),
    ]
    jh_check, jh_result = check_jh_ensemble()
    checks.append(jh_check)
    checks.append(check_kominis_ensemble())
    checks.append(check_jh_event_structure(jh_result))
    checks.append(check_kominis_event_ordering())
    return checks
