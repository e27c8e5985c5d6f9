import numpy as np
import pytest

from ripsim import (
    ConfigError,
    NumericError,
    Scenario,
    Theory,
    evolve,
    jh_closed_form,
    jones_hore_rhs,
    kominis_closed_form,
    kominis_rhs,
    st_space,
)
from tests.conftest import make_desk_scenario

H0 = np.zeros((2, 2), dtype=complex)
COHERENT = 0.5 * np.ones((2, 2), dtype=complex)


def random_hermitian(rng, dim=2):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (m + m.conj().T) / 2


class TestKominisRhs:
    def test_desk_example_value(self, space):
        out = kominis_rhs(COHERENT, H0, 1.0, 0.0, space)
        assert np.allclose(out, [[0, -0.25], [-0.25, 0]], atol=1e-15)

    def test_singlet_state_is_stationary(self, space):
        singlet = np.diag([1.0, 0.0]).astype(complex)
        for ks, kt in [(1.0, 0.0), (2.0, 3.0)]:
            assert np.allclose(kominis_rhs(singlet, H0, ks, kt, space), 0.0, atol=1e-15)

    def test_traceless_on_random_inputs(self, space):
        rng = np.random.default_rng(11)
        for _ in range(20):
            rho = random_hermitian(rng)
            out = kominis_rhs(rho, random_hermitian(rng), 1.3, 0.4, space)
            assert abs(np.trace(out)) < 1e-12

    def test_shape_mismatch(self, space):
        with pytest.raises(ConfigError):
            kominis_rhs(np.eye(3, dtype=complex), H0, 1.0, 0.0, space)


class TestJonesHoreRhs:
    def test_desk_example_value(self, space):
        out = jones_hore_rhs(COHERENT, H0, 1.0, 0.0, space)
        assert np.allclose(out, [[-0.5, -0.5], [-0.5, 0.0]], atol=1e-15)

    def test_triplet_state_is_dark(self, space):
        triplet = np.diag([0.0, 1.0]).astype(complex)
        assert np.allclose(jones_hore_rhs(triplet, H0, 1.0, 0.0, space), 0.0, atol=1e-15)

    def test_single_channel_reduction_is_exact(self, space):
        # k_t = 0, H = 0: the generator is exactly -k_s rho + k_s Qt rho Qt
        rng = np.random.default_rng(12)
        qt = space.q_triplet
        for _ in range(20):
            rho = random_hermitian(rng)
            full = jones_hore_rhs(rho, H0, 1.7, 0.0, space)
            reduced = -1.7 * rho + 1.7 * (qt @ rho @ qt)
            assert np.array_equal(full, reduced)


class TestScenarioValidation:
    def test_rejects_coarse_step(self, space):
        with pytest.raises(ConfigError, match="step size"):
            Scenario(space=space, theory=Theory.JONES_HORE, hamiltonian=H0,
                     k_s=1.0, k_t=0.0, rho0=COHERENT, t_end=10.0, dt=0.2)

    def test_rejects_negative_rates(self, space):
        with pytest.raises(ConfigError):
            Scenario(space=space, theory=Theory.JONES_HORE, hamiltonian=H0,
                     k_s=-1.0, k_t=0.0, rho0=COHERENT, t_end=10.0, dt=1e-3)

    def test_rejects_non_hermitian_hamiltonian(self, space):
        with pytest.raises(ConfigError):
            Scenario(space=space, theory=Theory.JONES_HORE,
                     hamiltonian=np.array([[0, 1j], [1j, 0]]),
                     k_s=1.0, k_t=0.0, rho0=COHERENT, t_end=10.0, dt=1e-3)

    def test_rejects_bad_initial_state(self, space):
        with pytest.raises(NumericError):
            Scenario(space=space, theory=Theory.JONES_HORE, hamiltonian=H0,
                     k_s=1.0, k_t=0.0, rho0=np.diag([2.0, 0.0]).astype(complex),
                     t_end=10.0, dt=1e-3)


class TestEvolve:
    def test_jh_matches_closed_form(self, desk_jh):
        series = evolve(desk_jh)
        ref = np.stack([jh_closed_form(t) for t in series.times])
        assert np.abs(series.states - ref).max() < 1e-6
        traces = np.einsum("tii->t", series.states).real
        # trace "reduced by half" asymptotically; at t = 10 the closed form
        # still carries a residual exp(-10)/2
        assert abs(traces[-1] - 0.5) < 1e-4
        # triplet population is constant
        assert np.abs(series.states[:, 1, 1].real - 0.5).max() < 1e-9

    def test_kominis_matches_closed_form(self, desk_kominis):
        series = evolve(desk_kominis)
        ref = np.stack([kominis_closed_form(t) for t in series.times])
        assert np.abs(series.states - ref).max() < 1e-6
        traces = np.einsum("tii->t", series.states).real
        assert np.abs(traces - 1.0).max() < 1e-9
        # approaches diag(1/2, 1/2); residual coherence is exp(-5)/2 at t = 10
        assert np.allclose(series.states[-1], np.diag([0.5, 0.5]), atol=4e-3)

    def test_hermiticity_and_positivity_preserved(self):
        for theory in Theory:
            series = evolve(make_desk_scenario(theory, t_end=5.0, omega=2.0))
            for rho in series.states[::500]:
                assert np.linalg.norm(rho - rho.conj().T, ord=np.inf) < 1e-10
                assert np.linalg.eigvalsh(rho).min() > -1e-9

    def test_jh_trace_non_increasing(self, desk_jh):
        series = evolve(desk_jh)
        traces = np.einsum("tii->t", series.states).real
        assert np.all(np.diff(traces) <= 1e-12)

    def test_fourth_order_convergence(self):
        # halving dt should shrink the error against the closed form ~16x
        errs = []
        for dt in (4e-2, 2e-2):
            series = evolve(make_desk_scenario(Theory.JONES_HORE, t_end=4.0, dt=dt))
            ref = np.stack([jh_closed_form(t) for t in series.times])
            errs.append(np.abs(series.states - ref).max())
        ratio = errs[0] / errs[1]
        assert 10 < ratio < 22
