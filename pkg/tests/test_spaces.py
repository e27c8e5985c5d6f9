import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ripsim import (
    ConfigError,
    PureState,
    coherent_st_state,
    expectation,
    mixing_hamiltonian,
    radical_pair_space,
    st_space,
)


def assert_projector_pair(space):
    qs, qt = space.q_singlet, space.q_triplet
    eye = np.eye(space.dim)
    assert np.allclose(qs @ qs, qs, atol=1e-12)
    assert np.allclose(qt @ qt, qt, atol=1e-12)
    assert np.allclose(qs @ qt, 0.0, atol=1e-12)
    assert np.allclose(qs + qt, eye, atol=1e-12)
    assert np.allclose(qs, qs.conj().T, atol=1e-12)


def test_st_space_projectors():
    sp = st_space()
    assert sp.dim == 2
    assert np.allclose(sp.q_singlet, np.diag([1, 0]))
    assert np.allclose(sp.q_triplet, np.diag([0, 1]))
    assert sp.labels == ("S", "T")
    assert_projector_pair(sp)


@pytest.mark.parametrize("mults,dim,rank_s", [
    ([], 4, 1),
    ([2], 8, 2),
    ([2, 3], 24, 6),
])
def test_radical_pair_space_ranks(mults, dim, rank_s):
    sp = radical_pair_space(mults)
    assert sp.dim == dim
    assert round(np.trace(sp.q_singlet).real) == rank_s
    assert round(np.trace(sp.q_triplet).real) == dim - rank_s
    assert_projector_pair(sp)


def test_radical_pair_space_rejects_zero_multiplicity():
    with pytest.raises(ConfigError):
        radical_pair_space([2, 0])


def test_radical_pair_space_reduces_to_st_space():
    # states confined to span{|S>, |T0>} see the same projector expectations
    # as the 2-dim model space
    big = radical_pair_space([])
    small = st_space()
    for a, b in [(1.0, 0.0), (0.6, 0.8), (1 / np.sqrt(2), 1j / np.sqrt(2))]:
        psi_small = np.array([a, b], dtype=complex)
        psi_big = np.zeros(4, dtype=complex)
        psi_big[0], psi_big[2] = a, b  # S and T0 slots
        rho_small = np.outer(psi_small, psi_small.conj())
        rho_big = np.outer(psi_big, psi_big.conj())
        assert abs(expectation(big.q_singlet, rho_big)
                   - expectation(small.q_singlet, rho_small)) < 1e-12
        assert abs(expectation(big.q_triplet, rho_big)
                   - expectation(small.q_triplet, rho_small)) < 1e-12


def test_mixing_hamiltonian():
    sp = st_space()
    assert np.allclose(mixing_hamiltonian(sp, 0.0), 0.0)
    assert np.allclose(mixing_hamiltonian(sp, 1.0), [[0, 0.5], [0.5, 0]])
    h = mixing_hamiltonian(sp, 3.7)
    assert np.allclose(h, h.conj().T, atol=1e-15)


def test_mixing_hamiltonian_rejects_large_spaces():
    with pytest.raises(ConfigError):
        mixing_hamiltonian(radical_pair_space([]), 1.0)


def test_coherent_st_state():
    sp = st_space()
    psi = coherent_st_state(sp)
    assert psi.alive
    rho = psi.density()
    assert np.allclose(rho, 0.5 * np.ones((2, 2)))
    assert abs(expectation(sp.q_singlet, rho) - 0.5) < 1e-12
    assert abs(np.trace(rho @ rho).real - 1.0) < 1e-12
    with pytest.raises(ConfigError):
        coherent_st_state(radical_pair_space([]))


def test_dead_state_density_is_zero():
    dead = PureState(vec=np.zeros(2, dtype=complex), alive=False)
    assert np.allclose(dead.density(), 0.0)


def test_expectation_basics():
    sp = st_space()
    singlet = np.diag([1.0, 0.0]).astype(complex)
    assert expectation(sp.q_singlet, singlet) == pytest.approx(1.0)
    rho = np.array([[0.3, 0.1], [0.1, 0.4]], dtype=complex)
    assert expectation(np.eye(2), rho) == pytest.approx(np.trace(rho).real)
    with pytest.raises(ConfigError):
        expectation(np.eye(3), rho)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-2, 2), st.floats(-2, 2))
def test_expectation_is_bilinear(seed, a, b):
    rng = np.random.default_rng(seed)

    def herm():
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        return (m + m.conj().T) / 2

    op1, op2, rho1, rho2 = herm(), herm(), herm(), herm()
    lhs = expectation(a * op1 + b * op2, rho1)
    rhs = a * expectation(op1, rho1) + b * expectation(op2, rho1)
    assert lhs == pytest.approx(rhs, abs=1e-10)
    lhs = expectation(op1, a * rho1 + b * rho2)
    rhs = a * expectation(op1, rho1) + b * expectation(op1, rho2)
    assert lhs == pytest.approx(rhs, abs=1e-10)
