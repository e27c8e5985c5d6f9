import numpy as np
import pytest

from ripsim import Scenario, Theory, coherent_st_state, st_space


@pytest.fixture(scope="session")
def space():
    return st_space()


def make_desk_scenario(theory, t_end=10.0, dt=1e-3, omega=0.0):
    """The benchmark scenario: H = 0 (unless omega given), k_t = 0, coherent start."""
    from ripsim import mixing_hamiltonian

    sp = st_space()
    return Scenario(
        space=sp,
        theory=theory,
        hamiltonian=mixing_hamiltonian(sp, omega),
        k_s=1.0,
        k_t=0.0,
        rho0=coherent_st_state(sp).density(),
        t_end=t_end,
        dt=dt,
    )


@pytest.fixture(scope="session")
def desk_jh(space):
    return make_desk_scenario(Theory.JONES_HORE)


@pytest.fixture(scope="session")
def desk_kominis(space):
    return make_desk_scenario(Theory.KOMINIS)
