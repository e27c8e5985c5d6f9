"""Spin-selective radical-ion-pair reaction dynamics.

Master equations, quantum-jump trajectories and entropy/information
diagnostics for two competing theories of spin-selective recombination.
"""

from .closed_forms import (
    atom_no_photon_state,
    discrete_markov_oracle,
    jh_closed_form,
    jh_information_integral,
    kominis_closed_form,
)
from .diagnostics import (
    DiagnosticRow,
    basic_observables,
    binary_information,
    diagnostics_table,
    information_gain,
    normalized_observables,
    von_neumann_entropy,
)
from .errors import ConfigError, EmptyEnsembleError, NumericError, RipsimError
from .master import RhoSeries, Scenario, Theory, evolve, jones_hore_rhs, kominis_rhs
from .spaces import (
    PureState,
    SpinSpace,
    coherent_st_state,
    expectation,
    mixing_hamiltonian,
    radical_pair_space,
    st_space,
)
from .trajectories import (
    Channel,
    Conditioning,
    EnsembleConfig,
    EnsembleResult,
    EventKind,
    Trajectory,
    TrajectoryEvent,
    ensemble_average,
    run_ensemble,
    run_trajectory,
)

__version__ = "0.1.0"
