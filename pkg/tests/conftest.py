import numpy as np

from e91sim.states import TwoQubitState


def random_density_matrix(rng: np.random.Generator) -> np.ndarray:
    """A generic full-rank 4x4 density matrix, M M^dagger normalized."""
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def random_state(rng: np.random.Generator) -> TwoQubitState:
    return TwoQubitState(random_density_matrix(rng))
