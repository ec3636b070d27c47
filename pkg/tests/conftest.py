import json
from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from ent_crit.core import DensityMatrix
from ent_crit.criteria import LOOPair
from ent_crit.loo_basis import pauli_loos
from ent_crit.states import (
    basis_vector,
    maximally_mixed,
    product_state,
    separable_corpus,
    singlet,
    state_corpus,
)


@pytest.fixture
def singlet_state() -> DensityMatrix:
    return singlet()


@pytest.fixture
def mixed_2x2() -> DensityMatrix:
    return maximally_mixed(2, 2)


@pytest.fixture
def product_00() -> DensityMatrix:
    e0 = basis_vector(2, 0)
    return product_state(e0, e0)


@pytest.fixture
def pauli_pair() -> LOOPair:
    return LOOPair.from_bases(*pauli_loos())


@pytest.fixture(scope='session')
def random_states() -> list[DensityMatrix]:
    return state_corpus(300, seed=20240611)


@pytest.fixture(scope='session')
def separable_states() -> list[DensityMatrix]:
    return separable_corpus(300, seed=8675309)


@pytest.fixture
def write_state(tmp_path: Path) -> Callable[..., Path]:
    '''
    Write a state file and return its path. Accepts a ``DensityMatrix`` or a
    raw JSON-able document.
    '''
    def _write(state: DensityMatrix | dict | str, name: str = 'state.json') -> Path:
        path = tmp_path / name
        if isinstance(state, DensityMatrix):
            payload = {
                'dim_a': state.dim_a,
                'dim_b': state.dim_b,
                'matrix': [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(state.mat)],
            }
            path.write_text(json.dumps(payload))
        elif isinstance(state, dict):
            path.write_text(json.dumps(state))
        else:
            path.write_text(state)
        return path

    return _write
