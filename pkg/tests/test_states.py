import numpy as np
import pytest
from numpy.testing import assert_allclose

from ent_crit.core import is_density_matrix
from ent_crit.errors import ParameterError
from ent_crit.states import (
    FAMILIES,
    haar_unitary,
    max_entangled,
    maximally_mixed,
    noisy_singlet,
    noisy_singlet_noise,
    product_state,
    random_density,
    random_density_matrix,
    random_separable,
    separable_corpus,
    singlet,
    singlet_vector,
    state_corpus,
    tiles,
    tiles_rho_be,
    tiles_vectors,
)


def _valid(rho) -> bool:
    return is_density_matrix(rho.mat, rho.dim_a, rho.dim_b).valid


def test_singlet():
    psi = singlet_vector()
    assert_allclose(psi, [0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0])
    assert _valid(singlet())


@pytest.mark.parametrize('p', [0.0, 0.27, 1.0])
def test_noisy_singlet(p):
    rho = noisy_singlet(p)
    assert _valid(rho)
    assert_allclose(rho.mat, p * singlet().mat + (1 - p) * noisy_singlet_noise())


def test_noisy_singlet_range():
    with pytest.raises(ParameterError):
        noisy_singlet(1.5)


def test_tiles_vectors_are_orthonormal_products():
    vectors = np.array(tiles_vectors())
    assert_allclose(vectors @ vectors.conj().T, np.eye(5), atol=1e-15)
    for v in vectors:
        # product vectors have a rank-one coefficient matrix
        assert np.linalg.matrix_rank(v.reshape(3, 3)) == 1


def test_tiles_bound_entangled_state():
    rho = tiles_rho_be()
    assert _valid(rho)
    eigs = np.linalg.eigvalsh(rho.mat)
    assert_allclose(eigs, [0] * 5 + [0.25] * 4, atol=1e-14)


@pytest.mark.parametrize('p', [0.0, 0.5, 0.8897, 1.0])
def test_tiles_family_is_valid(p):
    assert _valid(tiles(p))


def test_families_registry():
    assert set(FAMILIES) == {'noisy_singlet', 'tiles'}
    family = FAMILIES['tiles']()
    assert (family.dim_a, family.dim_b) == (3, 3)
    assert_allclose(family(0.5).mat, tiles(0.5).mat)
    with pytest.raises(ParameterError):
        family(-0.1)


def test_product_and_mixed():
    rho = product_state([1, 1], [1, 0, 0])
    assert rho.dims == (2, 3)
    assert rho.purity() == pytest.approx(1.0)
    assert maximally_mixed(2, 3).purity() == pytest.approx(1 / 6)


def test_max_entangled():
    phi = max_entangled(3)
    assert np.linalg.norm(phi) == pytest.approx(1.0)
    assert phi[0] == phi[4] == phi[8]
    with pytest.raises(ParameterError):
        max_entangled(1)


@pytest.mark.parametrize('rank', [1, 2, 6])
def test_random_density_rank(rank):
    rho = random_density(2, 3, rank=rank, seed=1)
    assert _valid(rho)
    assert np.linalg.matrix_rank(rho.mat, tol=1e-10) == rank


def test_random_density_rank_range():
    with pytest.raises(ParameterError):
        random_density_matrix(3, rank=4)


def test_seeded_draws_are_reproducible():
    assert_allclose(random_density_matrix(4, seed=12), random_density_matrix(4, seed=12))
    assert not np.allclose(random_density_matrix(4, seed=12), random_density_matrix(4, seed=13))
    assert_allclose(haar_unitary(3, seed=5), haar_unitary(3, seed=5))


def test_haar_unitary_is_unitary():
    for seed in range(10):
        u = haar_unitary(4, seed=seed)
        assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-13)


@pytest.mark.parametrize('pure', [True, False])
def test_random_separable(pure):
    rho = random_separable(3, 2, terms=4, seed=3, pure_factors=pure)
    assert _valid(rho)
    with pytest.raises(ParameterError):
        random_separable(2, 2, terms=0)


def test_corpora():
    states = state_corpus(12, seed=0)
    assert [s.dims for s in states[:3]] == [(2, 2), (2, 3), (3, 3)]
    assert all(_valid(s) for s in states)
    assert np.linalg.matrix_rank(states[0].mat, tol=1e-10) == 1
    assert np.linalg.matrix_rank(states[3].mat, tol=1e-10) == 2
    separable = separable_corpus(12, seed=0)
    assert all(_valid(s) for s in separable)
    assert_allclose(state_corpus(3, seed=5)[2].mat, state_corpus(3, seed=5)[2].mat)


@pytest.mark.parametrize('make', [noisy_singlet, tiles], ids=['noisy_singlet', 'tiles'])
def test_families_are_affine_in_p(make):
    rng = np.random.default_rng(31)
    for _ in range(20):
        p1, p2, t = rng.uniform(size=3)
        mixed = t * make(p1).mat + (1 - t) * make(p2).mat
        assert_allclose(make(t * p1 + (1 - t) * p2).mat, mixed, atol=1e-14)
