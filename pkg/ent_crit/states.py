'''
State constructors and seeded random generators.

Random draws use numpy's PCG64 bit generator. A seed is either an integer
or a ``numpy.random.SeedSequence``; every call builds its own generator.
'''
from __future__ import annotations

import dataclasses as dc
import logging
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ent_crit.core import DensityMatrix, Matrix, kron
from ent_crit.errors import ParameterError


logger = logging.getLogger(__name__)

Seed = int | np.random.SeedSequence
Vector = npt.NDArray[np.complex128]


def make_rng(seed: Seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def basis_vector(d: int, i: int) -> Vector:
    v = np.zeros(d, dtype=np.complex128)
    v[i] = 1.0
    return v


def projector(v: npt.ArrayLike) -> Matrix:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class StateFamily:
    '''
    A one-parameter family ``p -> rho(p)`` over a closed interval.
    '''
    name: str
    dim_a: int
    dim_b: int
    param_range: tuple[float, float]
    generator: Callable[[float], DensityMatrix]

    def __call__(self, p: float) -> DensityMatrix:
        lo, hi = self.param_range
        if not lo <= p <= hi:
            raise ParameterError(f"{self.name}: p={p} outside [{lo}, {hi}]")
        return self.generator(p)


def kron_vec(a: npt.ArrayLike, b: npt.ArrayLike) -> Vector:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def singlet_vector() -> Vector:
    '''
    ``(|01> - |10>) / sqrt(2)``.
    '''
    e0, e1 = basis_vector(2, 0), basis_vector(2, 1)
    return (kron_vec(e0, e1) - kron_vec(e1, e0)) / np.sqrt(2)


def singlet() -> DensityMatrix:
    return DensityMatrix(dim_a=2, dim_b=2, mat=projector(singlet_vector()))


def product_state(vec_a: npt.ArrayLike, vec_b: npt.ArrayLike) -> DensityMatrix:
    '''
    Pure product state ``|a>|b>``; the vectors are normalized.
    '''
    a = np.asarray(vec_a, dtype=np.complex128).reshape(-1)
    b = np.asarray(vec_b, dtype=np.complex128).reshape(-1)
    return DensityMatrix.from_vector(kron_vec(a, b), a.size, b.size)


def maximally_mixed(dim_a: int, dim_b: int) -> DensityMatrix:
    n = dim_a * dim_b
    return DensityMatrix(dim_a=dim_a, dim_b=dim_b, mat=np.eye(n) / n)


def noisy_singlet_noise() -> Matrix:
    '''
    Separable noise ``2/3 |00><00| + 1/3 |01><01|``.
    '''
    e0, e1 = basis_vector(2, 0), basis_vector(2, 1)
    return 2 / 3 * projector(kron_vec(e0, e0)) + 1 / 3 * projector(kron_vec(e0, e1))


def noisy_singlet(p: float) -> DensityMatrix:
    '''
    ``p |psi_s><psi_s| + (1 - p) rho_sep``.

    Parameters
    ----------
    p : float
        Singlet weight in ``[0, 1]``.
    '''
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    mat = p * projector(singlet_vector()) + (1 - p) * noisy_singlet_noise()
    return DensityMatrix(dim_a=2, dim_b=2, mat=mat)


def tiles_vectors() -> list[Vector]:
    '''
    The five product vectors of the 3x3 Tiles unextendible product basis.
    '''
    e = [basis_vector(3, i) for i in range(3)]
    s = 1 / np.sqrt(2)
    uniform = e[0] + e[1] + e[2]
    return [
        s * kron_vec(e[0], e[0] - e[1]),
        s * kron_vec(e[0] - e[1], e[2]),
        s * kron_vec(e[2], e[1] - e[2]),
        s * kron_vec(e[1] - e[2], e[0]),
        kron_vec(uniform, uniform) / 3,
    ]


def tiles_rho_be() -> DensityMatrix:
    '''
    Bound entangled Tiles state ``(1 - sum_i |psi_i><psi_i|) / 4``.
    '''
    mat = np.eye(9, dtype=np.complex128) - sum(projector(v) for v in tiles_vectors())
    return DensityMatrix(dim_a=3, dim_b=3, mat=mat / 4)


def tiles(p: float) -> DensityMatrix:
    '''
    Tiles state mixed with white noise, ``p rho_BE + (1 - p) 1/9``.
    '''
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    mat = p * tiles_rho_be().mat + (1 - p) * np.eye(9) / 9
    return DensityMatrix(dim_a=3, dim_b=3, mat=mat)


def noisy_singlet_family() -> StateFamily:
    return StateFamily(name='noisy_singlet', dim_a=2, dim_b=2, param_range=(0.0, 1.0), generator=noisy_singlet)


def tiles_family() -> StateFamily:
    return StateFamily(name='tiles', dim_a=3, dim_b=3, param_range=(0.0, 1.0), generator=tiles)


FAMILIES: dict[str, Callable[[], StateFamily]] = {
    'noisy_singlet': noisy_singlet_family,
    'tiles': tiles_family,
}


def max_entangled(d: int) -> Vector:
    '''
    ``|phi+> = sum_i |ii> / sqrt(d)`` on ``C^d (x) C^d``.
    '''
    if d < 2:
        raise ParameterError(f"dimension must be >= 2, got {d}")
    v = np.zeros(d * d, dtype=np.complex128)
    v[np.arange(d) * (d + 1)] = 1 / np.sqrt(d)
    return v


def _complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> Matrix:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_density_matrix(d: int, rank: int | None = None, seed: Seed = 0) -> Matrix:
    '''
    ``G G^dagger / Tr(G G^dagger)`` for a ``d x rank`` complex Ginibre matrix.

    Parameters
    ----------
    d : int
        Dimension.
    rank : int, optional
        Between 1 and ``d``; defaults to ``d``.
    seed : int | SeedSequence
    '''
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise ParameterError(f"rank must lie in [1, {d}], got {rank}")
    g = _complex_gaussian(make_rng(seed), (d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_density(
    dim_a: int,
    dim_b: int,
    rank: int | None = None,
    seed: Seed = 0,
) -> DensityMatrix:
    '''
    Random bipartite state from the induced (Ginibre) measure.
    '''
    return DensityMatrix(dim_a=dim_a, dim_b=dim_b, mat=random_density_matrix(dim_a * dim_b, rank, seed))


def random_separable(
    dim_a: int,
    dim_b: int,
    terms: int,
    seed: Seed = 0,
    *,
    pure_factors: bool = True,
) -> DensityMatrix:
    '''
    ``sum_k p_k rho^A_k (x) rho^B_k`` with Dirichlet-uniform weights.

    The weights are normalized exponential draws; each factor is drawn from
    its own child seed.

    Parameters
    ----------
    dim_a, dim_b : int
    terms : int
        Number of product terms, at least 1.
    seed : int | SeedSequence
    pure_factors : bool
        Rank-one factors when ``True``, full rank otherwise.
    '''
    if terms < 1:
        raise ParameterError(f"terms must be >= 1, got {terms}")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    weight_seed, *factor_seeds = root.spawn(1 + 2 * terms)

    weights = make_rng(weight_seed).standard_exponential(terms)
    weights /= weights.sum()

    mat = np.zeros((dim_a * dim_b,) * 2, dtype=np.complex128)
    for k, w in enumerate(weights):
        rho_a = random_density_matrix(dim_a, 1 if pure_factors else dim_a, factor_seeds[2 * k])
        rho_b = random_density_matrix(dim_b, 1 if pure_factors else dim_b, factor_seeds[2 * k + 1])
        mat += w * kron(rho_a, rho_b)
    return DensityMatrix(dim_a=dim_a, dim_b=dim_b, mat=mat)


def haar_unitary(d: int, seed: Seed = 0) -> Matrix:
    '''
    Haar random unitary from the QR decomposition of a complex Ginibre
    matrix, with the phases of ``R``'s diagonal moved into ``Q``.
    '''
    if d < 1:
        raise ParameterError(f"dimension must be >= 1, got {d}")
    z = _complex_gaussian(make_rng(seed), (d, d))
    q, r = scipy.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def random_pure_vector(d: int, seed: Seed = 0) -> Vector:
    v = _complex_gaussian(make_rng(seed), (d,))
    return v / np.linalg.norm(v)


CORPUS_DIMS: tuple[tuple[int, int], ...] = ((2, 2), (2, 3), (3, 3))


def state_corpus(
    count: int,
    seed: Seed = 0,
    dims: tuple[tuple[int, int], ...] = CORPUS_DIMS,
) -> list[DensityMatrix]:
    '''
    Seeded random states cycling through ``dims`` and through ranks
    1, 2, ..., d_A d_B.
    '''
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    states = []
    for k, child in enumerate(root.spawn(count)):
        da, db = dims[k % len(dims)]
        rank = 1 + (k // len(dims)) % (da * db)
        states.append(random_density(da, db, rank, child))
    return states


def separable_corpus(
    count: int,
    seed: Seed = 0,
    dims: tuple[tuple[int, int], ...] = CORPUS_DIMS,
) -> list[DensityMatrix]:
    '''
    Seeded random separable states with 1 to 6 product terms, alternating
    pure and mixed factors.
    '''
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [
        random_separable(*dims[k % len(dims)], terms=1 + k % 6, seed=child, pure_factors=k % 2 == 0)
        for k, child in enumerate(root.spawn(count))
    ]
