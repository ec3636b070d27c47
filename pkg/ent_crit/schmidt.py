'''
Operator Schmidt decomposition ``rho = sum_k lambda_k G^A_k (x) G^B_k`` and
the realignment map.
'''
from __future__ import annotations

import dataclasses as dc
import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ent_crit.config import Tolerances, resolve
from ent_crit.core import Bipartite, Matrix, as_matrix, kron
from ent_crit.errors import DecompositionError, DimensionError, NotHermitianError
from ent_crit.loo_basis import LOOBasis, OperatorStack, canonical_loos


logger = logging.getLogger(__name__)


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class CoefficientMatrix:
    '''
    ``mu[k, l] = Tr(rho (G~^A_k (x) G~^B_l))`` in the given bases.
    '''
    mu: npt.NDArray[np.float64]
    basis_a: LOOBasis
    basis_b: LOOBasis


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class OperatorSchmidt:
    '''
    Schmidt form of a bipartite operator.

    ``lambdas`` is descending and has ``min(d_A^2, d_B^2)`` entries, zeros
    included, so ``ops_a`` / ``ops_b`` always hold complete orthonormal sets on
    the smaller side.
    '''
    dim_a: int
    dim_b: int
    lambdas: npt.NDArray[np.float64]
    ops_a: OperatorStack
    ops_b: OperatorStack

    @property
    def schmidt_sum(self) -> float:
        return float(np.sum(self.lambdas))

    def reconstruct(self) -> Matrix:
        return sum(
            (lam * kron(ga, gb) for lam, ga, gb in zip(self.lambdas, self.ops_a, self.ops_b)),
            start=np.zeros((self.dim_a * self.dim_b,) * 2, dtype=np.complex128),
        )

    def pair_sum(self) -> Matrix:
        '''
        ``sum_k G^A_k (x) G^B_k``.
        '''
        return np.einsum('kij,kab->iajb', self.ops_a, self.ops_b).reshape(
            self.dim_a * self.dim_b, self.dim_a * self.dim_b
        )


def coefficient_matrix(
    rho: Bipartite,
    basis_a: LOOBasis | None = None,
    basis_b: LOOBasis | None = None,
    *,
    tol: Tolerances | None = None,
) -> CoefficientMatrix:
    '''
    Expand a bipartite Hermitian operator in a product of LOO bases.

    Parameters
    ----------
    rho : Bipartite
    basis_a, basis_b : LOOBasis, optional
        Default to ``canonical_loos`` of the subsystem dimensions.

    Returns
    -------
    CoefficientMatrix

    Raises
    ------
    DimensionError
    NotHermitianError
        A coefficient has an imaginary part above ``tol.herm``.
    '''
    tol = resolve(tol)
    basis_a = basis_a or canonical_loos(rho.dim_a)
    basis_b = basis_b or canonical_loos(rho.dim_b)
    if (basis_a.dim, basis_b.dim) != (rho.dim_a, rho.dim_b):
        raise DimensionError(
            f"bases of dims ({basis_a.dim}, {basis_b.dim}) do not match state dims ({rho.dim_a}, {rho.dim_b})"
        )
    rho4 = np.asarray(rho.mat).reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    mu = np.einsum('ikjl,aji,blk->ab', rho4, basis_a.ops, basis_b.ops)

    residue = float(np.max(np.abs(mu.imag), initial=0.0))
    if residue > tol.herm:
        raise NotHermitianError(residue, "coefficient matrix")
    if residue > 1e-12:
        logger.warning("dropping imaginary residue %.3e from coefficient matrix", residue)
    return CoefficientMatrix(mu=np.ascontiguousarray(mu.real), basis_a=basis_a, basis_b=basis_b)


def operator_schmidt(
    rho: Bipartite,
    basis_a: LOOBasis | None = None,
    basis_b: LOOBasis | None = None,
    *,
    tol: Tolerances | None = None,
) -> OperatorSchmidt:
    '''
    Operator Schmidt decomposition via the real SVD of the coefficient
    matrix ``mu = O_A Sigma O_B^T``.

    The real SVD keeps the Schmidt operators Hermitian. When several
    ``lambda_k`` coincide the operators are not unique; only the values and
    the reconstruction are meaningful.
    '''
    coeffs = coefficient_matrix(rho, basis_a, basis_b, tol=tol)
    try:
        o_a, sigma, o_bt = scipy.linalg.svd(coeffs.mu, full_matrices=False)
    except scipy.linalg.LinAlgError as e:
        raise DecompositionError(f"SVD of the coefficient matrix failed: {e}") from e

    ops_a = np.einsum('lk,lij->kij', o_a, coeffs.basis_a.ops)
    ops_b = np.einsum('kl,lij->kij', o_bt, coeffs.basis_b.ops)
    return OperatorSchmidt(
        dim_a=rho.dim_a,
        dim_b=rho.dim_b,
        lambdas=sigma,
        ops_a=ops_a,
        ops_b=ops_b,
    )


def vectorize(g: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    '''
    Stack the columns of ``g``: ``vec[j * rows + i] = g[i, j]``.
    '''
    return as_matrix(g).reshape(-1, order='F')


def unvectorize(v: npt.ArrayLike, rows: int, cols: int | None = None) -> Matrix:
    cols = rows if cols is None else cols
    return np.asarray(v, dtype=np.complex128).reshape(rows, cols, order='F')


def realign(rho: Bipartite) -> Matrix:
    '''
    Realigned matrix ``R(rho) = sum_kl mu_kl |G^A_k><G^B_l|`` of shape
    ``(d_A^2, d_B^2)``, where ``<G^B_l|`` is the plain transpose of the
    column-stacked vector.

    Computed as an index reshuffle: ``R[j*d_A + i, l*d_B + k] = rho[(i,k),(j,l)]``.
    '''
    da, db = rho.dim_a, rho.dim_b
    m = np.asarray(rho.mat)
    if m.shape != (da * db, da * db):
        raise DimensionError(f"matrix of shape {m.shape} does not match dims ({da}, {db})")
    return m.reshape(da, db, da, db).transpose(2, 0, 3, 1).reshape(da * da, db * db).copy()


def inverse_realign(m: npt.ArrayLike, dim_a: int, dim_b: int) -> Matrix:
    '''
    Undo ``realign``; maps a ``(d_A^2, d_B^2)`` matrix back to an operator on
    ``H_A (x) H_B``.
    '''
    arr = np.asarray(m, dtype=np.complex128)
    if arr.shape != (dim_a * dim_a, dim_b * dim_b):
        raise DimensionError(f"expected shape ({dim_a ** 2}, {dim_b ** 2}), got {arr.shape}")
    n = dim_a * dim_b
    return arr.reshape(dim_a, dim_a, dim_b, dim_b).transpose(1, 3, 0, 2).reshape(n, n).copy()


def realign_from_coefficients(coeffs: CoefficientMatrix) -> Matrix:
    '''
    ``sum_kl mu_kl |G^A_k><G^B_l|`` built term by term from the basis
    expansion. Slow; ``realign`` is the equivalent reshuffle.
    '''
    vec_a = np.stack([vectorize(g) for g in coeffs.basis_a.ops], axis=1)
    vec_b = np.stack([vectorize(g) for g in coeffs.basis_b.ops], axis=1)
    return vec_a @ coeffs.mu @ vec_b.T


def realign_svd(
    rho: Bipartite,
    *,
    tol: Tolerances | None = None,
) -> tuple[Matrix, npt.NDArray[np.float64], Matrix]:
    '''
    Thin SVD ``R(rho) = U diag(lambdas) V^dagger`` whose singular vectors are
    the vectorized Schmidt operators: ``U[:, k] = vec(G^A_k)`` and
    ``V[:, k] = vec(G^B_k)^*``.

    Unlike a plain SVD of ``R`` the columns spanning its null space are the
    ones ``operator_schmidt`` picks, so ``U V^dagger`` is well defined for
    rank-deficient ``R`` as well.

    Raises
    ------
    DecompositionError
        The factors do not reproduce ``realign(rho)`` within ``tol.eig``.
    '''
    tol = resolve(tol)
    schmidt = operator_schmidt(rho, tol=tol)
    u = np.stack([vectorize(g) for g in schmidt.ops_a], axis=1)
    v = np.stack([vectorize(g) for g in schmidt.ops_b], axis=1).conj()
    defect = float(np.max(np.abs((u * schmidt.lambdas) @ v.conj().T - realign(rho))))
    if defect > tol.eig:
        raise DecompositionError(f"Schmidt factors miss the realigned matrix by {defect:.3e}")
    return u, schmidt.lambdas, v
