'''
Dense complex operator kernel.

All bipartite operators use the composite index ``(i, k) -> i * d_B + k``
(subsystem A major). The reshaped view ``op4[i, k, j, l]`` equals
``op[i * d_B + k, j * d_B + l]``.
'''
from __future__ import annotations

import dataclasses as dc
import logging
import typing

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ent_crit.config import Tolerances, resolve
from ent_crit.errors import (
    DecompositionError,
    DimensionError,
    InvalidStateError,
    NotHermitianError,
    NotUnitaryError,
)


logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.complex128]
Subsystem = typing.Literal['a', 'b']


@typing.runtime_checkable
class Bipartite(typing.Protocol):
    '''
    Anything carrying a square operator on ``H_A (x) H_B``.
    '''
    @property
    def dim_a(self) -> int: ...

    @property
    def dim_b(self) -> int: ...

    @property
    def mat(self) -> Matrix: ...


def as_matrix(m: npt.ArrayLike) -> Matrix:
    '''
    Convert to a 2-d complex128 array, rejecting NaN and Inf entries.
    '''
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a matrix, got an array with {arr.ndim} dimension(s)")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("matrix has non-finite entries")
    return arr


def _frozen(m: Matrix) -> Matrix:
    m = np.array(m, dtype=np.complex128, copy=True)
    m.flags.writeable = False
    return m


def _check_square(m: Matrix, dim_a: int, dim_b: int) -> None:
    n = dim_a * dim_b
    if dim_a < 1 or dim_b < 1:
        raise DimensionError(f"subsystem dimensions must be positive, got ({dim_a}, {dim_b})")
    if m.shape != (n, n):
        raise DimensionError(
            f"matrix of shape {m.shape} does not match dims ({dim_a}, {dim_b}); expected ({n}, {n})"
        )


def hermiticity_defect(m: npt.ArrayLike) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def ensure_hermitian(m: npt.ArrayLike, *, tol: Tolerances | None = None, what: str = "operator") -> Matrix:
    '''
    Return ``m`` as a complex matrix, raising if it is not Hermitian.
    '''
    tol = resolve(tol)
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{what} must be square, got shape {arr.shape}")
    defect = hermiticity_defect(arr)
    if defect > tol.herm:
        raise NotHermitianError(defect, what)
    return arr


def ensure_unitary(u: npt.ArrayLike, *, tol: Tolerances | None = None) -> Matrix:
    tol = resolve(tol)
    arr = as_matrix(u)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"unitary must be square, got shape {arr.shape}")
    defect = float(np.max(np.abs(arr.conj().T @ arr - np.eye(arr.shape[0]))))
    if defect > tol.unitary:
        raise NotUnitaryError(defect)
    return arr


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class ValidityReport:
    '''
    Outcome of the density matrix checks.
    '''
    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float
    valid: bool


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class BipartiteOperator:
    '''
    A square operator on ``H_A (x) H_B`` with no further guarantees.
    '''
    dim_a: int
    dim_b: int
    mat: Matrix

    def __post_init__(self) -> None:
        mat = as_matrix(self.mat)
        _check_square(mat, self.dim_a, self.dim_b)
        object.__setattr__(self, 'mat', _frozen(mat))


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class DensityMatrix:
    '''
    A validated bipartite state.

    Use ``DensityMatrix.from_matrix`` to build one from raw entries; the
    constructor only checks shapes.
    '''
    dim_a: int
    dim_b: int
    mat: Matrix

    def __post_init__(self) -> None:
        mat = as_matrix(self.mat)
        _check_square(mat, self.dim_a, self.dim_b)
        object.__setattr__(self, 'mat', _frozen(mat))

    @classmethod
    def from_matrix(
        cls,
        m: npt.ArrayLike,
        dim_a: int,
        dim_b: int,
        *,
        tol: Tolerances | None = None,
    ) -> DensityMatrix:
        '''
        Validate ``m`` and wrap it.

        Raises
        ------
        DimensionError
            Size does not match ``dim_a * dim_b``.
        InvalidStateError
            Not Hermitian, not unit trace or not positive semidefinite.
        '''
        report = is_density_matrix(m, dim_a, dim_b, tol=tol)
        if not report.valid:
            raise InvalidStateError(report)
        return cls(dim_a=dim_a, dim_b=dim_b, mat=as_matrix(m))

    @classmethod
    def from_vector(cls, psi: npt.ArrayLike, dim_a: int, dim_b: int) -> DensityMatrix:
        '''
        Projector onto a (normalized on the way in) pure state.
        '''
        v = np.asarray(psi, dtype=np.complex128).reshape(-1)
        if v.size != dim_a * dim_b:
            raise DimensionError(f"state vector of length {v.size} does not match dims ({dim_a}, {dim_b})")
        norm = np.linalg.norm(v)
        if norm == 0:
            raise DimensionError("zero state vector")
        v = v / norm
        return cls(dim_a=dim_a, dim_b=dim_b, mat=np.outer(v, v.conj()))

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))


def _as4(op: Bipartite) -> npt.NDArray[np.complex128]:
    _check_square(op.mat, op.dim_a, op.dim_b)
    return np.asarray(op.mat).reshape(op.dim_a, op.dim_b, op.dim_a, op.dim_b)


def kron(a: npt.ArrayLike, b: npt.ArrayLike) -> Matrix:
    '''
    Kronecker product, ``(A (x) B)[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``.
    '''
    return np.kron(as_matrix(a), as_matrix(b))


def partial_transpose(rho: Bipartite) -> Matrix:
    '''
    Transpose on subsystem B: ``out[(i,k),(j,l)] = rho[(i,l),(j,k)]``.
    '''
    n = rho.dim_a * rho.dim_b
    return _as4(rho).transpose(0, 3, 2, 1).reshape(n, n).copy()


def partial_trace(rho: Bipartite, keep: Subsystem) -> Matrix:
    '''
    Reduced operator on the kept subsystem.

    Parameters
    ----------
    rho : Bipartite
    keep : {'a', 'b'}
        The subsystem that survives.

    Returns
    -------
    Matrix
    '''
    op4 = _as4(rho)
    match keep:
        case 'a':
            return np.einsum('ikjk->ij', op4)
        case 'b':
            return np.einsum('ikil->kl', op4)
        case _:
            raise DimensionError(f"keep must be 'a' or 'b', got {keep!r}")


def eig_hermitian(h: npt.ArrayLike, *, tol: Tolerances | None = None) -> tuple[npt.NDArray[np.float64], Matrix]:
    '''
    Eigendecomposition of a Hermitian matrix.

    Returns
    -------
    tuple[NDArray[float64], Matrix]
        Ascending eigenvalues and the matching orthonormal eigenvectors as
        columns.
    '''
    arr = ensure_hermitian(h, tol=tol)
    try:
        values, vectors = scipy.linalg.eigh(arr)
    except scipy.linalg.LinAlgError as e:
        raise DecompositionError(f"eigendecomposition failed: {e}") from e
    return values, vectors


def eigvals_hermitian(h: npt.ArrayLike, *, tol: Tolerances | None = None) -> npt.NDArray[np.float64]:
    arr = ensure_hermitian(h, tol=tol)
    try:
        return scipy.linalg.eigh(arr, eigvals_only=True)
    except scipy.linalg.LinAlgError as e:
        raise DecompositionError(f"eigendecomposition failed: {e}") from e


def svd_values(m: npt.ArrayLike) -> npt.NDArray[np.float64]:
    '''
    Singular values in descending order.
    '''
    arr = as_matrix(m)
    if arr.size == 0:
        return np.zeros(0)
    try:
        values = scipy.linalg.svd(arr, compute_uv=False)
    except scipy.linalg.LinAlgError as e:
        raise DecompositionError(f"singular value decomposition failed: {e}") from e
    return np.sort(values)[::-1]


def trace_norm(m: npt.ArrayLike) -> float:
    return float(np.sum(svd_values(m)))


def _check_observable(rho: Bipartite | DensityMatrix, o: npt.ArrayLike) -> Matrix:
    arr = as_matrix(o)
    n = rho.mat.shape[0]
    if arr.shape != (n, n):
        raise DimensionError(f"observable of shape {arr.shape} does not act on a state of size {n}")
    return arr


def expectation_complex(rho: Bipartite, o: npt.ArrayLike) -> complex:
    '''
    ``Tr(rho O)`` for an arbitrary, possibly non-Hermitian, ``O``.
    '''
    arr = _check_observable(rho, o)
    return complex(np.einsum('ij,ji->', rho.mat, arr))


def expectation(rho: Bipartite, o: npt.ArrayLike, *, tol: Tolerances | None = None) -> float:
    '''
    Real expectation value ``Tr(rho O)`` of a Hermitian observable.

    Raises
    ------
    NotHermitianError
        The imaginary part exceeds ``tol.herm``.
    '''
    tol = resolve(tol)
    value = expectation_complex(rho, o)
    if abs(value.imag) > tol.herm:
        raise NotHermitianError(abs(value.imag), "expectation value")
    return value.real


def variance(rho: Bipartite, o: npt.ArrayLike, *, tol: Tolerances | None = None) -> float:
    '''
    ``<O^2> - <O>^2``.
    '''
    arr = _check_observable(rho, o)
    mean = expectation(rho, arr, tol=tol)
    return expectation(rho, arr @ arr, tol=tol) - mean ** 2


def is_density_matrix(
    m: npt.ArrayLike,
    dim_a: int,
    dim_b: int,
    *,
    tol: Tolerances | None = None,
) -> ValidityReport:
    '''
    Check Hermiticity, unit trace and positivity.

    Parameters
    ----------
    m : ArrayLike
        Square matrix of size ``dim_a * dim_b``.
    dim_a, dim_b : int

    Returns
    -------
    ValidityReport

    Raises
    ------
    DimensionError
    DecompositionError
        The eigensolver did not converge.
    '''
    tol = resolve(tol)
    arr = as_matrix(m)
    _check_square(arr, dim_a, dim_b)

    herm = hermiticity_defect(arr)
    trace_defect = abs(complex(np.trace(arr)) - 1.0)
    # positivity is judged on the Hermitian part
    sym = (arr + arr.conj().T) / 2
    min_eig = float(eigvals_hermitian(sym, tol=tol)[0])

    valid = herm <= tol.herm and trace_defect <= tol.trace and min_eig >= -tol.psd
    return ValidityReport(
        hermiticity_defect=herm,
        trace_defect=trace_defect,
        min_eigenvalue=min_eig,
        valid=valid,
    )
