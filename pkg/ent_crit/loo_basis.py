'''
Local orthogonal observables: ``d^2`` Hermitian operators with
``Tr(G_k G_l) = delta_kl``.
'''
from __future__ import annotations

import dataclasses as dc
import functools
import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ent_crit.config import Tolerances, resolve
from ent_crit.core import Matrix, as_matrix, hermiticity_defect
from ent_crit.errors import DimensionError, InvalidBasisError, ParameterError


logger = logging.getLogger(__name__)

OperatorStack = npt.NDArray[np.complex128]

# vectors shorter than this after projection are skipped during completion
_COMPLETION_CUTOFF = 1e-8


def _stack(ops: Sequence[npt.ArrayLike] | OperatorStack) -> OperatorStack:
    if isinstance(ops, np.ndarray) and ops.ndim == 3:
        arr = ops.astype(np.complex128, copy=True)
    else:
        mats = [as_matrix(op) for op in ops]
        if not mats:
            raise DimensionError("empty operator list")
        shapes = {m.shape for m in mats}
        if len(shapes) != 1:
            raise DimensionError(f"operators have mixed shapes {sorted(shapes)}")
        arr = np.stack(mats)
    if arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"operators must be square, got shape {arr.shape[1:]}")
    return arr


def gram(ops: OperatorStack) -> npt.NDArray[np.complex128]:
    '''
    Hilbert-Schmidt Gram matrix ``Tr(G_k^dagger G_l)``.
    '''
    return np.einsum('kji,lji->kl', ops.conj(), ops)


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class BasisReport:
    orthonormality_defect: float
    hermiticity_defect: float
    completeness_defect: float
    identity_defect: float
    valid: bool


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class LOOBasis:
    '''
    An ordered set of local orthogonal observables on a ``dim``-dimensional
    space. ``ops`` has shape ``(dim**2, dim, dim)`` and is read-only.
    '''
    dim: int
    ops: OperatorStack

    def __post_init__(self) -> None:
        ops = _stack(self.ops)
        if ops.shape[1] != self.dim:
            raise DimensionError(f"operators are {ops.shape[1]}x{ops.shape[1]}, basis dim is {self.dim}")
        if ops.shape[0] != self.dim ** 2:
            raise InvalidBasisError(detail=f"expected {self.dim ** 2} operators, got {ops.shape[0]}")
        ops.flags.writeable = False
        object.__setattr__(self, 'ops', ops)

    def __len__(self) -> int:
        return self.ops.shape[0]

    def __getitem__(self, k: int) -> Matrix:
        return self.ops[k]

    def __iter__(self):
        return iter(self.ops)

    @classmethod
    def from_operators(
        cls,
        ops: Sequence[npt.ArrayLike] | OperatorStack,
        *,
        validate: bool = True,
        tol: Tolerances | None = None,
    ) -> LOOBasis:
        stack = _stack(ops)
        basis = cls(dim=stack.shape[1], ops=stack)
        if validate:
            report = validate_loos(basis, tol=tol)
            if not report.valid:
                raise InvalidBasisError(report)
        return basis


@functools.lru_cache(maxsize=16)
def canonical_loos(d: int) -> LOOBasis:
    '''
    The standard LOO set: symmetric pair operators, then antisymmetric pair
    operators, then the diagonal projectors.

    Pairs ``m < n`` are taken in lexicographic order. The antisymmetric
    operators are ``(i|m><n| - i|n><m|) / sqrt(2)``, which is ``-sigma_y / sqrt(2)``
    for ``d = 2``.

    Parameters
    ----------
    d : int
        Local dimension, at least 2.

    Returns
    -------
    LOOBasis
    '''
    if d < 2:
        raise ParameterError(f"LOO dimension must be >= 2, got {d}")

    pairs = [(m, n) for m in range(d) for n in range(m + 1, d)]
    ops = np.zeros((d * d, d, d), dtype=np.complex128)
    half = len(pairs)
    s = 1 / np.sqrt(2)
    for k, (m, n) in enumerate(pairs):
        ops[k, m, n] = ops[k, n, m] = s
        ops[half + k, m, n] = 1j * s
        ops[half + k, n, m] = -1j * s
    for m in range(d):
        ops[2 * half + m, m, m] = 1.0
    return LOOBasis(dim=d, ops=ops)


def pauli_loos() -> tuple[LOOBasis, LOOBasis]:
    '''
    The signed Pauli LOO sets matching the operator Schmidt decomposition of
    the two-qubit singlet: ``{-sx, -sy, -sz, 1}/sqrt(2)`` on A and
    ``{sx, sy, sz, 1}/sqrt(2)`` on B.
    '''
    sx = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    sy = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    sz = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    one = np.eye(2, dtype=np.complex128)
    b_side = np.stack([sx, sy, sz, one]) / np.sqrt(2)
    a_side = b_side * np.array([-1, -1, -1, 1])[:, None, None]
    return LOOBasis(dim=2, ops=a_side), LOOBasis(dim=2, ops=b_side)


def validate_loos(basis: LOOBasis, *, tol: Tolerances | None = None) -> BasisReport:
    '''
    Check the three LOO laws: HS-orthonormality, ``sum_k G_k^2 = d * 1`` and
    ``sum_k Tr(G_k) G_k = 1``.

    Parameters
    ----------
    basis : LOOBasis

    Returns
    -------
    BasisReport
    '''
    tol = resolve(tol)
    ops = basis.ops
    d = basis.dim
    if ops.shape[0] != d * d:
        raise InvalidBasisError(detail=f"expected {d * d} operators, got {ops.shape[0]}")

    eye = np.eye(d)
    ortho = float(np.max(np.abs(gram(ops) - np.eye(d * d))))
    herm = max(hermiticity_defect(g) for g in ops)
    completeness = float(np.max(np.abs(np.einsum('kij,kjl->il', ops, ops) - d * eye)))
    traces = np.einsum('kii->k', ops)
    identity = float(np.max(np.abs(np.einsum('k,kij->ij', traces, ops) - eye)))

    # the two sum rules accumulate d^2 rounding errors
    sum_tol = max(1e-9, tol.orth)
    valid = ortho <= tol.orth and herm <= tol.herm and completeness <= sum_tol and identity <= sum_tol
    return BasisReport(
        orthonormality_defect=ortho,
        hermiticity_defect=herm,
        completeness_defect=completeness,
        identity_defect=identity,
        valid=valid,
    )


def transform_loos(
    basis: LOOBasis,
    o: npt.ArrayLike,
    *,
    tol: Tolerances | None = None,
) -> LOOBasis:
    '''
    Rotate a LOO set with a real orthogonal matrix:
    ``G~_l = sum_k O[l, k] G_k``.

    Raises
    ------
    InvalidBasisError
        ``O`` is not real orthogonal.
    '''
    tol = resolve(tol)
    mat = np.asarray(o)
    n = len(basis)
    if mat.shape != (n, n):
        raise DimensionError(f"rotation must be {n}x{n}, got {mat.shape}")
    if np.iscomplexobj(mat):
        if np.max(np.abs(mat.imag), initial=0.0) > tol.orth:
            raise InvalidBasisError(detail="rotation matrix is not real")
        mat = mat.real
    mat = mat.astype(np.float64)
    defect = float(np.max(np.abs(mat @ mat.T - np.eye(n))))
    if defect > tol.orth:
        raise InvalidBasisError(detail=f"rotation matrix is not orthogonal (defect {defect:.3e})")
    return LOOBasis(dim=basis.dim, ops=np.einsum('lk,kij->lij', mat, basis.ops))


def hermitian_coordinates(ops: OperatorStack, d: int) -> npt.NDArray[np.float64]:
    '''
    Real coordinates of Hermitian operators in ``canonical_loos(d)``.
    HS inner products of the operators equal dot products of the rows.
    '''
    canon = canonical_loos(d).ops
    return np.einsum('kij,lji->lk', canon, ops).real


def complete_loos(
    partial: Sequence[npt.ArrayLike] | OperatorStack,
    d: int,
    *,
    tol: Tolerances | None = None,
) -> LOOBasis:
    '''
    Extend orthonormal Hermitian operators to a full LOO set.

    Gram-Schmidt runs in the real ``d^2``-dimensional space of Hermitian
    matrices, seeded with the canonical operators in order. The input
    operators come first and are returned unchanged.

    Parameters
    ----------
    partial : sequence of (d, d) Hermitian matrices
        Mutually HS-orthonormal, at most ``d^2`` of them. May be empty.
    d : int

    Returns
    -------
    LOOBasis
    '''
    tol = resolve(tol)
    if d < 2:
        raise ParameterError(f"LOO dimension must be >= 2, got {d}")

    given = np.zeros((0, d, d), dtype=np.complex128) if len(partial) == 0 else _stack(partial)
    if given.shape[1:] != (d, d):
        raise DimensionError(f"operators are {given.shape[1:]}, expected ({d}, {d})")
    k = given.shape[0]
    if k > d * d:
        raise InvalidBasisError(detail=f"{k} operators exceed the {d * d} available in dimension {d}")
    if k:
        herm = max(hermiticity_defect(g) for g in given)
        if herm > tol.herm:
            raise InvalidBasisError(detail=f"input operators are not Hermitian (defect {herm:.3e})")
        ortho = float(np.max(np.abs(gram(given) - np.eye(k))))
        if ortho > tol.orth:
            raise InvalidBasisError(detail=f"input operators are not orthonormal (defect {ortho:.3e})")

    found = list(hermitian_coordinates(given, d)) if k else []
    canon = canonical_loos(d).ops
    new_ops = []
    for seed in np.eye(d * d):
        if len(found) == d * d:
            break
        v = seed.copy()
        # two passes keep the projection accurate to rounding
        for _ in range(2):
            for u in found:
                v -= np.dot(u, v) * u
        norm = np.linalg.norm(v)
        if norm < _COMPLETION_CUTOFF:
            continue
        v /= norm
        found.append(v)
        new_ops.append(np.einsum('k,kij->ij', v, canon))

    logger.debug("completed %d LOOs with %d new operators in dimension %d", k, len(new_ops), d)
    ops = np.concatenate([given, np.array(new_ops, dtype=np.complex128).reshape(-1, d, d)])
    return LOOBasis(dim=d, ops=ops)
