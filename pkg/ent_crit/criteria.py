'''
Entanglement criteria: PPT, the computable cross norm (realignment)
criterion, its linear witness and local uncertainty relations.

Every check returns a ``CriterionReport``; ``detected`` is ``True`` only when
the value clears the criterion's bound by more than ``tol.detect``.
'''
from __future__ import annotations

import dataclasses as dc
import logging
import typing
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ent_crit.config import Tolerances, resolve
from ent_crit.core import (
    Bipartite,
    DensityMatrix,
    Matrix,
    as_matrix,
    eigvals_hermitian,
    ensure_hermitian,
    expectation,
    hermiticity_defect,
    kron,
    partial_trace,
    partial_transpose,
    variance,
)
from ent_crit.errors import DimensionError, NotHermitianError, ParameterError
from ent_crit.loo_basis import LOOBasis, OperatorStack, complete_loos
from ent_crit.schmidt import OperatorSchmidt, inverse_realign, operator_schmidt, realign_svd


logger = logging.getLogger(__name__)

CriterionName = typing.Literal['ppt', 'ccn', 'lur_ccn', 'lur_generic', 'witness', 'nonlinear']
WitnessOrigin = typing.Literal['ccn_schmidt', 'ccn_realign', 'ccn_realign_transposed', 'external']


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class CriterionReport:
    '''
    Outcome of one criterion on one state.

    Parameters
    ----------
    criterion : CriterionName
    value : float
        Criterion specific scalar; see each check for its meaning and bound.
    detected : bool
        ``True`` means the state is certified entangled.
    details : dict[str, Any]
        Diagnostics such as ``lambda_sum`` or ``linear_part``.
    '''
    criterion: CriterionName
    value: float
    detected: bool
    details: dict[str, typing.Any] = dc.field(default_factory=dict)

    def as_dict(self) -> dict[str, typing.Any]:
        return {
            'criterion': self.criterion,
            'value': self.value,
            'detected': self.detected,
            'details': dict(self.details),
        }


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class Witness:
    '''
    A Hermitian operator on ``H_A (x) H_B``. Witnesses built from an operator
    Schmidt decomposition keep the operator pairs in ``ops_a`` / ``ops_b`` so
    that ``mat = 1 - sum_k ops_a[k] (x) ops_b[k]``.
    '''
    dim_a: int
    dim_b: int
    mat: Matrix
    origin: WitnessOrigin = 'external'
    ops_a: OperatorStack | None = None
    ops_b: OperatorStack | None = None

    def __post_init__(self) -> None:
        mat = ensure_hermitian(self.mat, what="witness")
        n = self.dim_a * self.dim_b
        if mat.shape != (n, n):
            raise DimensionError(f"witness of shape {mat.shape} does not match dims ({self.dim_a}, {self.dim_b})")
        mat = mat.copy()
        mat.flags.writeable = False
        object.__setattr__(self, 'mat', mat)


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class LOOPair:
    '''
    Equal-length operator lists for the LOO uncertainty relation. On the
    smaller side the missing entries are zero operators.
    '''
    ops_a: OperatorStack
    ops_b: OperatorStack
    completed_side: typing.Literal['a', 'b'] | None = None

    def __post_init__(self) -> None:
        if self.ops_a.shape[0] != self.ops_b.shape[0]:
            raise DimensionError(
                f"operator lists differ in length: {self.ops_a.shape[0]} vs {self.ops_b.shape[0]}"
            )

    @classmethod
    def from_bases(cls, basis_a: LOOBasis, basis_b: LOOBasis) -> LOOPair:
        return cls(ops_a=np.asarray(basis_a.ops), ops_b=np.asarray(basis_b.ops))


def _report(
    criterion: CriterionName,
    value: float,
    violated: bool,
    **details: typing.Any,
) -> CriterionReport:
    return CriterionReport(criterion=criterion, value=float(value), detected=bool(violated), details=details)


def ppt_check(rho: DensityMatrix, *, tol: Tolerances | None = None) -> CriterionReport:
    '''
    Positivity of the partial transpose. ``value`` is the smallest eigenvalue
    of ``rho^{T_B}``; detected when it is below ``-tol.detect``.
    '''
    tol = resolve(tol)
    eigs = eigvals_hermitian(partial_transpose(rho), tol=tol)
    value = float(eigs[0])
    negatives = eigs[eigs < -tol.detect]
    return _report(
        'ppt',
        value,
        value < -tol.detect,
        min_eigenvalue=value,
        negativity=float(-np.sum(negatives)),
    )


def ccn_check(rho: DensityMatrix, *, tol: Tolerances | None = None) -> CriterionReport:
    '''
    Computable cross norm criterion. ``value`` is the sum of the operator
    Schmidt coefficients; separable states have ``value <= 1``.
    '''
    tol = resolve(tol)
    schmidt = operator_schmidt(rho, tol=tol)
    value = schmidt.schmidt_sum
    return _report(
        'ccn',
        value,
        value > 1 + tol.detect,
        lambda_sum=value,
        lambdas=[float(x) for x in schmidt.lambdas],
    )


def _schmidt_witness(schmidt: OperatorSchmidt, origin: WitnessOrigin = 'ccn_schmidt') -> Witness:
    n = schmidt.dim_a * schmidt.dim_b
    mat = np.eye(n, dtype=np.complex128) - schmidt.pair_sum()
    return Witness(
        dim_a=schmidt.dim_a,
        dim_b=schmidt.dim_b,
        mat=mat,
        origin=origin,
        ops_a=schmidt.ops_a,
        ops_b=schmidt.ops_b,
    )


def ccn_witness(rho: DensityMatrix, *, tol: Tolerances | None = None) -> Witness:
    '''
    The linear witness ``W = 1 - sum_k G^A_k (x) G^B_k`` built from the
    operator Schmidt decomposition of ``rho``; ``Tr(W rho) = 1 - sum_k lambda_k``.
    '''
    return _schmidt_witness(operator_schmidt(rho, tol=tol))


def ccn_witness_realign(
    rho: DensityMatrix,
    *,
    form: typing.Literal['direct', 'transposed'] = 'direct',
    tol: Tolerances | None = None,
) -> Witness:
    '''
    The same witness written through the realigned matrix.

    With the SVD ``R(rho) = U Sigma V^dagger`` from ``realign_svd``:

    - ``form='direct'`` gives ``1 - R^{-1}(U V^dagger)``
    - ``form='transposed'`` gives ``1 - [R^{-1}(U^* V^T)]^T``

    The null-space columns of ``U`` and ``V`` come from the operator Schmidt
    decomposition, so rank-deficient ``R(rho)`` gives the same witness as
    ``ccn_witness``.
    '''
    tol = resolve(tol)
    u, _, v = realign_svd(rho, tol=tol)
    vh = v.conj().T

    match form:
        case 'direct':
            pair_sum = inverse_realign(u @ vh, rho.dim_a, rho.dim_b)
            origin: WitnessOrigin = 'ccn_realign'
        case 'transposed':
            pair_sum = inverse_realign(u.conj() @ vh.conj(), rho.dim_a, rho.dim_b).T
            origin = 'ccn_realign_transposed'
        case _:
            raise ParameterError(f"unknown witness form {form!r}")

    defect = hermiticity_defect(pair_sum)
    if defect > tol.herm:
        raise NotHermitianError(defect, "R^-1(U V^dagger)")
    n = rho.dim_a * rho.dim_b
    return Witness(dim_a=rho.dim_a, dim_b=rho.dim_b, mat=np.eye(n) - pair_sum, origin=origin)


def witness_value(w: Witness, rho: DensityMatrix, *, tol: Tolerances | None = None) -> CriterionReport:
    '''
    ``Tr(W rho)``; a negative value detects entanglement.
    '''
    tol = resolve(tol)
    if (w.dim_a, w.dim_b) != (rho.dim_a, rho.dim_b):
        raise DimensionError(f"witness dims ({w.dim_a}, {w.dim_b}) do not match state dims {rho.dims}")
    value = expectation(rho, w.mat, tol=tol)
    return _report('witness', value, value < -tol.detect, origin=w.origin)


def witness_check(rho: DensityMatrix, *, tol: Tolerances | None = None) -> CriterionReport:
    '''
    Evaluate the CCN witness of ``rho`` on ``rho`` itself.
    '''
    return witness_value(ccn_witness(rho, tol=tol), rho, tol=tol)


def lur_bound(d: int) -> float:
    '''
    Lower bound ``d - 1`` on the summed variances of any ``d^2`` LOOs.
    '''
    if d < 2:
        raise ParameterError(f"dimension must be >= 2, got {d}")
    return float(d - 1)


def lur_generic(
    rho: DensityMatrix,
    obs_a: Sequence[npt.ArrayLike],
    obs_b: Sequence[npt.ArrayLike],
    c_a: float,
    c_b: float,
    *,
    tol: Tolerances | None = None,
) -> CriterionReport:
    '''
    Local uncertainty relation
    ``sum_k Var(A_k (x) 1 + 1 (x) B_k) >= C_A + C_B``.

    ``value`` is the left side minus the bound. ``C_A`` and ``C_B`` are taken
    on trust: they must be valid uncertainty bounds for the local observables.
    '''
    tol = resolve(tol)
    if len(obs_a) != len(obs_b):
        raise DimensionError(f"observable lists differ in length: {len(obs_a)} vs {len(obs_b)}")

    eye_a = np.eye(rho.dim_a)
    eye_b = np.eye(rho.dim_b)
    variances = []
    for a, b in zip(obs_a, obs_b):
        a = ensure_hermitian(a, tol=tol, what="A-side observable")
        b = ensure_hermitian(b, tol=tol, what="B-side observable")
        if a.shape != (rho.dim_a,) * 2 or b.shape != (rho.dim_b,) * 2:
            raise DimensionError(
                f"observables of shapes {a.shape}, {b.shape} do not match state dims {rho.dims}"
            )
        variances.append(variance(rho, kron(a, eye_b) + kron(eye_a, b), tol=tol))

    total = float(np.sum(variances))
    value = total - (c_a + c_b)
    return _report(
        'lur_generic',
        value,
        value < -tol.detect,
        variance_sum=total,
        bound=float(c_a + c_b),
    )


def _operator_stack(ops: Sequence[npt.ArrayLike] | OperatorStack, d: int, side: str) -> OperatorStack:
    if isinstance(ops, LOOBasis):
        ops = ops.ops
    if len(ops) == 0:
        return np.zeros((0, d, d), dtype=np.complex128)
    stack = np.stack([as_matrix(g) for g in ops])
    if stack.shape[1:] != (d, d):
        raise DimensionError(f"{side}-side operators have shape {stack.shape[1:]}, expected ({d}, {d})")
    return stack


def lur_ccn_value(
    rho: DensityMatrix,
    ops_a: Sequence[npt.ArrayLike] | OperatorStack | LOOBasis,
    ops_b: Sequence[npt.ArrayLike] | OperatorStack | LOOBasis,
    *,
    tol: Tolerances | None = None,
) -> CriterionReport:
    '''
    The LOO uncertainty relation in witness form,

    ``1 - sum_k <G^A_k (x) G^B_k> - 1/2 sum_k <G^A_k (x) 1 - 1 (x) G^B_k>^2 >= 0``

    for separable states. The first two terms are the CCN witness
    expectation; the subtracted squares only make the test stronger.

    Parameters
    ----------
    rho : DensityMatrix
    ops_a, ops_b : operator lists of equal length
        LOO sets, padded with zero operators on the smaller side.

    Returns
    -------
    CriterionReport
        ``details`` holds ``linear_sum`` and ``quadratic_sum`` with
        ``value = 1 - linear_sum - quadratic_sum / 2``.
    '''
    tol = resolve(tol)
    a = _operator_stack(ops_a, rho.dim_a, 'A')
    b = _operator_stack(ops_b, rho.dim_b, 'B')
    if a.shape[0] != b.shape[0]:
        raise DimensionError(f"operator lists differ in length: {a.shape[0]} vs {b.shape[0]}")

    rho4 = np.asarray(rho.mat).reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    correlations = np.einsum('ikjl,nji,nlk->n', rho4, a, b)
    local_a = np.einsum('ij,nji->n', partial_trace(rho, 'a'), a)
    local_b = np.einsum('ij,nji->n', partial_trace(rho, 'b'), b)

    residue = max(
        float(np.max(np.abs(x.imag), initial=0.0)) for x in (correlations, local_a, local_b)
    )
    if residue > tol.herm:
        raise NotHermitianError(residue, "LOO expectation values")

    linear_sum = float(np.sum(correlations.real))
    quadratic_sum = float(np.sum((local_a.real - local_b.real) ** 2))
    value = 1.0 - linear_sum - 0.5 * quadratic_sum
    return _report(
        'lur_ccn',
        value,
        value < -tol.detect,
        linear_sum=linear_sum,
        quadratic_sum=quadratic_sum,
        linear_part=1.0 - linear_sum,
        quadratic_part=0.5 * quadratic_sum,
        n_operators=int(a.shape[0]),
    )


def fixed_loos_from(rho: DensityMatrix, *, tol: Tolerances | None = None) -> LOOPair:
    '''
    LOO lists taken from the operator Schmidt decomposition of ``rho``.

    For ``d_A != d_B`` the Schmidt operators on the larger side are
    completed to a full LOO set and the smaller side is padded with zero
    operators.
    '''
    schmidt = operator_schmidt(rho, tol=tol)
    da, db = rho.dim_a, rho.dim_b
    ops_a, ops_b = schmidt.ops_a, schmidt.ops_b
    if da == db:
        return LOOPair(ops_a=ops_a, ops_b=ops_b)

    if da < db:
        full_b = complete_loos(ops_b, db, tol=tol).ops
        pad = np.zeros((db * db - ops_a.shape[0], da, da), dtype=np.complex128)
        return LOOPair(ops_a=np.concatenate([ops_a, pad]), ops_b=np.asarray(full_b), completed_side='b')

    full_a = complete_loos(ops_a, da, tol=tol).ops
    pad = np.zeros((da * da - ops_b.shape[0], db, db), dtype=np.complex128)
    return LOOPair(ops_a=np.asarray(full_a), ops_b=np.concatenate([ops_b, pad]), completed_side='a')


def lur_fixed(rho: DensityMatrix, loos: LOOPair, *, tol: Tolerances | None = None) -> CriterionReport:
    '''
    ``lur_ccn_value`` with operator lists fixed in advance, for example
    from a reference state of a family.
    '''
    return lur_ccn_value(rho, loos.ops_a, loos.ops_b, tol=tol)


def lur_detect(rho: DensityMatrix, *, tol: Tolerances | None = None) -> CriterionReport:
    '''
    Local uncertainty relation with the LOOs taken from the Schmidt
    decomposition of ``rho`` itself. Detects every state the CCN criterion
    detects.
    '''
    loos = fixed_loos_from(rho, tol=tol)
    report = lur_ccn_value(rho, loos.ops_a, loos.ops_b, tol=tol)
    return dc.replace(report, details={**report.details, "completed_side": loos.completed_side})
