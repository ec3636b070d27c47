'''
Nonlinear improvements of the CCN witness through its Jamiolkowski map.

For a witness ``W`` on ``d x d`` the positive map is
``Lambda(s) = Tr_A[W (s^T (x) 1_B)]``, and for a pure state ``psi`` on
``H_A (x) H_A`` the functional

    F(rho) = <W'> - |<X>|^2 / s(psi),   X = (I (x) d Lambda')(|phi+><psi|)

is nonnegative on separable states. ``W' = W / (d c)`` is rescaled so that
``d Lambda'`` is trace non-increasing, with ``c = lambda_max(Tr_B W)``.
'''
from __future__ import annotations

import dataclasses as dc
import logging

import numpy as np
import numpy.typing as npt

from ent_crit.config import Tolerances, resolve
from ent_crit.core import (
    DensityMatrix,
    Matrix,
    as_matrix,
    eigvals_hermitian,
    ensure_unitary,
    expectation,
    expectation_complex,
    kron,
    partial_trace,
    svd_values,
)
from ent_crit.criteria import CriterionReport, Witness
from ent_crit.errors import DimensionError, InvalidBasisError, ParameterError
from ent_crit.loo_basis import LOOBasis, validate_loos
from ent_crit.states import max_entangled, projector


logger = logging.getLogger(__name__)


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class NonlinearWitness:
    '''
    Parameters
    ----------
    w : Witness
        The rescaled witness ``W'``.
    psi : NDArray[complex128]
        Normalized pure state on ``H_A (x) H_A``.
    s_psi : float
        Largest squared Schmidt coefficient of ``psi``.
    x_op : Matrix
        ``X = (I (x) d Lambda')(|phi+><psi|)``, not Hermitian in general.
    scale : float
        ``d c``, the factor ``W`` was divided by.
    '''
    w: Witness
    psi: npt.NDArray[np.complex128]
    s_psi: float
    x_op: Matrix
    scale: float


def _square_dim(w: Witness) -> int:
    if w.dim_a != w.dim_b:
        raise DimensionError(f"nonlinear witnesses need d x d systems, got ({w.dim_a}, {w.dim_b})")
    return w.dim_a


def _witness4(w: Witness) -> npt.NDArray[np.complex128]:
    return np.asarray(w.mat).reshape(w.dim_a, w.dim_b, w.dim_a, w.dim_b)


def jamiolkowski_apply(w: Witness, rho_a: npt.ArrayLike) -> Matrix:
    '''
    The positive map ``Lambda(rho) = Tr_A[W (rho^T (x) 1_B)]`` of an
    (unscaled) witness, taking operators on ``H_A`` to operators on ``H_B``.
    '''
    sigma = as_matrix(rho_a)
    if sigma.shape != (w.dim_a, w.dim_a):
        raise DimensionError(f"input of shape {sigma.shape} does not act on H_A of dimension {w.dim_a}")
    return np.einsum('ac,abce->be', sigma, _witness4(w))


def apply_witness_map(op: npt.ArrayLike, w: Witness, factor: float = 1.0) -> Matrix:
    '''
    ``(I (x) Lambda_{factor * W})(op)`` for ``op`` on ``H_A (x) H_A``; the
    result lives on ``H_A (x) H_B``.
    '''
    d = w.dim_a
    arr = as_matrix(op)
    if arr.shape != (d * d, d * d):
        raise DimensionError(f"operator of shape {arr.shape} does not act on H_A (x) H_A, d={d}")
    x4 = np.einsum('iajc,abce->ibje', arr.reshape(d, d, d, d), _witness4(w))
    n = d * w.dim_b
    return factor * x4.reshape(n, n)


def max_entangled_expansion_check(basis: LOOBasis) -> float:
    '''
    ``max |(|phi+><phi+|) - sum_i G_i (x) G_i^T / d|``; zero for any LOO set.
    '''
    d = basis.dim
    expansion = sum(kron(g, g.T) for g in basis.ops) / d
    return float(np.max(np.abs(projector(max_entangled(d)) - expansion)))


def schmidt_coefficient_max(psi: npt.ArrayLike, d: int) -> float:
    '''
    Largest squared Schmidt coefficient of a normalized ``psi`` on ``C^d (x) C^d``.
    '''
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.size != d * d:
        raise DimensionError(f"vector of length {v.size} does not live on {d}x{d}")
    return float(svd_values(v.reshape(d, d))[0] ** 2)


def rescale_factor(w: Witness, *, tol: Tolerances | None = None) -> float:
    '''
    ``d * lambda_max(Tr_B W)``. Dividing ``W`` by it makes ``d Lambda``
    trace non-increasing on states.
    '''
    tol = resolve(tol)
    d = _square_dim(w)
    c = float(eigvals_hermitian(partial_trace(w, 'a'), tol=tol)[-1])
    if c <= tol.eig:
        raise ParameterError(f"Tr_B W has no positive eigenvalue (max {c:.3e}); not a witness")
    return d * c


def rescaled(w: Witness, *, tol: Tolerances | None = None) -> tuple[Witness, float]:
    scale = rescale_factor(w, tol=tol)
    logger.debug("rescaling witness by %.6g", scale)
    return dc.replace(w, mat=w.mat / scale, ops_a=None, ops_b=None), scale


def build_nonlinear(w: Witness, psi: npt.ArrayLike, *, tol: Tolerances | None = None) -> NonlinearWitness:
    '''
    Build the nonlinear witness for ``W`` and a pure state ``psi``.

    Parameters
    ----------
    w : Witness
        Unscaled witness on a ``d x d`` system.
    psi : ArrayLike
        State on ``H_A (x) H_A``; normalized on the way in.

    Returns
    -------
    NonlinearWitness
    '''
    d = _square_dim(w)
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.size != d * d:
        raise DimensionError(f"psi of length {v.size} does not live on {d}x{d}")
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ParameterError("psi is the zero vector")
    v = v / norm

    w_scaled, scale = rescaled(w, tol=tol)
    # d Lambda of W' is Lambda of d W' = W * d / scale
    x_op = apply_witness_map(np.outer(max_entangled(d), v.conj()), w, factor=d / scale)
    return NonlinearWitness(
        w=w_scaled,
        psi=v,
        s_psi=schmidt_coefficient_max(v, d),
        x_op=x_op,
        scale=scale,
    )


def _nonlinear_report(
    linear: float,
    x_mean: complex,
    x_dagger_mean: complex,
    weight: float,
    tol: Tolerances,
    **details,
) -> CriterionReport:
    subtracted = weight * (x_mean * x_dagger_mean).real
    value = linear - subtracted
    return CriterionReport(
        criterion='nonlinear',
        value=float(value),
        detected=bool(value < -tol.detect),
        details={'linear_part': linear, 'subtracted': float(subtracted), **details},
    )


def nonlinear_value(nw: NonlinearWitness, rho: DensityMatrix, *, tol: Tolerances | None = None) -> CriterionReport:
    '''
    ``F(rho) = <W'> - <X><X^dagger> / s(psi)``.
    '''
    tol = resolve(tol)
    if (nw.w.dim_a, nw.w.dim_b) != rho.dims:
        raise DimensionError(f"witness dims ({nw.w.dim_a}, {nw.w.dim_b}) do not match state dims {rho.dims}")
    x_mean = expectation_complex(rho, nw.x_op)
    return _nonlinear_report(
        expectation(rho, nw.w.mat, tol=tol),
        x_mean,
        x_mean.conjugate(),
        1 / nw.s_psi,
        tol,
        s_psi=nw.s_psi,
        scale=nw.scale,
        form='generic',
    )


def nl_example_unitary(
    w: Witness,
    u: npt.ArrayLike,
    rho: DensityMatrix,
    *,
    tol: Tolerances | None = None,
) -> CriterionReport:
    '''
    Closed form for ``psi = (U^dagger (x) 1)|phi+>``:
    ``F = <W'> - d <W'(U (x) 1)> <(U (x) 1)^dagger W'>``.
    '''
    tol = resolve(tol)
    d = _square_dim(w)
    u = ensure_unitary(u, tol=tol)
    if u.shape != (d, d):
        raise DimensionError(f"unitary of shape {u.shape} does not act on H_A of dimension {d}")

    w_scaled, scale = rescaled(w, tol=tol)
    local = kron(u, np.eye(w.dim_b))
    return _nonlinear_report(
        expectation(rho, w_scaled.mat, tol=tol),
        expectation_complex(rho, w_scaled.mat @ local),
        expectation_complex(rho, local.conj().T @ w_scaled.mat),
        float(d),
        tol,
        s_psi=1 / d,
        scale=scale,
        form='unitary',
    )


def nl_example_eta(
    w: Witness,
    u: npt.ArrayLike,
    basis: LOOBasis,
    rho: DensityMatrix,
    *,
    tol: Tolerances | None = None,
) -> CriterionReport:
    '''
    Closed form for ``psi = (1 (x) U^dagger)|phi+>`` through the coefficients
    ``eta_ik = Tr[G_i^T U (G^W_k)^T]``, where ``G_i`` is the LOO set used to
    expand ``|phi+><phi+|`` and ``W = 1 - sum_k G^W_k (x) G^B_k``:

        X = [sum_i Tr(G_i^T U) G_i (x) 1 - sum_ik eta_ik G_i (x) G^B_k] / (d c)

    The first sum equals ``U^T``; with ``U = 1`` this is ``W'`` and the value
    matches ``nl_example_unitary``.

    Raises
    ------
    InvalidBasisError
        ``w`` does not carry a complete set of Schmidt operators, or ``basis``
        is not a valid LOO set.
    '''
    tol = resolve(tol)
    d = _square_dim(w)
    u = ensure_unitary(u, tol=tol)
    if u.shape != (d, d) or basis.dim != d:
        raise DimensionError(f"unitary {u.shape} / basis dim {basis.dim} do not match witness dimension {d}")
    if w.ops_a is None or w.ops_b is None:
        raise InvalidBasisError(detail=f"witness of origin {w.origin!r} has no Schmidt operators")
    if w.ops_a.shape[0] != d * d:
        raise InvalidBasisError(detail=f"witness carries {w.ops_a.shape[0]} operator pairs, need {d * d}")
    report = validate_loos(basis, tol=tol)
    if not report.valid:
        raise InvalidBasisError(report)

    w_scaled, scale = rescaled(w, tol=tol)
    g = basis.ops
    g_t = g.transpose(0, 2, 1)
    eta = np.einsum('iab,bc,kac->ik', g_t, u, w.ops_a)
    identity_part = np.einsum('i,iab->ab', np.einsum('iab,ba->i', g_t, u), g)
    x_op = kron(identity_part, np.eye(d)) - np.einsum('ik,iab,kce->acbe', eta, g, w.ops_b).reshape(d * d, d * d)
    x_op = x_op / scale

    x_mean = expectation_complex(rho, x_op)
    return _nonlinear_report(
        expectation(rho, w_scaled.mat, tol=tol),
        x_mean,
        x_mean.conjugate(),
        float(d),
        tol,
        s_psi=1 / d,
        scale=scale,
        form='eta',
    )
