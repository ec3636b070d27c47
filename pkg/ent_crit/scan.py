'''
Bisection of detection thresholds over one-parameter state families.
'''
from __future__ import annotations

import dataclasses as dc
import logging
import typing
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ent_crit.config import Tolerances, resolve
from ent_crit.core import DensityMatrix
from ent_crit.criteria import (
    CriterionReport,
    LOOPair,
    ccn_check,
    fixed_loos_from,
    lur_detect,
    lur_fixed,
    ppt_check,
    witness_check,
)
from ent_crit.errors import BracketError, ParameterError
from ent_crit.loo_basis import pauli_loos
from ent_crit.states import FAMILIES, StateFamily
from ent_crit.types import ScanCriterion


logger = logging.getLogger(__name__)

Check = Callable[[DensityMatrix], CriterionReport]

MONOTONICITY_SAMPLES = 16


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class ScanResult:
    '''
    Outcome of a threshold scan.

    ``threshold`` is the midpoint of the final bracket. Unless
    ``monotonicity_warning`` is set, states above ``threshold + 2 * tolerance``
    are detected and states below ``threshold - 2 * tolerance`` are not.
    '''
    family: str
    criterion: str
    threshold: float
    bracket: tuple[float, float]
    tolerance: float
    evaluations: int
    monotonicity_warning: bool

    def as_dict(self) -> dict[str, typing.Any]:
        return {
            'family': self.family,
            'criterion': self.criterion,
            'threshold': self.threshold,
            'bracket': list(self.bracket),
            'tolerance': self.tolerance,
            'evaluations': self.evaluations,
            'monotonicity_warning': self.monotonicity_warning,
        }


def get_check(
    criterion: ScanCriterion,
    *,
    fixed_loos: LOOPair | None = None,
    tol: Tolerances | None = None,
) -> Check:
    '''
    Resolve a criterion name to a callable on states.

    Raises
    ------
    ParameterError
        Unknown name, or ``lur_fixed`` without operator lists.
    '''
    match criterion:
        case 'ppt':
            return lambda rho: ppt_check(rho, tol=tol)
        case 'ccn':
            return lambda rho: ccn_check(rho, tol=tol)
        case 'lur':
            return lambda rho: lur_detect(rho, tol=tol)
        case 'witness':
            return lambda rho: witness_check(rho, tol=tol)
        case 'lur_fixed':
            if fixed_loos is None:
                raise ParameterError("criterion 'lur_fixed' needs fixed LOO lists")
            return lambda rho: lur_fixed(rho, fixed_loos, tol=tol)
        case _:
            raise ParameterError(f"unknown criterion {criterion!r}")


def get_family(name: str) -> StateFamily:
    try:
        return FAMILIES[name]()
    except KeyError:
        raise ParameterError(f"unknown family {name!r}; choose from {', '.join(sorted(FAMILIES))}") from None


def bisect_threshold(
    family: StateFamily,
    criterion: ScanCriterion,
    bracket: tuple[float, float] | None = None,
    tol: float = 1e-4,
    fixed_loos: LOOPair | None = None,
    *,
    tolerances: Tolerances | None = None,
    workers: int = 1,
) -> ScanResult:
    '''
    Locate the parameter where a criterion starts detecting.

    Parameters
    ----------
    family : StateFamily
    criterion : ScanCriterion
    bracket : tuple[float, float], optional
        ``(p_lo, p_hi)`` with no detection at ``p_lo`` and detection at
        ``p_hi``. Defaults to the family's parameter range.
    tol : float
        Final bracket width.
    fixed_loos : LOOPair, optional
        Operator lists for ``lur_fixed``.
    workers : int
        Threads used for the monotonicity samples.

    Returns
    -------
    ScanResult

    Raises
    ------
    ParameterError
        ``tol <= 0`` or a malformed bracket.
    BracketError
        The endpoints do not straddle detection.
    '''
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    lo, hi = bracket if bracket is not None else family.param_range
    if not lo < hi:
        raise ParameterError(f"bracket must satisfy lo < hi, got [{lo}, {hi}]")

    check = get_check(criterion, fixed_loos=fixed_loos, tol=resolve(tolerances))
    evaluations = 0

    def detected(p: float) -> bool:
        return check(family(p)).detected

    detected_lo, detected_hi = detected(lo), detected(hi)
    evaluations += 2
    if detected_lo or not detected_hi:
        raise BracketError(lo, hi, detected_lo, detected_hi)

    samples = np.linspace(lo, hi, MONOTONICITY_SAMPLES)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flags = list(pool.map(detected, samples))
    else:
        flags = [detected(p) for p in samples]
    evaluations += len(samples)
    # detection must switch on once and stay on
    warning = any(a and not b for a, b in zip(flags, flags[1:]))
    if warning:
        logger.warning("%s/%s: detection is not monotone in p on [%s, %s]", family.name, criterion, lo, hi)

    while hi - lo > tol:
        mid = (lo + hi) / 2
        evaluations += 1
        if detected(mid):
            hi = mid
        else:
            lo = mid
        logger.debug("%s/%s: bracket [%.8f, %.8f]", family.name, criterion, lo, hi)

    result = ScanResult(
        family=family.name,
        criterion=criterion,
        threshold=(lo + hi) / 2,
        bracket=(lo, hi),
        tolerance=tol,
        evaluations=evaluations,
        monotonicity_warning=warning,
    )
    logger.info("%s/%s: threshold %.6f after %d evaluations", family.name, criterion, result.threshold, evaluations)
    return result


def default_fixed_loos(
    family: StateFamily,
    *,
    tolerances: Tolerances | None = None,
    tol: float = 1e-5,
) -> LOOPair:
    '''
    Fixed LOO lists for a named family.

    ``noisy_singlet`` uses the signed Pauli sets of the singlet. ``tiles``
    uses the Schmidt operators of the state at its CCN threshold, which is
    located first.
    '''
    match family.name:
        case 'noisy_singlet':
            return LOOPair.from_bases(*pauli_loos())
        case 'tiles':
            ccn = bisect_threshold(family, 'ccn', (0.5, 1.0), tol, tolerances=tolerances)
            return fixed_loos_from(family(ccn.threshold), tol=tolerances)
        case _:
            raise ParameterError(f"no fixed LOOs defined for family {family.name!r}")
