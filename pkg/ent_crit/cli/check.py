import logging
from collections.abc import Callable, Sequence

import numpy as np

from ent_crit.config import Tolerances
from ent_crit.core import DensityMatrix
from ent_crit.criteria import CriterionReport, ccn_check, ccn_witness, lur_detect, ppt_check, witness_check
from ent_crit.errors import DimensionError, ParameterError
from ent_crit.nonlinear import nl_example_unitary
from ent_crit.types import CHECK_CRITERIA, CheckCriterion

from .schema import CheckDocument, Meta, ReportModel, StateFile


logger = logging.getLogger(__name__)


def nonlinear_check(rho: DensityMatrix, *, tol: Tolerances) -> CriterionReport:
    '''
    Nonlinear improvement of the state's own CCN witness with ``U = 1``.
    '''
    if rho.dim_a != rho.dim_b:
        raise DimensionError(f"criterion 'nonlinear' needs d x d systems, got {rho.dims}")
    return nl_example_unitary(ccn_witness(rho, tol=tol), np.eye(rho.dim_a), rho, tol=tol)


CHECKS: dict[CheckCriterion, Callable[..., CriterionReport]] = {
    'ppt': ppt_check,
    'ccn': ccn_check,
    'lur': lur_detect,
    'witness': witness_check,
    'nonlinear': nonlinear_check,
}


def applies(name: CheckCriterion, rho: DensityMatrix) -> bool:
    return name != 'nonlinear' or rho.dim_a == rho.dim_b


def _is_all(text: str) -> bool:
    return [part.strip() for part in text.split(',') if part.strip()] == ['all']


def parse_criteria(text: str) -> list[CheckCriterion]:
    '''
    Split a comma separated criteria list; ``all`` expands to every criterion.

    With ``all``, ``cmd_check`` later drops the criteria that do not apply to
    the state at hand.
    '''
    names = [part.strip() for part in text.split(',') if part.strip()]
    if not names:
        raise ParameterError('no criteria given')
    if names == ['all']:
        return list(CHECK_CRITERIA)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ParameterError(f"unknown criteria {', '.join(unknown)}; choose from {', '.join(CHECK_CRITERIA)}")
    return names  # type: ignore[return-value]


def run_check(
    rho: DensityMatrix,
    criteria: Sequence[CheckCriterion],
    *,
    tol: Tolerances,
) -> list[CriterionReport]:
    reports = []
    for name in criteria:
        report = CHECKS[name](rho, tol=tol)
        logger.info("%s: value %.6g detected=%s", name, report.value, report.detected)
        reports.append(report)
    return reports


def cmd_check(
    state: str,
    criteria: str,
    *,
    tol: Tolerances,
    seed: int | None,
    meta: bool = True,
) -> CheckDocument:
    names = parse_criteria(criteria)
    rho = StateFile.read(state).to_density(tol=tol)
    if _is_all(criteria):
        skipped = [n for n in names if not applies(n, rho)]
        if skipped:
            logger.info("skipping %s for dims %s", ', '.join(skipped), rho.dims)
        names = [n for n in names if n not in skipped]
    reports = run_check(rho, names, tol=tol)
    return CheckDocument(
        reports=[ReportModel.from_report(r) for r in reports],
        meta=Meta.now(seed=seed, tol=tol) if meta else None,
    )
