from ent_crit.config import Tolerances
from ent_crit.errors import ParameterError
from ent_crit.scan import bisect_threshold, default_fixed_loos, get_family
from ent_crit.types import SCAN_CRITERIA

from .schema import Meta, ScanDocument


def cmd_scan(
    family: str,
    criterion: str,
    bracket: tuple[float, float] | None = None,
    step: float = 1e-4,
    *,
    tol: Tolerances,
    seed: int | None,
    meta: bool = True,
    workers: int = 1,
) -> ScanDocument:
    if criterion not in SCAN_CRITERIA:
        raise ParameterError(f"unknown criterion {criterion!r}; choose from {', '.join(SCAN_CRITERIA)}")
    fam = get_family(family)
    fixed = default_fixed_loos(fam, tolerances=tol) if criterion == 'lur_fixed' else None
    result = bisect_threshold(
        fam,
        criterion,  # type: ignore[arg-type]
        bracket,
        step,
        fixed,
        tolerances=tol,
        workers=workers,
    )
    return ScanDocument(
        **result.as_dict(),
        meta=Meta.now(seed=seed, tol=tol) if meta else None,
    )
