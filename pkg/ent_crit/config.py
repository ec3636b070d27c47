from __future__ import annotations

import dataclasses as dc
import math
from typing import TypedDict, Unpack

from ent_crit.errors import ParameterError


class ToleranceOptions(TypedDict, total=False):
    '''
    Overrides for the numerical tolerances.

    Parameters
    ----------
    herm : float
        Maximum entrywise defect ``|M - M^dagger|`` accepted as Hermitian.
        Also bounds the imaginary residue of expectation values.
    trace : float
        Maximum ``|Tr(rho) - 1|`` for a density matrix.
    psd : float
        A density matrix may have eigenvalues down to ``-psd``.
    eig : float
        Eigen/SVD residual tolerance.
    orth : float
        Hilbert-Schmidt orthonormality tolerance for LOO sets.
    unitary : float
        Maximum entrywise defect of ``U^dagger U - 1``.
    detect : float
        Margin a criterion value must clear before it counts as a detection.
    '''
    herm: float
    trace: float
    psd: float
    eig: float
    orth: float
    unitary: float
    detect: float


@dc.dataclass(slots=True, kw_only=True, frozen=True)
class Tolerances:
    '''
    Tolerances shared by every operation. Sized for double precision
    spectra of matrices up to about 100 x 100.
    '''
    herm: float = 1e-10
    trace: float = 1e-9
    psd: float = 1e-9
    eig: float = 1e-10
    orth: float = 1e-10
    unitary: float = 1e-10
    detect: float = 1e-9

    def __post_init__(self) -> None:
        for field in dc.fields(self):
            value = getattr(self, field.name)
            if not math.isfinite(value) or value < 0:
                raise ParameterError(f"Tolerance {field.name!r} must be finite and >= 0, got {value!r}")

    def with_options(self, **options: Unpack[ToleranceOptions]) -> Tolerances:
        '''
        Return a copy with the given tolerances replaced.
        '''
        unknown = set(options) - {f.name for f in dc.fields(self)}
        if unknown:
            raise ParameterError(f"Unknown tolerance(s): {', '.join(sorted(unknown))}")
        return dc.replace(self, **options)

    def as_dict(self) -> dict[str, float]:
        return dc.asdict(self)


DEFAULT_TOLERANCES = Tolerances()


def resolve(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOLERANCES if tol is None else tol
