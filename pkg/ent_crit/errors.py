from __future__ import annotations

import typing

if typing.TYPE_CHECKING:
    from ent_crit.core import ValidityReport
    from ent_crit.loo_basis import BasisReport


class EntCritError(Exception):
    """Base package exception."""


class InputError(EntCritError):
    """
    Bad input supplied by the caller: wrong shapes, parameters out of
    range, unreadable or invalid state files.
    """


class DimensionError(InputError, ValueError):
    """
    Matrix size or subsystem dimensions do not match.
    """


class ParameterError(InputError, ValueError):
    """
    A scalar argument lies outside its allowed range.
    """


class InvalidStateError(InputError):
    """
    A matrix failed the density matrix checks. The defects can be
    inspected through ``report``.
    """

    def __init__(self, report: ValidityReport) -> None:
        self.report: ValidityReport = report
        super().__init__(
            "Not a valid density matrix: "
            f"hermiticity defect {report.hermiticity_defect:.3e}, "
            f"trace defect {report.trace_defect:.3e}, "
            f"min eigenvalue {report.min_eigenvalue:.3e}"
        )


class StateFileError(InputError):
    """
    A state file could not be read or does not follow the schema.
    """

    def __init__(self, path: str, detail: str) -> None:
        self.path: str = path
        self.detail: str = detail
        super().__init__(f"{path}: {detail}")


class CriterionError(EntCritError):
    """
    Failures while evaluating a criterion on otherwise valid input.
    """


class NotHermitianError(CriterionError):
    """
    An operator expected to be Hermitian is not, or an expectation value
    carries an imaginary part above tolerance.
    """

    def __init__(self, defect: float, what: str = "operator") -> None:
        self.defect: float = defect
        super().__init__(f"{what} is not Hermitian (defect {defect:.3e})")


class NotUnitaryError(CriterionError):
    """
    ``U^dagger U`` differs from the identity beyond tolerance.
    """

    def __init__(self, defect: float) -> None:
        self.defect: float = defect
        super().__init__(f"matrix is not unitary (defect {defect:.3e})")


class InvalidBasisError(CriterionError):
    """
    A set of operators is not a valid set of local orthogonal observables.
    """

    def __init__(self, report: BasisReport | None = None, detail: str | None = None) -> None:
        self.report: BasisReport | None = report
        if detail is None and report is not None:
            detail = (
                f"orthonormality defect {report.orthonormality_defect:.3e}, "
                f"hermiticity defect {report.hermiticity_defect:.3e}, "
                f"completeness defect {report.completeness_defect:.3e}"
            )
        super().__init__(f"invalid LOO basis: {detail}")


class DecompositionError(CriterionError):
    """
    An eigen- or singular value decomposition did not converge.
    """


class BracketError(CriterionError):
    """
    Scan endpoints do not straddle the detection boundary.
    """

    def __init__(self, lo: float, hi: float, detected_lo: bool, detected_hi: bool) -> None:
        self.lo: float = lo
        self.hi: float = hi
        self.detected_lo: bool = detected_lo
        self.detected_hi: bool = detected_hi
        super().__init__(
            f"bracket [{lo}, {hi}] does not straddle detection "
            f"(detected at lo={detected_lo}, at hi={detected_hi})"
        )


def exit_code_for(exc: BaseException | None) -> int:
    '''
    Get the CLI exit code for an exception.

    Parameters
    ----------
    exc : BaseException | None

    Returns
    -------
    int
        0 on success, 2 for input errors, 1 for anything else.
    '''
    match exc:
        case None:
            return 0
        case InputError():
            return 2
        case _:
            return 1
