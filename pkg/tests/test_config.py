import math

import pytest

from ent_crit.config import DEFAULT_TOLERANCES, Tolerances, resolve
from ent_crit.core import ValidityReport
from ent_crit.errors import (
    BracketError,
    EntCritError,
    InputError,
    InvalidStateError,
    ParameterError,
    exit_code_for,
)


def test_defaults():
    tol = Tolerances()
    assert tol.herm == 1e-10
    assert tol.detect == 1e-9
    assert resolve(None) is DEFAULT_TOLERANCES
    assert resolve(tol) is tol


def test_with_options_replaces_only_given_fields():
    tol = DEFAULT_TOLERANCES.with_options(detect=0.1)
    assert tol.detect == 0.1
    assert tol.herm == DEFAULT_TOLERANCES.herm
    assert DEFAULT_TOLERANCES.detect == 1e-9


def test_with_options_rejects_unknown_names():
    with pytest.raises(ParameterError, match='Unknown tolerance'):
        DEFAULT_TOLERANCES.with_options(bogus=1.0)  # type: ignore[call-arg]


@pytest.mark.parametrize('value', [-1e-3, math.inf, math.nan])
def test_invalid_values_rejected(value):
    with pytest.raises(ParameterError):
        Tolerances(psd=value)


def test_as_dict_lists_every_tolerance():
    assert set(DEFAULT_TOLERANCES.as_dict()) == {'herm', 'trace', 'psd', 'eig', 'orth', 'unitary', 'detect'}


def test_exit_codes():
    report = ValidityReport(hermiticity_defect=0.0, trace_defect=0.5, min_eigenvalue=0.0, valid=False)
    assert exit_code_for(None) == 0
    assert exit_code_for(ParameterError('bad')) == 2
    assert exit_code_for(InvalidStateError(report)) == 2
    assert exit_code_for(BracketError(0.0, 1.0, True, True)) == 1
    assert exit_code_for(RuntimeError('boom')) == 1


def test_error_hierarchy():
    assert issubclass(ParameterError, InputError)
    assert issubclass(ParameterError, ValueError)
    assert issubclass(InputError, EntCritError)


def test_invalid_state_message_carries_defects():
    report = ValidityReport(hermiticity_defect=0.0, trace_defect=0.25, min_eigenvalue=-0.5, valid=False)
    err = InvalidStateError(report)
    assert err.report is report
    assert 'trace defect 2.500e-01' in str(err)
    assert 'min eigenvalue -5.000e-01' in str(err)
