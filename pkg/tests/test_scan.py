import logging

import pytest

from ent_crit.config import DEFAULT_TOLERANCES
from ent_crit.criteria import ccn_check, lur_fixed
from ent_crit.errors import BracketError, ParameterError
from ent_crit.scan import MONOTONICITY_SAMPLES, bisect_threshold, default_fixed_loos, get_check, get_family
from ent_crit.states import StateFamily, noisy_singlet, noisy_singlet_family, tiles_family
from ent_crit.types import SCAN_CRITERIA


def test_noisy_singlet_ccn_threshold():
    family = noisy_singlet_family()
    result = bisect_threshold(family, 'ccn', (0.0, 1.0), 1e-4)
    assert result.threshold == pytest.approx(0.292, abs=1e-3)
    assert result.bracket[1] - result.bracket[0] <= 1e-4
    assert not result.monotonicity_warning
    assert result.evaluations == 2 + MONOTONICITY_SAMPLES + 14
    # detection switches within a couple of tolerances of the threshold
    assert ccn_check(family(result.threshold + 2e-4)).detected
    assert not ccn_check(family(result.threshold - 2e-4)).detected


def test_noisy_singlet_lur_threshold(pauli_pair):
    result = bisect_threshold(noisy_singlet_family(), 'lur_fixed', (0.0, 1.0), 1e-4, pauli_pair)
    assert result.threshold == pytest.approx(0.25, abs=1e-3)
    assert lur_fixed(noisy_singlet(result.threshold + 2e-4), pauli_pair).detected


def test_tiles_ccn_threshold():
    result = bisect_threshold(tiles_family(), 'ccn', (0.5, 1.0), 1e-4)
    assert result.threshold == pytest.approx(0.8897, abs=5e-4)


def test_tiles_lur_threshold_with_fixed_loos():
    family = tiles_family()
    loos = default_fixed_loos(family)
    result = bisect_threshold(family, 'lur_fixed', (0.5, 1.0), 1e-4, loos)
    assert result.threshold == pytest.approx(0.8885, abs=5e-4)


def test_ppt_threshold_is_zero_for_noisy_singlet():
    result = bisect_threshold(noisy_singlet_family(), 'ppt', (0.0, 1.0), 1e-4)
    assert result.threshold < 1e-3


def test_workers_give_the_same_result():
    family = noisy_singlet_family()
    serial = bisect_threshold(family, 'ccn', (0.0, 1.0), 1e-3)
    threaded = bisect_threshold(family, 'ccn', (0.0, 1.0), 1e-3, workers=4)
    assert threaded == serial


def test_bracket_must_straddle_detection():
    with pytest.raises(BracketError) as info:
        bisect_threshold(noisy_singlet_family(), 'ccn', (0.5, 1.0), 1e-4)
    assert info.value.detected_lo


@pytest.mark.parametrize('tol', [0.0, -1e-3])
def test_tol_must_be_positive(tol):
    with pytest.raises(ParameterError):
        bisect_threshold(noisy_singlet_family(), 'ccn', (0.0, 1.0), tol)


def test_reversed_bracket():
    with pytest.raises(ParameterError):
        bisect_threshold(noisy_singlet_family(), 'ccn', (1.0, 0.0), 1e-4)


def test_non_monotone_family_warns(caplog):
    # detected only on [0.3, 0.6] and again at the top end
    def generator(p: float):
        return noisy_singlet(1.0 if p > 0.95 else (0.9 if 0.3 <= p <= 0.6 else 0.0))

    family = StateFamily(name='zigzag', dim_a=2, dim_b=2, param_range=(0.0, 1.0), generator=generator)
    with caplog.at_level(logging.WARNING, logger='ent_crit.scan'):
        result = bisect_threshold(family, 'ccn', (0.0, 1.0), 1e-3)
    assert result.monotonicity_warning
    assert 'not monotone' in caplog.text


def test_lur_fixed_needs_loos():
    with pytest.raises(ParameterError):
        get_check('lur_fixed')


def test_unknown_names():
    with pytest.raises(ParameterError):
        get_check('bogus')  # type: ignore[arg-type]
    with pytest.raises(ParameterError):
        get_family('bogus')


def test_detection_margin_shifts_threshold():
    tol = DEFAULT_TOLERANCES.with_options(detect=0.1)
    result = bisect_threshold(noisy_singlet_family(), 'ccn', (0.0, 1.0), 1e-3, tolerances=tol)
    assert result.threshold > 0.292 + 1e-3


def test_result_as_dict():
    result = bisect_threshold(noisy_singlet_family(), 'ccn', (0.0, 1.0), 1e-2)
    doc = result.as_dict()
    assert doc['family'] == 'noisy_singlet'
    assert doc['criterion'] == 'ccn'
    assert doc['bracket'] == list(result.bracket)


@pytest.mark.parametrize('criterion', SCAN_CRITERIA)
def test_every_scan_criterion_resolves(criterion, pauli_pair, singlet_state):
    check = get_check(criterion, fixed_loos=pauli_pair)
    assert check(singlet_state).detected
