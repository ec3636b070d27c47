from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version('py-entanglement-criteria')
except PackageNotFoundError:
    __version__ = '0.1.0'

from ent_crit.config import DEFAULT_TOLERANCES, Tolerances
from ent_crit.core import DensityMatrix, partial_trace, partial_transpose
from ent_crit.criteria import (
    CriterionReport,
    LOOPair,
    Witness,
    ccn_check,
    ccn_witness,
    ccn_witness_realign,
    lur_ccn_value,
    lur_detect,
    lur_fixed,
    lur_generic,
    ppt_check,
    witness_value,
)
from ent_crit.errors import CriterionError, EntCritError, InputError
from ent_crit.loo_basis import LOOBasis, canonical_loos, complete_loos, transform_loos, validate_loos
from ent_crit.nonlinear import build_nonlinear, nl_example_eta, nl_example_unitary, nonlinear_value
from ent_crit.scan import ScanResult, bisect_threshold
from ent_crit.schmidt import coefficient_matrix, operator_schmidt, realign
from ent_crit.states import noisy_singlet, noisy_singlet_family, singlet, tiles, tiles_family


__all__ = [
    '__version__',
    'DEFAULT_TOLERANCES',
    'Tolerances',
    'DensityMatrix',
    'partial_trace',
    'partial_transpose',
    'CriterionReport',
    'LOOPair',
    'Witness',
    'ccn_check',
    'ccn_witness',
    'ccn_witness_realign',
    'lur_ccn_value',
    'lur_detect',
    'lur_fixed',
    'lur_generic',
    'ppt_check',
    'witness_value',
    'CriterionError',
    'EntCritError',
    'InputError',
    'LOOBasis',
    'canonical_loos',
    'complete_loos',
    'transform_loos',
    'validate_loos',
    'build_nonlinear',
    'nl_example_eta',
    'nl_example_unitary',
    'nonlinear_value',
    'ScanResult',
    'bisect_threshold',
    'coefficient_matrix',
    'operator_schmidt',
    'realign',
    'noisy_singlet',
    'noisy_singlet_family',
    'singlet',
    'tiles',
    'tiles_family',
]
