from typing import Literal


CheckCriterion = Literal[
    'ppt',
    'ccn',
    'lur',
    'witness',
    'nonlinear',
]
ScanCriterion = Literal[
    'ppt',
    'ccn',
    'lur',
    'lur_fixed',
    'witness',
]
FamilyName = Literal[
    'noisy_singlet',
    'tiles',
]

CHECK_CRITERIA: tuple[CheckCriterion, ...] = ('ppt', 'ccn', 'lur', 'witness', 'nonlinear')
SCAN_CRITERIA: tuple[ScanCriterion, ...] = ('ppt', 'ccn', 'lur', 'lur_fixed', 'witness')
FAMILY_NAMES: tuple[FamilyName, ...] = ('noisy_singlet', 'tiles')
