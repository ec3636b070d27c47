'''
Reproduction suite behind ``ent-crit demo``: the thresholds of both state
families, the sampled properties and the nonlinear fixed points, each
checked against its target value.
'''
import logging

import numpy as np

from ent_crit.config import Tolerances
from ent_crit.core import trace_norm
from ent_crit.criteria import (
    ccn_check,
    ccn_witness,
    ccn_witness_realign,
    fixed_loos_from,
    lur_detect,
    lur_fixed,
    ppt_check,
)
from ent_crit.nonlinear import nl_example_unitary
from ent_crit.scan import bisect_threshold, default_fixed_loos
from ent_crit.schmidt import operator_schmidt, realign
from ent_crit.states import (
    basis_vector,
    maximally_mixed,
    noisy_singlet,
    noisy_singlet_family,
    product_state,
    random_density,
    separable_corpus,
    singlet,
    state_corpus,
    tiles,
    tiles_family,
    tiles_rho_be,
)

from .schema import DemoDocument, DemoRow, Meta


logger = logging.getLogger(__name__)

SCAN_STEP = 1e-4
THEOREM_SAMPLES = 300
SEPARABLE_SAMPLES = 300
SCHMIDT_SAMPLES = 200
WITNESS_SAMPLES = 100


def _within(name: str, observed: float, target: float, tolerance: float) -> DemoRow:
    return DemoRow(
        name=name,
        expected=f"{target} +- {tolerance:g}",
        observed=observed,
        passed=bool(abs(observed - target) <= tolerance),
    )


def _flag(name: str, observed: bool, expected: bool = True) -> DemoRow:
    return DemoRow(name=name, expected=str(expected).lower(), observed=observed, passed=observed is expected)


def _count(name: str, failures: int, samples: int) -> DemoRow:
    return DemoRow(name=name, expected=f"0 of {samples}", observed=failures, passed=failures == 0)


def _below(name: str, observed: float, limit: float) -> DemoRow:
    return DemoRow(name=name, expected=f"< {limit:g}", observed=observed, passed=bool(observed < limit))


def noisy_singlet_rows(tol: Tolerances) -> list[DemoRow]:
    family = noisy_singlet_family()
    pauli = default_fixed_loos(family, tolerances=tol)
    ccn = bisect_threshold(family, 'ccn', (0.0, 1.0), SCAN_STEP, tolerances=tol)
    lur = bisect_threshold(family, 'lur_fixed', (0.0, 1.0), SCAN_STEP, pauli, tolerances=tol)
    gap = noisy_singlet(0.27)
    return [
        _within('noisy_singlet ccn threshold', ccn.threshold, 0.292, 1e-3),
        _within('noisy_singlet lur threshold (Pauli LOOs)', lur.threshold, 0.250, 1e-3),
        _flag('noisy_singlet(0.27) lur detected', lur_fixed(gap, pauli, tol=tol).detected),
        _flag('noisy_singlet(0.27) ccn detected', ccn_check(gap, tol=tol).detected, expected=False),
        _flag('noisy_singlet(0.001) ppt detected', ppt_check(noisy_singlet(1e-3), tol=tol).detected),
    ]


def tiles_rows(tol: Tolerances) -> list[DemoRow]:
    family = tiles_family()
    ccn = bisect_threshold(family, 'ccn', (0.5, 1.0), SCAN_STEP, tolerances=tol)
    loos = fixed_loos_from(tiles(ccn.threshold), tol=tol)
    lur = bisect_threshold(family, 'lur_fixed', (0.5, 1.0), SCAN_STEP, loos, tolerances=tol)
    min_pt = ppt_check(tiles_rho_be(), tol=tol).value
    return [
        _within('tiles ccn threshold', ccn.threshold, 0.8897, 5e-4),
        _within('tiles lur threshold (LOOs fixed at ccn threshold)', lur.threshold, 0.8885, 5e-4),
        DemoRow(
            name='tiles bound entangled state min PT eigenvalue',
            expected='>= -1e-09',
            observed=min_pt,
            passed=min_pt >= -1e-9,
        ),
    ]


def theorem_row(seed: int, tol: Tolerances) -> DemoRow:
    failures = sum(
        1
        for rho in state_corpus(THEOREM_SAMPLES, seed)
        if ccn_check(rho, tol=tol).detected and not lur_detect(rho, tol=tol).detected
    )
    return _count('ccn detected implies lur detected', failures, THEOREM_SAMPLES)


def separable_row(seed: int, tol: Tolerances) -> DemoRow:
    failures = 0
    for rho in separable_corpus(SEPARABLE_SAMPLES, seed):
        reports = [ppt_check(rho, tol=tol), ccn_check(rho, tol=tol), lur_detect(rho, tol=tol)]
        if rho.dim_a == rho.dim_b:
            reports.append(nl_example_unitary(ccn_witness(rho, tol=tol), np.eye(rho.dim_a), rho, tol=tol))
        failures += any(r.detected for r in reports)
    return _count('separable states never detected', failures, SEPARABLE_SAMPLES)


def schmidt_rows(seed: int, tol: Tolerances) -> list[DemoRow]:
    deviation = max(
        abs(operator_schmidt(rho, tol=tol).schmidt_sum - trace_norm(realign(rho)))
        for rho in state_corpus(SCHMIDT_SAMPLES, seed + 1)
    )
    return [
        _below('schmidt sum vs realigned trace norm', deviation, 1e-9),
        _within('singlet schmidt sum', operator_schmidt(singlet(), tol=tol).schmidt_sum, 2.0, 1e-10),
        _within(
            'maximally mixed 3x3 schmidt sum',
            operator_schmidt(maximally_mixed(3, 3), tol=tol).schmidt_sum,
            1 / 3,
            1e-12,
        ),
    ]


def witness_row(seed: int, tol: Tolerances) -> DemoRow:
    root = np.random.SeedSequence(seed + 2)
    deviation = 0.0
    for k, child in enumerate(root.spawn(WITNESS_SAMPLES)):
        da, db = ((2, 2), (2, 3), (3, 3))[k % 3]
        rho = random_density(da, db, seed=child)
        w = ccn_witness(rho, tol=tol).mat
        for form in ('direct', 'transposed'):
            deviation = max(deviation, float(np.max(np.abs(w - ccn_witness_realign(rho, form=form, tol=tol).mat))))
    return _below('schmidt and realignment witnesses agree', deviation, 1e-9)


def fixed_point_rows(tol: Tolerances) -> list[DemoRow]:
    w = ccn_witness(singlet(), tol=tol)
    eye = np.eye(2)
    e0 = basis_vector(2, 0)
    return [
        _within('nonlinear F(singlet)', nl_example_unitary(w, eye, singlet(), tol=tol).value, -1.0, 1e-9),
        _within('nonlinear F(|00>)', nl_example_unitary(w, eye, product_state(e0, e0), tol=tol).value, 0.0, 1e-9),
        _within('nonlinear F(1/4)', nl_example_unitary(w, eye, maximally_mixed(2, 2), tol=tol).value, 0.125, 1e-9),
    ]


def run_demo(seed: int, tol: Tolerances) -> list[DemoRow]:
    rows = [
        *noisy_singlet_rows(tol),
        *tiles_rows(tol),
        theorem_row(seed, tol),
        separable_row(seed, tol),
        *schmidt_rows(seed, tol),
        witness_row(seed, tol),
        *fixed_point_rows(tol),
    ]
    for row in rows:
        status = 'pass' if row.passed else 'FAIL'
        logger.info("%s %s: observed %s, expected %s", status, row.name, row.observed, row.expected)
    return rows


def cmd_demo(*, tol: Tolerances, seed: int, meta: bool = True) -> DemoDocument:
    rows = run_demo(seed, tol)
    return DemoDocument(
        rows=rows,
        passed=all(r.passed for r in rows),
        meta=Meta.now(seed=seed, tol=tol) if meta else None,
    )


def format_table(doc: DemoDocument) -> str:
    width = max(len(r.name) for r in doc.rows)
    lines = [
        f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.observed!s:<24}  expected {r.expected}"
        for r in doc.rows
    ]
    lines.append(f"{sum(r.passed for r in doc.rows)}/{len(doc.rows)} rows passed")
    return '\n'.join(lines)
