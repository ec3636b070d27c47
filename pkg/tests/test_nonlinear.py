import numpy as np
import pytest
from numpy.testing import assert_allclose

from ent_crit.core import kron
from ent_crit.criteria import Witness, ccn_witness, witness_value
from ent_crit.errors import DimensionError, InvalidBasisError, NotUnitaryError
from ent_crit.loo_basis import canonical_loos, pauli_loos, transform_loos
from ent_crit.nonlinear import (
    apply_witness_map,
    build_nonlinear,
    jamiolkowski_apply,
    max_entangled_expansion_check,
    nl_example_eta,
    nl_example_unitary,
    nonlinear_value,
    rescale_factor,
    rescaled,
    schmidt_coefficient_max,
)
from ent_crit.states import (
    basis_vector,
    haar_unitary,
    max_entangled,
    noisy_singlet,
    projector,
    random_density,
    random_pure_vector,
    separable_corpus,
    singlet,
    state_corpus,
    tiles,
)


@pytest.fixture
def singlet_witness() -> Witness:
    return ccn_witness(singlet())


def test_fixed_points(singlet_witness, singlet_state, product_00, mixed_2x2):
    eye = np.eye(2)
    assert nl_example_unitary(singlet_witness, eye, singlet_state).value == pytest.approx(-1.0, abs=1e-9)
    assert nl_example_unitary(singlet_witness, eye, product_00).value == pytest.approx(0.0, abs=1e-9)
    assert nl_example_unitary(singlet_witness, eye, mixed_2x2).value == pytest.approx(0.125, abs=1e-9)


def test_fixed_points_by_direct_trace(singlet_state, product_00, mixed_2x2):
    # W = SWAP, w' = SWAP / 2, F = <w'> - 2 <w'>^2
    swap = np.eye(4)[[0, 2, 1, 3]]
    for rho, expected in [(singlet_state, -1.0), (product_00, 0.0), (mixed_2x2, 0.125)]:
        mean = np.trace(rho.mat @ swap).real / 2
        assert mean - 2 * mean ** 2 == pytest.approx(expected, abs=1e-12)


def test_singlet_rescale(singlet_witness):
    assert rescale_factor(singlet_witness) == pytest.approx(2.0)
    w_scaled, scale = rescaled(singlet_witness)
    assert scale == pytest.approx(2.0)
    assert_allclose(w_scaled.mat, singlet_witness.mat / 2, atol=1e-15)
    assert w_scaled.ops_a is None


def test_jamiolkowski_trace_on_singlet_witness(singlet_witness):
    e0 = basis_vector(2, 0)
    out = jamiolkowski_apply(singlet_witness, projector(e0))
    assert np.trace(out).real == pytest.approx(1.0)
    # for SWAP the map is the transpose
    sigma = np.array([[0.3, 0.1 - 0.2j], [0.1 + 0.2j, 0.7]])
    assert_allclose(jamiolkowski_apply(singlet_witness, sigma), sigma.T, atol=1e-15)


@pytest.mark.parametrize('d', [2, 3])
def test_jamiolkowski_round_trip(d):
    rho = random_density(d, d, seed=30 + d)
    w = ccn_witness(rho)
    w_scaled, scale = rescaled(w)
    rebuilt = apply_witness_map(projector(max_entangled(d)), w, factor=d / scale)
    assert np.max(np.abs(rebuilt - w_scaled.mat)) < 1e-9
    # W = sum_ij |i><j| (x) Lambda(|i><j|)
    units = np.eye(d)
    direct = sum(
        kron(np.outer(units[i], units[j]), jamiolkowski_apply(w, np.outer(units[i], units[j])))
        for i in range(d)
        for j in range(d)
    )
    assert_allclose(direct, w.mat, atol=1e-12)


@pytest.mark.parametrize('d', [2, 3])
def test_max_entangled_expansion(d):
    assert max_entangled_expansion_check(canonical_loos(d)) < 1e-12
    rng = np.random.default_rng(d)
    q, _ = np.linalg.qr(rng.standard_normal((d * d, d * d)))
    assert max_entangled_expansion_check(transform_loos(canonical_loos(d), q)) < 1e-12


def test_schmidt_coefficient_max():
    assert schmidt_coefficient_max(max_entangled(3), 3) == pytest.approx(1 / 3)
    assert schmidt_coefficient_max(np.kron(basis_vector(2, 0), basis_vector(2, 1)), 2) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        schmidt_coefficient_max(np.ones(5), 2)


def test_generic_path_matches_unitary_form():
    for d, seed in [(2, 1), (2, 2), (3, 3), (3, 4)]:
        w = ccn_witness(random_density(d, d, rank=2, seed=seed))
        u = haar_unitary(d, seed=seed)
        psi = kron(u.conj().T, np.eye(d)) @ max_entangled(d)
        nw = build_nonlinear(w, psi)
        assert nw.s_psi == pytest.approx(1 / d)
        for rho in state_corpus(6, seed=seed, dims=((d, d),)):
            generic = nonlinear_value(nw, rho).value
            closed = nl_example_unitary(w, u, rho).value
            assert generic == pytest.approx(closed, abs=1e-10)


def test_identity_unitary_gives_linear_minus_square(singlet_witness):
    rho = noisy_singlet(0.6)
    w_scaled, _ = rescaled(singlet_witness)
    linear = witness_value(w_scaled, rho).value
    report = nl_example_unitary(singlet_witness, np.eye(2), rho)
    assert report.value == pytest.approx(linear - 2 * linear ** 2, abs=1e-12)
    assert report.details['linear_part'] == pytest.approx(linear)


@pytest.mark.parametrize('d', [2, 3])
def test_eta_form_reduces_to_unitary_form(d):
    w = ccn_witness(random_density(d, d, seed=60 + d))
    basis = canonical_loos(d)
    for rho in state_corpus(6, seed=d, dims=((d, d),)):
        eta = nl_example_eta(w, np.eye(d), basis, rho).value
        assert eta == pytest.approx(nl_example_unitary(w, np.eye(d), rho).value, abs=1e-10)


@pytest.mark.parametrize('d', [2, 3])
def test_eta_form_matches_transposed_unitary(d):
    w = ccn_witness(random_density(d, d, seed=70 + d))
    u = haar_unitary(d, seed=d)
    a, _ = pauli_loos()
    basis = a if d == 2 else canonical_loos(d)
    for rho in state_corpus(6, seed=10 + d, dims=((d, d),)):
        eta = nl_example_eta(w, u, basis, rho).value
        assert eta == pytest.approx(nl_example_unitary(w, u.T, rho).value, abs=1e-10)
        psi = kron(np.eye(d), u.conj().T) @ max_entangled(d)
        assert eta == pytest.approx(nonlinear_value(build_nonlinear(w, psi), rho).value, abs=1e-10)


def test_eta_form_needs_schmidt_operators():
    w = ccn_witness(singlet())
    external = Witness(dim_a=2, dim_b=2, mat=w.mat)
    with pytest.raises(InvalidBasisError):
        nl_example_eta(external, np.eye(2), canonical_loos(2), singlet())


def test_nonlinear_never_detects_separable_states():
    generic = {
        2: build_nonlinear(ccn_witness(noisy_singlet(0.9)), random_pure_vector(4, seed=5)),
        3: build_nonlinear(ccn_witness(tiles(0.95)), random_pure_vector(9, seed=5)),
    }
    for rho in separable_corpus(60, seed=99, dims=((2, 2), (3, 3))):
        w = ccn_witness(rho)
        d = rho.dim_a
        assert nl_example_unitary(w, np.eye(d), rho).value >= -1e-9
        assert nl_example_unitary(w, haar_unitary(d, seed=d), rho).value >= -1e-9
        assert nonlinear_value(generic[d], rho).value >= -1e-9


def test_nonlinear_improves_on_linear_witness():
    rho = noisy_singlet(0.2)
    w = ccn_witness(noisy_singlet(0.9))
    w_scaled, _ = rescaled(w)
    report = nl_example_unitary(w, np.eye(2), rho)
    assert report.value <= witness_value(w_scaled, rho).value


def test_input_validation(singlet_witness, singlet_state):
    with pytest.raises(NotUnitaryError):
        nl_example_unitary(singlet_witness, 2 * np.eye(2), singlet_state)
    with pytest.raises(DimensionError):
        nl_example_unitary(singlet_witness, np.eye(3), singlet_state)
    rect = ccn_witness(random_density(2, 3, seed=1))
    with pytest.raises(DimensionError):
        build_nonlinear(rect, np.ones(4))
    with pytest.raises(DimensionError):
        nonlinear_value(build_nonlinear(singlet_witness, max_entangled(2)), tiles(0.5))


def test_eta_form_never_detects_separable_states():
    bases = {2: canonical_loos(2), 3: canonical_loos(3)}
    for k, rho in enumerate(separable_corpus(200, seed=4242, dims=((2, 2), (3, 3)))):
        d = rho.dim_a
        u = haar_unitary(d, seed=k)
        assert nl_example_eta(ccn_witness(rho), u, bases[d], rho).value >= -1e-9


def test_nonlinear_value_never_exceeds_linear_part():
    for d in (2, 3):
        w = ccn_witness(random_density(d, d, rank=2, seed=80 + d))
        for seed in range(5):
            nw = build_nonlinear(w, random_pure_vector(d * d, seed=seed))
            for rho in state_corpus(20, seed=seed, dims=((d, d),)):
                report = nonlinear_value(nw, rho)
                assert report.value <= witness_value(nw.w, rho).value + 1e-12
                assert report.details['subtracted'] >= -1e-12
